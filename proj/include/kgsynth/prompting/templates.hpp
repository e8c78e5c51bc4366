#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgsynth/common/io.hpp"

namespace kgsynth::prompting {

enum class TemplateKind { FullNote, BaselineNote, Hop1, Hop2, Hop3, Continuation, GenerationFromPriors };

std::string_view to_string(TemplateKind kind) noexcept;
TemplateKind template_kind_from_string(std::string_view s);

/// Placeholders a kind must use, and the ones it may use.
struct PlaceholderContract {
    std::set<std::string> required;
    std::set<std::string> allowed;
};
const PlaceholderContract& contract(TemplateKind kind);

/// True for the instruction-dataset kinds, which need at least
/// kMinInstructionRephrasings bodies.
bool is_instruction_kind(TemplateKind kind) noexcept;
inline constexpr std::size_t kMinInstructionRephrasings = 5;

/// A prompt with its rephrasings. `bodies[0]` is the primary wording; a
/// render picks one body uniformly.
struct PromptTemplate {
    std::string id;
    TemplateKind kind = TemplateKind::FullNote;
    std::vector<std::string> bodies;
};

/// Throws PlaceholderError if a body misses a required placeholder or uses
/// one the kind cannot fill, and ConfigError for too few bodies.
void validate(const PromptTemplate& t);

PromptTemplate template_from_json(const json& j);
json template_to_json(const PromptTemplate& t);

/// One validated template per kind.
class TemplateSet {
public:
    void add(PromptTemplate t);
    bool has(TemplateKind kind) const { return templates_.contains(kind); }
    /// Throws ConfigError when the kind is missing.
    const PromptTemplate& get(TemplateKind kind) const;

    /// Loads a template file (an object or an array of objects) or every
    /// *.json file in a directory, in name order.
    static TemplateSet load(const fs::path& path);

private:
    std::map<TemplateKind, PromptTemplate> templates_;
};

}  // namespace kgsynth::prompting
