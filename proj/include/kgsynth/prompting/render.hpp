#pragma once

#include <map>
#include <string>
#include <string_view>

#include "kgsynth/common/rng.hpp"
#include "kgsynth/prompting/templates.hpp"
#include "kgsynth/taskgen/task.hpp"

namespace kgsynth::prompting {

/// Joins symptom phrases in prompts and instruction outputs. Symptom phrases
/// often contain commas, so the separator is a semicolon.
inline constexpr std::string_view kSymptomSeparator = "; ";

/// Picks one body uniformly and fills it. Throws PlaceholderError.
std::string render(const PromptTemplate& t, const std::map<std::string, std::string>& values, Rng& rng);

/// Renders a note-generation prompt for a task entry. The template kind must
/// match the entry kind (FullNote for Full, BaselineNote for Baseline). Any
/// ICD-like code in the result is masked, so prompts never carry labels.
std::string render_note_prompt(const taskgen::GenerationTaskEntry& entry, const PromptTemplate& t, Rng& rng);

}  // namespace kgsynth::prompting
