#include "kgsynth/prompting/templates.hpp"

#include <algorithm>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/placeholders.hpp"

namespace kgsynth::prompting {

std::string_view to_string(TemplateKind kind) noexcept {
    switch (kind) {
        case TemplateKind::FullNote: return "full_note";
        case TemplateKind::BaselineNote: return "baseline_note";
        case TemplateKind::Hop1: return "hop1";
        case TemplateKind::Hop2: return "hop2";
        case TemplateKind::Hop3: return "hop3";
        case TemplateKind::Continuation: return "continuation";
        case TemplateKind::GenerationFromPriors: return "generation_from_priors";
    }
    return "?";
}

TemplateKind template_kind_from_string(std::string_view s) {
    for (auto k : {TemplateKind::FullNote, TemplateKind::BaselineNote, TemplateKind::Hop1, TemplateKind::Hop2,
                   TemplateKind::Hop3, TemplateKind::Continuation, TemplateKind::GenerationFromPriors})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown template kind '" + std::string(s) + "'");
}

const PlaceholderContract& contract(TemplateKind kind) {
    static const std::map<TemplateKind, PlaceholderContract> contracts{
        {TemplateKind::FullNote, {{"disease", "symptoms", "example"}, {"disease", "symptoms", "example"}}},
        {TemplateKind::BaselineNote, {{"disease"}, {"disease"}}},
        {TemplateKind::Hop1, {{"disease"}, {"disease"}}},
        {TemplateKind::Hop2, {{"symptoms"}, {"symptoms"}}},
        {TemplateKind::Hop3, {{"disease"}, {"disease", "symptoms"}}},
        {TemplateKind::Continuation, {{}, {"note_prefix"}}},
        {TemplateKind::GenerationFromPriors, {{"symptoms"}, {"symptoms", "disease"}}},
    };
    return contracts.at(kind);
}

bool is_instruction_kind(TemplateKind kind) noexcept {
    return kind != TemplateKind::FullNote && kind != TemplateKind::BaselineNote;
}

void validate(const PromptTemplate& t) {
    const auto min_bodies = is_instruction_kind(t.kind) ? kMinInstructionRephrasings : 1;
    if (t.bodies.size() < min_bodies)
        throw ConfigError("template " + t.id + " (" + std::string(to_string(t.kind)) + ") needs at least " +
                          std::to_string(min_bodies) + " bodies, has " + std::to_string(t.bodies.size()));
    const auto& c = contract(t.kind);
    for (std::size_t i = 0; i < t.bodies.size(); ++i) {
        const auto names = placeholder_names(t.bodies[i]);
        const auto where = "template " + t.id + " body " + std::to_string(i);
        for (const auto& r : c.required)
            if (!names.contains(r)) throw PlaceholderError(where + " lacks required placeholder {" + r + "}");
        for (const auto& n : names)
            if (!c.allowed.contains(n))
                throw PlaceholderError(where + " uses placeholder {" + n + "} which " +
                                       std::string(to_string(t.kind)) + " cannot fill");
    }
}

PromptTemplate template_from_json(const json& j) {
    try {
        PromptTemplate t{j.at("id").get<std::string>(), template_kind_from_string(j.at("kind").get<std::string>()),
                         j.at("bodies").get<std::vector<std::string>>()};
        validate(t);
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("template: ") + e.what());
    }
}

json template_to_json(const PromptTemplate& t) {
    return {{"id", t.id}, {"kind", to_string(t.kind)}, {"bodies", t.bodies}};
}

void TemplateSet::add(PromptTemplate t) {
    validate(t);
    const auto kind = t.kind;
    if (!templates_.emplace(kind, std::move(t)).second)
        throw ConfigError("more than one template of kind " + std::string(to_string(kind)));
}

const PromptTemplate& TemplateSet::get(TemplateKind kind) const {
    const auto it = templates_.find(kind);
    if (it == templates_.end()) throw ConfigError("no template of kind " + std::string(to_string(kind)));
    return it->second;
}

TemplateSet TemplateSet::load(const fs::path& path) {
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    TemplateSet set;
    for (const auto& f : files) {
        const auto doc = read_json(f);
        try {
            if (doc.is_array())
                for (const auto& t : doc) set.add(template_from_json(t));
            else
                set.add(template_from_json(doc));
        } catch (const Error& e) {
            throw ConfigError(f.string() + ": " + e.what());
        }
    }
    return set;
}

}  // namespace kgsynth::prompting
