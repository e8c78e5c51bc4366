#include "kgsynth/prompting/render.hpp"

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/placeholders.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/corpus/leak.hpp"

namespace kgsynth::prompting {

std::string render(const PromptTemplate& t, const std::map<std::string, std::string>& values, Rng& rng) {
    if (t.bodies.empty()) throw ConfigError("template " + t.id + " has no bodies");
    return fill_placeholders(t.bodies[rng.uniform_index(t.bodies.size())], values);
}

std::string render_note_prompt(const taskgen::GenerationTaskEntry& entry, const PromptTemplate& t, Rng& rng) {
    const auto expected =
        entry.kind == taskgen::PromptKind::Full ? TemplateKind::FullNote : TemplateKind::BaselineNote;
    if (t.kind != expected)
        throw PlaceholderError("template " + t.id + " is " + std::string(to_string(t.kind)) + " but the entry is " +
                               std::string(taskgen::to_string(entry.kind)));

    std::map<std::string, std::string> values;
    if (!entry.disease.empty()) values["disease"] = entry.disease;
    if (entry.kind == taskgen::PromptKind::Full) {
        if (!entry.symptoms.empty()) values["symptoms"] = text::join(entry.symptoms, kSymptomSeparator);
        if (entry.example) values["example"] = *entry.example;
    }
    return corpus::redact_codes(render(t, values, rng));
}

}  // namespace kgsynth::prompting
