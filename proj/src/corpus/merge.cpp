#include "kgsynth/corpus/merge.hpp"

#include "kgsynth/common/error.hpp"

namespace kgsynth::corpus {

std::string_view to_string(MergeMode mode) noexcept { return mode == MergeMode::Replace ? "replace" : "upsample"; }

MergeMode merge_mode_from_string(std::string_view s) {
    if (s == "replace") return MergeMode::Replace;
    if (s == "upsample") return MergeMode::Upsample;
    throw ConfigError("unknown merge mode '" + std::string(s) + "'");
}

LabeledCorpus merge_for_training(const LabeledCorpus& real, const std::vector<NoteRecord>& synthetic, MergeMode mode,
                                 const std::set<IcdCategory>& codes, const MergeOptions& options) {
    std::set<IcdCategory> known = real.label_set();
    for (const auto& s : synthetic) {
        if (s.origin != Origin::Synthetic) throw SplitError("record " + s.id + " is not synthetic");
        if (s.split != Split::Train)
            throw SplitError("synthetic record " + s.id + " is labeled " + std::string(to_string(s.split)) +
                             "; synthetic notes may only enter train");
        known.insert(s.code);
    }
    for (const auto& c : codes)
        if (!known.contains(c)) throw SplitError("target code " + c.code() + " occurs in neither corpus");
    const auto targeted = [&](const IcdCategory& c) { return codes.empty() || codes.contains(c); };

    std::vector<NoteRecord> out;
    out.reserve(real.records().size() + synthetic.size());
    for (auto r : real.records()) {
        if (mode == MergeMode::Replace && r.origin == Origin::Real && targeted(r.code) &&
            (r.split == Split::Train || (options.move_valid_to_test && r.split == Split::Valid)))
            r.split = Split::Test;
        out.push_back(std::move(r));
    }
    for (const auto& s : synthetic)
        if (targeted(s.code)) out.push_back(s);

    LabeledCorpus merged(std::move(out));
    for (const auto& r : merged.records())
        if (r.origin == Origin::Synthetic && r.split != Split::Train)
            throw SplitError("synthetic record " + r.id + " ended up outside train");
    return merged;
}

}  // namespace kgsynth::corpus
