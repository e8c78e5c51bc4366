#include "kgsynth/eval/sbs.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/eval/csv.hpp"

namespace kgsynth::eval {
namespace {

std::string pick_sentence(const std::string& note, Rng& rng) {
    const auto spans = text::sentence_spans(note);
    if (spans.empty()) return std::string(text::trim(note));
    const auto& s = spans[rng.uniform_index(spans.size())];
    return std::string(text::trim(std::string_view(note).substr(s.begin, s.end - s.begin)));
}

double median(std::vector<std::size_t> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? static_cast<double>(v[mid]) : (v[mid - 1] + v[mid]) / 2.0;
}

}  // namespace

SbsSheet build_sbs_sheet(const corpus::LabeledCorpus& real, std::span<const corpus::NoteRecord> synthetic,
                         std::size_t n_pairs, Rng& rng) {
    if (real.empty() || synthetic.empty()) throw DomainError("side-by-side sheet needs real and synthetic notes");
    std::map<IcdCategory, std::vector<const corpus::NoteRecord*>> real_by_code, synthetic_by_code;
    for (const auto& r : real.records()) real_by_code[r.code].push_back(&r);
    for (const auto& r : synthetic) synthetic_by_code[r.code].push_back(&r);

    SbsSheet sheet;
    std::vector<std::size_t> word_counts;
    for (std::size_t i = 0; i < n_pairs; ++i) {
        // A uniformly drawn real note carries a code with its corpus frequency.
        const auto& code = real.records()[rng.uniform_index(real.records().size())].code;
        const auto& real_pool = real_by_code.at(code);
        const auto* real_note = real_pool[rng.uniform_index(real_pool.size())];
        const corpus::NoteRecord* synthetic_note = nullptr;
        if (const auto it = synthetic_by_code.find(code); it != synthetic_by_code.end()) {
            synthetic_note = it->second[rng.uniform_index(it->second.size())];
        } else {
            synthetic_note = &synthetic[rng.uniform_index(synthetic.size())];
            ++sheet.fallbacks;
        }
        auto real_sentence = pick_sentence(real_note->text, rng);
        auto synthetic_sentence = pick_sentence(synthetic_note->text, rng);
        word_counts.push_back(text::words(real_sentence).size());
        word_counts.push_back(text::words(synthetic_sentence).size());

        SbsPair pair{.pair_id = std::to_string(i + 1),
                     .text_1 = {},
                     .text_2 = {},
                     .generated_position = rng.uniform_index(2) == 0 ? 1 : 2,
                     .code = code,
                     .real_id = real_note->id,
                     .synthetic_id = synthetic_note->id};
        if (pair.generated_position == 1) {
            pair.text_1 = std::move(synthetic_sentence);
            pair.text_2 = std::move(real_sentence);
        } else {
            pair.text_1 = std::move(real_sentence);
            pair.text_2 = std::move(synthetic_sentence);
        }
        sheet.pairs.push_back(std::move(pair));
    }
    if (sheet.fallbacks)
        log::warn("synthetic notes missing for sampled codes", {{"fallback_pairs", sheet.fallbacks}});
    sheet.median_words = median(std::move(word_counts));
    return sheet;
}

std::string sbs_sheet_csv(const SbsSheet& sheet) {
    std::vector<CsvRow> rows{{"pair_id", "text_1", "text_2"}};
    for (const auto& p : sheet.pairs) rows.push_back({p.pair_id, p.text_1, p.text_2});
    return write_csv(rows);
}

std::string sbs_key_csv(const SbsSheet& sheet) {
    std::vector<CsvRow> rows{{"pair_id", "generated_position"}};
    for (const auto& p : sheet.pairs) rows.push_back({p.pair_id, std::to_string(p.generated_position)});
    return write_csv(rows);
}

SbsScore score_sbs(std::string_view key_csv, std::string_view answers_csv) {
    const auto position = [](const std::string& s, const std::string& where) {
        const auto t = text::trim(s);
        if (t != "1" && t != "2") throw ParseError(where + ": expected 1 or 2, got '" + s + "'");
        return t == "1" ? 1 : 2;
    };
    std::map<std::string, int> key;
    const auto key_rows = read_csv(key_csv);
    for (std::size_t i = 1; i < key_rows.size(); ++i) {
        if (key_rows[i].size() < 2) throw ParseError("key row " + std::to_string(i + 1) + " has too few fields");
        key[key_rows[i][0]] = position(key_rows[i][1], "key row " + std::to_string(i + 1));
    }
    SbsScore score;
    std::set<std::string> seen;
    const auto answer_rows = read_csv(answers_csv);
    for (std::size_t i = 1; i < answer_rows.size(); ++i) {
        const auto& row = answer_rows[i];
        if (row.size() < 2) throw ParseError("answer row " + std::to_string(i + 1) + " has too few fields");
        const auto it = key.find(row[0]);
        if (it == key.end()) throw ParseError("answer for unknown pair '" + row[0] + "'");
        if (!seen.insert(row[0]).second) throw ParseError("duplicate answer for pair '" + row[0] + "'");
        ++score.answered;
        score.correct += position(row[1], "answer row " + std::to_string(i + 1)) == it->second;
    }
    score.unanswered = key.size() - score.answered;
    score.accuracy = score.answered ? static_cast<double>(score.correct) / score.answered : 0.0;
    return score;
}

}  // namespace kgsynth::eval
