#include "kgsynth/eval/validity.hpp"

#include <exception>
#include <set>
#include <thread>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"

namespace kgsynth::eval {

std::vector<std::uint64_t> ValidityConfig::derived_seeds(std::uint64_t base, std::size_t n) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(derive_seed(base, "validity-model-" + std::to_string(i)));
    return seeds;
}

std::vector<std::string> ValidityConfig::problems() const {
    std::vector<std::string> out;
    if (n_models == 0) out.emplace_back("n_models must be at least 1");
    if (k == 0) out.emplace_back("k must be at least 1");
    if (quorum == 0) out.emplace_back("quorum must be at least 1");
    if (quorum > n_models)
        out.push_back("quorum " + std::to_string(quorum) + " exceeds n_models " + std::to_string(n_models));
    if (seeds.size() != n_models)
        out.push_back("expected " + std::to_string(n_models) + " seeds, got " + std::to_string(seeds.size()));
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        out.emplace_back("seeds must be distinct");
    return out;
}

void ValidityConfig::validate() const {
    const auto p = problems();
    if (!p.empty()) throw ConfigError("invalid validity filter config: " + text::join(p, "; "));
}

std::vector<std::size_t> count_votes(const std::vector<std::vector<RankedPrediction>>& per_model,
                                     std::span<const IcdCategory> truths, std::size_t k) {
    std::vector<std::size_t> votes(truths.size(), 0);
    for (const auto& predictions : per_model) {
        if (predictions.size() != truths.size()) throw DomainError("prediction count differs from record count");
        for (std::size_t r = 0; r < truths.size(); ++r) votes[r] += hit(predictions[r], truths[r], k);
    }
    return votes;
}

ValidityResult partition_by_votes(std::span<const corpus::NoteRecord> records,
                                  std::vector<std::vector<RankedPrediction>> per_model, const ValidityConfig& config) {
    std::vector<IcdCategory> truths;
    truths.reserve(records.size());
    for (const auto& r : records) truths.push_back(r.code);
    ValidityResult result;
    result.votes = count_votes(per_model, truths, config.k);
    for (std::size_t i = 0; i < records.size(); ++i) {
        result.accepted.push_back(result.votes[i] >= config.quorum);
        (result.accepted.back() ? result.valid : result.invalid).push_back(records[i]);
    }
    result.per_model = std::move(per_model);
    result.seeds = config.seeds;
    return result;
}

ValidityResult validity_filter(std::span<const corpus::NoteRecord> synthetic, const corpus::LabeledCorpus& real,
                               const ValidityConfig& config) {
    config.validate();
    std::vector<const corpus::NoteRecord*> pointers;
    for (const auto& r : synthetic) pointers.push_back(&r);

    std::vector<std::vector<RankedPrediction>> per_model(config.n_models);
    std::vector<std::exception_ptr> failures(config.n_models);
    {
        std::vector<std::jthread> workers;
        for (std::size_t m = 0; m < config.n_models; ++m) {
            workers.emplace_back([&, m] {
                try {
                    const auto model = train_classifier(real, config.params, config.seeds[m]);
                    per_model[m] = model.predict(pointers);
                } catch (...) {
                    failures[m] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return partition_by_votes(synthetic, std::move(per_model), config);
}

json validity_votes_to_json(std::span<const corpus::NoteRecord> records, const ValidityResult& result) {
    json out = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        out.push_back({{"id", records[i].id},
                       {"code", records[i].code.code()},
                       {"votes", result.votes[i]},
                       {"valid", static_cast<bool>(result.accepted[i])}});
    }
    return out;
}

}  // namespace kgsynth::eval
