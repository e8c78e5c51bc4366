#include "kgsynth/eval/experiment.hpp"

#include <exception>
#include <thread>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/rng.hpp"

namespace kgsynth::eval {
namespace {

void accumulate(HitScores& into, const HitScores& s, double scale) {
    into.hit1 += s.hit1 * scale;
    into.hit3 += s.hit3 * scale;
    into.hit5 += s.hit5 * scale;
    into.n = s.n;
}

json per_code_json(const std::map<IcdCategory, HitScores>& per_code, const std::set<IcdCategory>& codes) {
    json out = json::object();
    for (const auto& [code, scores] : per_code)
        if (codes.empty() || codes.contains(code)) out[code.code()] = to_json(scores);
    for (const auto& code : codes)
        if (!out.contains(code.code())) out[code.code()] = to_json(HitScores{});
    return out;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, std::size_t run) {
    return derive_seed(seed, "run-" + std::to_string(run));
}

ExperimentResult run_experiment(const corpus::LabeledCorpus& real, const std::vector<corpus::NoteRecord>& synthetic,
                                const ExperimentSpec& spec) {
    if (spec.model_kind != kLinearModelKind) throw ConfigError("unsupported model kind '" + spec.model_kind + "'");
    if (spec.n_runs == 0) throw ConfigError("n_runs must be at least 1");

    const auto merged = corpus::merge_for_training(real, synthetic, spec.mode, spec.codes, spec.merge);
    if (spec.mode == corpus::MergeMode::Replace) {
        for (const auto* r : merged.in_split(corpus::Split::Train))
            if (r->origin == corpus::Origin::Real && (spec.codes.empty() || spec.codes.contains(r->code)))
                throw IntegrityError("replace left real training note '" + r->id + "' of " + r->code.code());
    }
    const auto test = merged.in_split(corpus::Split::Test);
    if (test.empty()) throw SplitError("test split is empty");
    std::vector<IcdCategory> truths;
    for (const auto* r : test) truths.push_back(r->code);

    ExperimentResult result;
    result.merged_sizes = corpus::split_sizes(merged);
    result.runs.resize(spec.n_runs);
    std::vector<std::exception_ptr> failures(spec.n_runs);
    {
        std::vector<std::jthread> workers;
        for (std::size_t i = 0; i < spec.n_runs; ++i) {
            workers.emplace_back([&, i] {
                try {
                    const auto seed = run_seed(spec.seed, i);
                    const auto model = train_classifier(merged, spec.params, seed);
                    const auto predictions = model.predict(test);
                    result.runs[i] = {seed, evaluate(predictions, truths, json{{"seed", seed}, {"run", i}})};
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    const double scale = 1.0 / static_cast<double>(spec.n_runs);
    for (const auto& run : result.runs) {
        accumulate(result.mean_overall, run.report.overall, scale);
        for (const auto& [code, scores] : run.report.per_code)
            if (spec.codes.empty() || spec.codes.contains(code)) accumulate(result.mean_per_code[code], scores, scale);
    }
    return result;
}

json experiment_to_json(const ExperimentResult& result, const ExperimentSpec& spec) {
    json codes = json::array();
    for (const auto& c : spec.codes) codes.push_back(c.code());
    json runs = json::array();
    for (const auto& run : result.runs) {
        runs.push_back({{"seed", run.seed},
                        {"overall", to_json(run.report.overall)},
                        {"per_code", per_code_json(run.report.per_code, spec.codes)},
                        {"confusion", {{"labels", report_to_json(run.report)["confusion"]["labels"]},
                                       {"matrix", run.report.confusion}}}});
    }
    return {{"mode", corpus::to_string(spec.mode)},
            {"codes", codes},
            {"model_kind", spec.model_kind},
            {"n_runs", spec.n_runs},
            {"seed", spec.seed},
            {"params", to_json(spec.params)},
            {"merged_sizes", result.merged_sizes},
            {"runs", runs},
            {"mean", {{"overall", to_json(result.mean_overall)},
                      {"per_code", per_code_json(result.mean_per_code, spec.codes)}}}};
}

}  // namespace kgsynth::eval
