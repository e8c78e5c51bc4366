#include "kgsynth/eval/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "kgsynth/common/error.hpp"

namespace kgsynth::eval {

RankedPrediction rank_scores(std::string record_id, const std::vector<IcdCategory>& labels,
                             std::span<const double> scores) {
    if (labels.size() != scores.size()) throw DomainError("labels and scores differ in length");
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return labels[a] < labels[b];
    });
    RankedPrediction p{std::move(record_id), {}, {}};
    for (auto i : order) {
        p.labels.push_back(labels[i]);
        p.scores.push_back(scores[i]);
    }
    return p;
}

bool hit(const RankedPrediction& prediction, const IcdCategory& truth, std::size_t k) {
    const auto n = std::min(k, prediction.labels.size());
    return std::find(prediction.labels.begin(), prediction.labels.begin() + static_cast<std::ptrdiff_t>(n), truth) !=
           prediction.labels.begin() + static_cast<std::ptrdiff_t>(n);
}

double hit_at_k(std::span<const RankedPrediction> predictions, std::span<const IcdCategory> truths, std::size_t k) {
    if (predictions.size() != truths.size())
        throw DomainError("hit@k: " + std::to_string(predictions.size()) + " predictions but " +
                          std::to_string(truths.size()) + " truths");
    if (k == 0) throw DomainError("hit@k needs k >= 1");
    if (predictions.empty()) throw DomainError("hit@k over zero records");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) hits += hit(predictions[i], truths[i], k);
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

json to_json(const HitScores& h) { return {{"hit@1", h.hit1}, {"hit@3", h.hit3}, {"hit@5", h.hit5}, {"n", h.n}}; }

namespace {

HitScores hit_scores(std::span<const RankedPrediction> p, std::span<const IcdCategory> t) {
    return {hit_at_k(p, t, 1), hit_at_k(p, t, 3), hit_at_k(p, t, 5), p.size()};
}

HitScores hit_scores_from_json(const json& j) {
    return {j.at("hit@1").get<double>(), j.at("hit@3").get<double>(), j.at("hit@5").get<double>(),
            j.at("n").get<std::size_t>()};
}

}  // namespace

EvalReport evaluate(std::span<const RankedPrediction> predictions, std::span<const IcdCategory> truths,
                    json metadata) {
    EvalReport report;
    report.metadata = std::move(metadata);
    report.overall = hit_scores(predictions, truths);

    std::map<IcdCategory, std::pair<std::vector<RankedPrediction>, std::vector<IcdCategory>>> by_code;
    std::set<IcdCategory> labels(truths.begin(), truths.end());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        auto& [p, t] = by_code[truths[i]];
        p.push_back(predictions[i]);
        t.push_back(truths[i]);
        labels.insert(predictions[i].labels.begin(), predictions[i].labels.end());
    }
    for (const auto& [code, pt] : by_code) report.per_code.emplace(code, hit_scores(pt.first, pt.second));

    report.labels.assign(labels.begin(), labels.end());
    std::map<IcdCategory, std::size_t> index;
    for (std::size_t i = 0; i < report.labels.size(); ++i) index.emplace(report.labels[i], i);
    report.confusion.assign(report.labels.size(), std::vector<std::size_t>(report.labels.size(), 0));
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (!predictions[i].labels.empty())
            ++report.confusion[index.at(truths[i])][index.at(predictions[i].labels.front())];
    return report;
}

json report_to_json(const EvalReport& r) {
    json per_code = json::object();
    for (const auto& [code, h] : r.per_code) per_code[code.code()] = to_json(h);
    json labels = json::array();
    for (const auto& l : r.labels) labels.push_back(l.code());
    return {{"overall", to_json(r.overall)},
            {"per_code", std::move(per_code)},
            {"confusion", {{"labels", std::move(labels)}, {"matrix", r.confusion}}},
            {"metadata", r.metadata}};
}

EvalReport report_from_json(const json& j) {
    try {
        EvalReport r;
        r.overall = hit_scores_from_json(j.at("overall"));
        for (const auto& [code, h] : j.at("per_code").items())
            r.per_code.emplace(IcdCategory::parse(code), hit_scores_from_json(h));
        for (const auto& l : j.at("confusion").at("labels")) r.labels.push_back(IcdCategory::parse(l.get<std::string>()));
        r.confusion = j.at("confusion").at("matrix").get<std::vector<std::vector<std::size_t>>>();
        r.metadata = j.value("metadata", json::object());
        if (r.confusion.size() != r.labels.size()) throw ParseError("confusion matrix does not match labels");
        for (const auto& row : r.confusion)
            if (row.size() != r.labels.size()) throw ParseError("confusion matrix is not square");
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

std::vector<ConfusionPair> confusion_pairs(const EvalReport& report) {
    std::vector<ConfusionPair> pairs;
    const auto n = report.labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto a = i, b = j;
            if (report.labels[b] < report.labels[a]) std::swap(a, b);
            pairs.push_back({report.labels[a], report.labels[b], report.confusion[a][b] + report.confusion[b][a]});
        }
    std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
        if (x.mass != y.mass) return x.mass > y.mass;
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
    });
    return pairs;
}

}  // namespace kgsynth::eval
