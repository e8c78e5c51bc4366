// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances and time budgets are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/corpus/merge.hpp"
#include "kgsynth/eval/classifier.hpp"
#include "kgsynth/eval/metrics.hpp"
#include "kgsynth/eval/ngram.hpp"
#include "kgsynth/eval/validity.hpp"
#include "kgsynth/gateway/mock_backend.hpp"
#include "kgsynth/gateway/runner.hpp"
#include "kgsynth/mkg/graph.hpp"
#include "kgsynth/mkg/traverse.hpp"
#include "kgsynth/prompting/instructions.hpp"
#include "kgsynth/prompting/templates.hpp"
#include "kgsynth/taskgen/task.hpp"
#include "kgsynth/taskgen/weights.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace kgsynth;

namespace {

constexpr double kWeightTol = 1e-9;
// Figure quoted alongside the criterion. It does not equal the product of
// iterated natural logs (0.5643587...), so it is reported, not asserted;
// the arbitrary-precision oracle is the reference.
constexpr double kQuotedWeight = 0.564501;
constexpr double kBucketTol = 0.01;
constexpr double kGradRelTol = 1e-4;
constexpr double kSeparableHit1 = 0.95;

/// Collects failed checks for one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += !ok;
    }
    void note(std::string s) { notes_.push_back(std::move(s)); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream s;
        s << checks_ << " checks";
        for (const auto& n : notes_) s << "; " << n;
        if (failed_) {
            s << "; " << failed_ << " failed";
            for (const auto& f : failures_) s << " | " << f;
        }
        return s.str();
    }

private:
    std::size_t checks_ = 0, failed_ = 0;
    std::vector<std::string> failures_, notes_;
};

IcdCategory code_at(std::size_t i) {
    // A00..Y99, skipping Z so the default exception code never collides.
    char buf[4];
    std::snprintf(buf, sizeof buf, "%c%02zu", static_cast<char>('A' + i / 100), i % 100);
    return IcdCategory::parse(buf);
}

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

// ---------------------------------------------------------------- 1

void weight_oracle(Check& c) {
    const double w = taskgen::code_weight({code_at(0), 10, 5}).weight;
    const double o = kgtest::oracle_weight(10, 5);
    c.expect(std::fabs(w - o) <= kWeightTol, "w(10,5)=" + fmt(w) + " oracle " + fmt(o));
    c.note("w(10,5)=" + fmt(w) + ", oracle " + fmt(o) + ", quoted ~" + fmt(kQuotedWeight) + " (off by " +
           fmt(kQuotedWeight - o) + ")");
    for (unsigned long a = 0; a <= 60; ++a)
        for (unsigned long b = 0; b <= 60; ++b) {
            const double x = taskgen::code_weight({code_at(0), a, b}).weight;
            c.expect((x == 0.0) == (a == 0 || b == 0), "zero rule at " + std::to_string(a) + "," + std::to_string(b));
        }
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        // Mix small counts with large ones up to a million.
        const auto pick = [&] { return rng.uniform01() < 0.5 ? rng.uniform_index(200) : rng.uniform_index(1'000'001); };
        const auto a = pick(), b = pick();
        const double x = taskgen::code_weight({code_at(0), a, b}).weight;
        c.expect(std::fabs(x - kgtest::oracle_weight(a, b)) <= kWeightTol,
                 "w(" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
}

// ---------------------------------------------------------------- 2

void allocation(Check& c) {
    Rng rng(202);
    const auto z00 = IcdCategory::parse("Z00");
    std::size_t exhaustive = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = rng.uniform01() < 0.4 ? 2 + rng.uniform_index(5) : 2 + rng.uniform_index(49);
        const std::size_t total = 10 + rng.uniform_index(4991);
        std::map<IcdCategory, std::size_t> exceptions = taskgen::default_exceptions();
        // Sometimes a second, explicit exception.
        if (n > 3 && rng.uniform01() < 0.3) exceptions[code_at(n - 1)] = rng.uniform_index(total - 10 + 1);
        std::vector<taskgen::GenerationWeight> weights;
        std::vector<double> free_weights;
        for (std::size_t i = 0; i < n; ++i) {
            auto w = taskgen::code_weight({code_at(i), rng.uniform_index(6), rng.uniform_index(40)});
            if (i == 0 && w.weight == 0.0) w.weight = taskgen::code_weight({code_at(0), 1, 1}).weight;
            weights.push_back(w);
            if (!exceptions.contains(w.code)) free_weights.push_back(w.weight);
        }
        if (rng.uniform01() < 0.5) weights.push_back({z00, 3.0, 0});  // exception weight is ignored
        const auto out = taskgen::allocate_counts(weights, total, exceptions);
        std::size_t sum = 0, fixed = 0;
        std::vector<std::size_t> free_counts;
        for (const auto& g : out) {
            sum += g.allocated;
            if (const auto e = exceptions.find(g.code); e != exceptions.end()) {
                c.expect(g.allocated == e->second, "exception " + g.code.code() + " trial " + std::to_string(trial));
                fixed += e->second;
            } else {
                free_counts.push_back(g.allocated);
            }
        }
        c.expect(sum == total, "sum " + std::to_string(sum) + " != " + std::to_string(total));
        if (free_weights.size() <= 6) {
            ++exhaustive;
            const auto best = kgtest::exhaustive_rounding(free_weights, total - fixed);
            c.expect(best && *best == free_counts, "exhaustive mismatch trial " + std::to_string(trial));
        }
    }
    c.note(std::to_string(exhaustive) + " instances checked exhaustively");
    c.expect(exhaustive >= 100, "too few small instances");
}

// ---------------------------------------------------------------- 3

eval::RankedPrediction with_truth_at(const std::vector<IcdCategory>& labels, std::size_t truth, std::size_t rank) {
    std::vector<double> scores(labels.size());
    for (std::size_t i = 0, r = 1; i < labels.size(); ++i) {
        if (i == truth) continue;
        if (r == rank) ++r;
        scores[i] = static_cast<double>(labels.size() - r++);
    }
    scores[truth] = static_cast<double>(labels.size() - rank);
    return eval::rank_scores("r", labels, scores);
}

void hit_at_k_oracle(Check& c) {
    std::vector<IcdCategory> eight;
    for (std::size_t i = 0; i < 8; ++i) eight.push_back(code_at(i));
    std::vector<eval::RankedPrediction> hand;
    std::vector<IcdCategory> hand_truth;
    for (std::size_t rank : {1, 4, 2, 6}) {
        hand.push_back(with_truth_at(eight, 2, rank));
        hand_truth.push_back(eight[2]);
    }
    c.expect(eval::hit_at_k(hand, hand_truth, 1) == 0.25, "hand hit@1");
    c.expect(eval::hit_at_k(hand, hand_truth, 3) == 0.5, "hand hit@3");
    c.expect(eval::hit_at_k(hand, hand_truth, 5) == 0.75, "hand hit@5");

    Rng rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_labels = 2 + rng.uniform_index(29), n_records = 1 + rng.uniform_index(200);
        std::vector<IcdCategory> labels;
        for (std::size_t i = 0; i < n_labels; ++i) labels.push_back(code_at(i));
        std::vector<eval::RankedPrediction> preds;
        std::vector<IcdCategory> truths;
        for (std::size_t r = 0; r < n_records; ++r) {
            std::vector<double> s(n_labels);
            for (auto& x : s) x = std::floor(rng.uniform01() * 6);  // coarse, so ties occur
            preds.push_back(eval::rank_scores("r", labels, s));
            truths.push_back(labels[rng.uniform_index(n_labels)]);
        }
        double h[3];
        const std::size_t ks[3]{1, 3, 5};
        for (int i = 0; i < 3; ++i) {
            h[i] = eval::hit_at_k(preds, truths, ks[i]);
            c.expect(h[i] == kgtest::brute_hit_at_k(preds, truths, ks[i]), "oracle trial " + std::to_string(trial));
        }
        c.expect(h[0] <= h[1] && h[1] <= h[2], "monotonicity trial " + std::to_string(trial));
    }
}

// ---------------------------------------------------------------- 4

struct Separable {
    std::vector<std::string> train, test;
    std::vector<IcdCategory> train_y, test_y;
};

Separable separable_corpus(std::size_t classes, std::size_t per_train, std::size_t per_test, Rng& rng) {
    Separable s;
    const auto doc = [&](std::size_t cls) {
        std::string t;
        for (int w = 0; w < 12; ++w) t += "c" + std::to_string(cls) + "w" + std::to_string(rng.uniform_index(25)) + " ";
        return t;
    };
    for (std::size_t k = 0; k < classes; ++k) {
        for (std::size_t i = 0; i < per_train; ++i) {
            s.train.push_back(doc(k));
            s.train_y.push_back(code_at(k));
        }
        for (std::size_t i = 0; i < per_test; ++i) {
            s.test.push_back(doc(k));
            s.test_y.push_back(code_at(k));
        }
    }
    return s;
}

double gradient_rel_error(Rng& rng) {
    const Eigen::Index n = 2 + rng.uniform_index(8), v = 2 + rng.uniform_index(10), k = 2 + rng.uniform_index(5);
    eval::SparseRows x(n, v);
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index j = 0; j < v; ++j)
            if (rng.uniform01() < 0.5) trip.emplace_back(r, j, rng.uniform01());
    x.setFromTriplets(trip.begin(), trip.end());
    std::vector<int> y(n);
    for (auto& t : y) t = static_cast<int>(rng.uniform_index(k));
    Eigen::MatrixXd w(k, v);
    Eigen::VectorXd b(k);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.normal();
    const double l2 = rng.uniform01() * 0.1, h = 1e-6;
    const auto g = eval::softmax_loss_and_gradient(w, b, x, y, l2);
    Eigen::VectorXd analytic(w.size() + b.size()), numeric(w.size() + b.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        auto wp = w, wm = w;
        wp.data()[i] += h;
        wm.data()[i] -= h;
        analytic[i] = g.grad_weights.data()[i];
        numeric[i] = (eval::softmax_loss_and_gradient(wp, b, x, y, l2).loss -
                      eval::softmax_loss_and_gradient(wm, b, x, y, l2).loss) / (2 * h);
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        auto bp = b, bm = b;
        bp[i] += h;
        bm[i] -= h;
        analytic[w.size() + i] = g.grad_bias[i];
        numeric[w.size() + i] = (eval::softmax_loss_and_gradient(w, bp, x, y, l2).loss -
                                 eval::softmax_loss_and_gradient(w, bm, x, y, l2).loss) / (2 * h);
    }
    return (analytic - numeric).norm() / std::max(analytic.norm() + numeric.norm(), 1e-12);
}

void classifier_sanity(Check& c) {
    Rng rng(404);
    const auto data = separable_corpus(20, 50, 10, rng);
    const eval::TrainingParams params;
    const auto model = eval::train_classifier(data.train, data.train_y, params, 17);
    std::vector<eval::RankedPrediction> preds;
    for (const auto& t : data.test) preds.push_back(model.predict("t", t));
    const double h1 = eval::hit_at_k(preds, data.test_y, 1), h5 = eval::hit_at_k(preds, data.test_y, 5);
    c.expect(h1 >= kSeparableHit1, "hit@1 " + fmt(h1));
    c.expect(h5 == 1.0, "hit@5 " + fmt(h5));
    c.note("hit@1=" + fmt(h1) + " hit@5=" + fmt(h5) + " epochs=" + std::to_string(model.epochs_run));

    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const double e = gradient_rel_error(rng);
        worst = std::max(worst, e);
        c.expect(e <= kGradRelTol, "gradient instance " + std::to_string(i) + " rel " + fmt(e));
    }
    c.note("max gradient rel err " + fmt(worst));

    const auto again = eval::train_classifier(data.train, data.train_y, params, 17);
    c.expect(again.weights == model.weights && again.bias == model.bias, "same seed, different weights");
}

// ---------------------------------------------------------------- 5

void sampling_distribution(Check& c) {
    Rng rng(505);
    constexpr std::size_t kTrials = 1'000'000;
    std::array<std::size_t, 6> counts{};
    bool in_range = true;
    for (std::size_t i = 0; i < kTrials; ++i) {
        const auto k = taskgen::draw_symptom_count(rng);
        if (k < 1 || k > 5) in_range = false;
        else ++counts[k];
    }
    c.expect(in_range, "draw outside 1..5");
    std::ostringstream freq;
    for (std::size_t k = 1; k <= 5; ++k) {
        const double f = static_cast<double>(counts[k]) / kTrials;
        c.expect(std::fabs(f - 0.2) <= kBucketTol, "bucket " + std::to_string(k) + " " + fmt(f));
        freq << (k > 1 ? "/" : "") << std::fixed << std::setprecision(4) << f;
    }
    c.note("frequencies " + freq.str());

    const auto graph = mkg::load_graph(kgtest::fixture("graph.json"));
    for (const auto& code : graph.codes()) {
        std::set<std::string> truth;
        for (const auto& s : mkg::symptoms_of(graph, code)) truth.insert(s.label);
        for (int i = 0; i < 2000; ++i) {
            const auto drawn = taskgen::sample_symptoms(graph, code, rng);
            const std::set<std::string> uniq(drawn.begin(), drawn.end());
            c.expect(uniq.size() == drawn.size(), "duplicate symptom for " + code.code());
            c.expect(std::includes(truth.begin(), truth.end(), uniq.begin(), uniq.end()),
                     "symptom outside graph for " + code.code());
            c.expect(!drawn.empty() && drawn.size() <= std::min<std::size_t>(5, truth.size()),
                     "subset size for " + code.code());
        }
    }
}

// ---------------------------------------------------------------- 6

void ngram_oracle(Check& c) {
    Rng rng(606);
    const std::vector<std::string> vocab{"pain", "fever", "cough", "rash", "nausea", "chills", "fatigue"};
    for (int trial = 0; trial < 1000; ++trial) {
        const auto seq = [&](std::size_t len) {
            std::vector<std::string> s;
            for (std::size_t i = 0; i < len; ++i) s.push_back(vocab[rng.uniform_index(vocab.size())]);
            return s;
        };
        const std::size_t n = 1 + rng.uniform_index(3);
        const auto g = seq(rng.uniform_index(15)), e = seq(n + rng.uniform_index(12));
        const double r = eval::ngram_usage_ratio(text::join(g, " "), text::join(e, " "), static_cast<int>(n));
        c.expect(r == kgtest::brute_ngram_ratio(g, e, n), "trial " + std::to_string(trial));
        c.expect(r >= 0.0 && r <= 1.0, "range trial " + std::to_string(trial));
    }
    for (int n = 1; n <= 3; ++n) {
        c.expect(eval::ngram_usage_ratio("the cat sat on the mat", "the cat sat on the mat", n) == 1.0, "identical");
        c.expect(eval::ngram_usage_ratio("alpha beta gamma delta", "one two three four", n) == 0.0, "disjoint");
    }
}

// ---------------------------------------------------------------- 7

void validity_partition(Check& c) {
    constexpr std::size_t kModels = 5, kK = 5, kQuorum = 2, kLabels = 10;
    std::vector<IcdCategory> labels;
    for (std::size_t i = 0; i < kLabels; ++i) labels.push_back(code_at(i));
    Rng rng(707);
    std::vector<corpus::NoteRecord> records;
    std::vector<std::vector<eval::RankedPrediction>> per_model(kModels);
    std::vector<std::size_t> brute;
    for (std::size_t r = 0; r < 300; ++r) {
        const auto truth = rng.uniform_index(kLabels);
        // Choose how many models place the truth in their top k; 2 and 1 are
        // over-represented to exercise the boundary.
        const std::size_t want = r % 3 == 0 ? 2 : r % 3 == 1 ? 1 : rng.uniform_index(kModels + 1);
        const auto inside = rng.sample_without_replacement(kModels, want);
        const std::set<std::size_t> in(inside.begin(), inside.end());
        for (std::size_t m = 0; m < kModels; ++m) {
            const auto rank = in.contains(m) ? 1 + rng.uniform_index(kK) : kK + 1 + rng.uniform_index(kLabels - kK);
            per_model[m].push_back(with_truth_at(labels, truth, rank));
        }
        records.push_back({"s" + std::to_string(r), "text", labels[truth], corpus::Split::Train,
                           corpus::Origin::Synthetic, json{{"backend", "mock"}, {"task_ref", "t"}}});
        // Brute force: rescan each model's list.
        std::size_t votes = 0;
        for (std::size_t m = 0; m < kModels; ++m)
            for (std::size_t j = 0; j < kK; ++j) votes += per_model[m].back().labels[j] == labels[truth];
        c.expect(votes == want, "construction");
        brute.push_back(votes);
    }
    eval::ValidityConfig cfg;
    cfg.n_models = kModels;
    cfg.k = kK;
    cfg.quorum = kQuorum;
    cfg.seeds = eval::ValidityConfig::derived_seeds(7, kModels);
    const auto result = eval::partition_by_votes(records, per_model, cfg);
    std::size_t boundary = 0, valid = 0;
    for (std::size_t r = 0; r < records.size(); ++r) {
        c.expect(result.votes[r] == brute[r], "votes record " + std::to_string(r));
        c.expect(result.accepted[r] == (brute[r] >= kQuorum), "partition record " + std::to_string(r));
        boundary += brute[r] == kQuorum;
        valid += brute[r] >= kQuorum;
    }
    c.expect(result.valid.size() == valid && result.invalid.size() == records.size() - valid, "partition sizes");
    c.note(std::to_string(boundary) + " records at exactly " + std::to_string(kQuorum) + " votes");

    auto bad = cfg;
    bad.quorum = 6;
    bool rejected = false;
    try {
        bad.validate();
    } catch (const ConfigError&) {
        rejected = true;
    }
    c.expect(rejected, "quorum 6 of 5 accepted");

    // Trained ensemble on the fixture corpus: stored rankings recount to the same votes.
    const auto real = corpus::load_corpus(kgtest::fixture("corpus.jsonl"));
    std::vector<corpus::NoteRecord> syn;
    for (const auto* r : real.in_split(corpus::Split::Test))
        syn.push_back({"syn-" + r->id, r->text, r->code, corpus::Split::Train, corpus::Origin::Synthetic,
                       json{{"backend", "mock"}, {"task_ref", "t"}}});
    eval::ValidityConfig trained;
    trained.seeds = eval::ValidityConfig::derived_seeds(11, trained.n_models);
    const auto tr = eval::validity_filter(syn, real, trained);
    for (std::size_t r = 0; r < syn.size(); ++r) {
        std::size_t votes = 0;
        for (const auto& model : tr.per_model)
            for (std::size_t j = 0; j < trained.k; ++j) votes += model[r].labels[j] == syn[r].code;
        c.expect(tr.votes[r] == votes, "trained votes record " + std::to_string(r));
        c.expect(tr.accepted[r] == (votes >= trained.quorum), "trained partition record " + std::to_string(r));
    }
}

// ---------------------------------------------------------------- 8

struct HopOracle {
    std::set<mkg::NodePath> paths1, paths2, paths3;
};

/// Every node tuple checked against the raw edge list, no adjacency index.
HopOracle enumerate_paths(const mkg::KnowledgeGraph& g) {
    std::set<std::tuple<std::string, std::string, mkg::Relation>> edges;
    for (const auto& e : g.edges()) edges.insert({e.from, e.to, e.relation});
    std::vector<std::string> dis, sym, drg;
    for (const auto& n : g.nodes())
        (n.kind == mkg::NodeKind::Disease ? dis : n.kind == mkg::NodeKind::Symptom ? sym : drg).push_back(n.id);
    const auto ds = [&](const std::string& d, const std::string& s) {
        return edges.contains({d, s, mkg::Relation::DiseaseSymptom});
    };
    const auto dr = [&](const std::string& d, const std::string& r) {
        return edges.contains({d, r, mkg::Relation::DiseaseDrug});
    };
    HopOracle o;
    for (const auto& d : dis)
        for (const auto& s : sym) {
            if (!ds(d, s)) continue;
            o.paths1.insert({d, s});
            for (const auto& r : drg)
                if (dr(d, r)) o.paths2.insert({s, d, r});
            for (const auto& d2 : dis)
                if (d2 != d && ds(d2, s))
                    for (const auto& r : drg)
                        if (dr(d2, r)) o.paths3.insert({d, s, d2, r});
        }
    return o;
}

using GroupKey = std::tuple<std::string, std::string, std::set<std::string>, std::set<std::string>,
                            std::map<std::string, std::set<std::string>>>;

std::set<GroupKey> groups_from_paths(const mkg::KnowledgeGraph& g, const std::set<mkg::NodePath>& paths, int hop) {
    std::map<std::pair<std::string, std::string>, GroupKey> m;
    const auto label = [&](const std::string& id) { return g.node(id).label; };
    for (const auto& p : paths) {
        const auto key = hop == 3 ? std::pair{p[0], p[2]} : std::pair{p[0], std::string()};
        auto& k = m.try_emplace(key, GroupKey{key.first, key.second, {}, {}, {}}).first->second;
        if (hop == 1) std::get<2>(k).insert(label(p[1]));
        if (hop == 2) {
            std::get<2>(k).insert(label(p[0]));
            std::get<3>(k).insert(label(p[2]));
            std::get<4>(k)[label(p[1])].insert(label(p[2]));
        }
        if (hop == 3) {
            std::get<2>(k).insert(label(p[1]));
            std::get<3>(k).insert(label(p[3]));
        }
    }
    std::set<GroupKey> out;
    for (auto& [_, k] : m) out.insert(std::move(k));
    return out;
}

std::set<GroupKey> groups_from_library(const mkg::KnowledgeGraph& g, int hop) {
    std::set<GroupKey> out;
    for (const auto& grp : prompting::hop_groups(g, hop)) {
        std::map<std::string, std::set<std::string>> by_disease;
        for (const auto& [d, drugs] : grp.drugs_by_disease) by_disease[d].insert(drugs.begin(), drugs.end());
        out.insert({grp.subject, grp.other_disease, {grp.symptoms.begin(), grp.symptoms.end()},
                    {grp.drugs.begin(), grp.drugs.end()}, by_disease});
    }
    return out;
}

mkg::KnowledgeGraph random_graph(Rng& rng) {
    std::vector<mkg::GraphNode> nodes;
    std::vector<mkg::GraphEdge> edges;
    const auto nd = 2 + rng.uniform_index(15), nr = rng.uniform_index(15), ns = 1 + rng.uniform_index(18);
    for (std::size_t i = 0; i < nd; ++i)
        nodes.push_back({"D" + std::to_string(i), mkg::NodeKind::Disease, "disease " + std::to_string(i),
                         code_at(rng.uniform_index(6)), {}});
    for (std::size_t i = 0; i < nr; ++i)
        nodes.push_back({"R" + std::to_string(i), mkg::NodeKind::Drug, "drug " + std::to_string(i), {}, {}});
    for (std::size_t i = 0; i < ns; ++i)
        nodes.push_back({"S" + std::to_string(i), mkg::NodeKind::Symptom, "symptom " + std::to_string(i), {}, {}});
    const double p = 0.1 + 0.3 * rng.uniform01();
    for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t s = 0; s < ns; ++s)
            if (rng.uniform01() < p)
                edges.push_back({"D" + std::to_string(d), "S" + std::to_string(s), mkg::Relation::DiseaseSymptom});
        for (std::size_t r = 0; r < nr; ++r)
            if (rng.uniform01() < p)
                edges.push_back({"D" + std::to_string(d), "R" + std::to_string(r), mkg::Relation::DiseaseDrug});
    }
    return mkg::KnowledgeGraph::build(std::move(nodes), std::move(edges));
}

void khop_oracle(Check& c) {
    const auto templates = prompting::TemplateSet::load(kgtest::templates_dir("en"));
    std::vector<mkg::KnowledgeGraph> graphs{mkg::load_graph(kgtest::fixture("graph.json")),
                                            mkg::load_graph(kgtest::fixture("graph_small.json"))};
    Rng rng(808);
    for (int i = 0; i < 60; ++i) graphs.push_back(random_graph(rng));
    std::size_t max_nodes = 0;
    for (const auto& g : graphs) {
        max_nodes = std::max(max_nodes, g.nodes().size());
        const auto oracle = enumerate_paths(g);
        const std::set<mkg::NodePath>* expected[3]{&oracle.paths1, &oracle.paths2, &oracle.paths3};
        for (int hop = 1; hop <= 3; ++hop) {
            std::set<mkg::NodePath> got;
            for (const auto& n : g.nodes())
                for (auto& p : mkg::khop_traverse(g, n.id, mkg::hop_pattern(hop))) got.insert(std::move(p));
            c.expect(got == *expected[hop - 1], "paths hop " + std::to_string(hop));
            c.expect(groups_from_library(g, hop) == groups_from_paths(g, *expected[hop - 1], hop),
                     "sample groups hop " + std::to_string(hop));
            Rng r(1);
            c.expect(prompting::build_hop_samples(g, hop, templates, 0, r).size() ==
                         groups_from_paths(g, *expected[hop - 1], hop).size(),
                     "sample count hop " + std::to_string(hop));
        }
        for (const auto& p : oracle.paths3) c.expect(p[0] != p[2], "3-hop revisits its disease");
    }
    c.expect(max_nodes <= 50, "graph larger than 50 nodes");

    const auto throws_domain = [](auto&& fn) {
        try {
            fn();
        } catch (const DomainError&) {
            return true;
        } catch (...) {
        }
        return false;
    };
    const auto& g = graphs.front();
    c.expect(throws_domain([] { mkg::hop_pattern(4); }), "hop 4 pattern accepted");
    c.expect(throws_domain([&] {
                 Rng r(1);
                 prompting::build_hop_samples(g, 4, templates, 0, r);
             }),
             "hop 4 samples accepted");
    auto four = mkg::hop_pattern(3);
    four.push_back(four.front());
    c.expect(throws_domain([&] { mkg::khop_traverse(g, g.nodes().front().id, four); }), "4-step spec accepted");
}

// ---------------------------------------------------------------- 9

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

struct PipelineRun {
    bool ok = true;
    std::string failure;
    fs::path out;
};

PipelineRun run_pipeline(const kgtest::TempDir& dir, const std::string& name) {
    PipelineRun run;
    run.out = dir.path() / name;
    auto cfg = read_json(kgtest::fixture("config.json"));
    cfg["paths"] = {{"graph", kgtest::fixture("graph.json").string()},
                    {"corpus", kgtest::fixture("corpus.jsonl").string()},
                    {"templates", kgtest::templates_dir("en").string()},
                    {"output_dir", run.out.string()}};
    const auto cfg_path = dir.path() / (name + ".config.json");
    std::ofstream(cfg_path) << cfg.dump(2);
    const std::string base = "--config " + q(cfg_path) + " ";
    const std::string built_graph = " --graph " + q(run.out / "graph.json");
    for (const auto& args : {base + "kg build --from " + q(kgtest::fixture("graph.json")),
                             base + "task build --total 60" + built_graph, base + "generate" + built_graph,
                             base + "experiment upsample" + built_graph}) {
        const auto r = kgtest::run_cli(args, dir.path());
        if (r.status != 0) {
            run.ok = false;
            run.failure = args + " -> " + std::to_string(r.status) + " " + r.err;
            break;
        }
    }
    return run;
}

bool hit_block_ok(const json& h) {
    if (!h.is_object()) return false;
    for (const char* k : {"hit@1", "hit@3", "hit@5"})
        if (!h.contains(k) || !h[k].is_number() || h[k] < 0.0 || h[k] > 1.0) return false;
    return h["hit@1"] <= h["hit@3"] && h["hit@3"] <= h["hit@5"] && h.contains("n");
}

void pipeline(Check& c) {
    kgtest::TempDir dir("kgsynth-accept");
    const auto a = run_pipeline(dir, "run_a");
    c.expect(a.ok, a.failure);
    if (!a.ok) return;
    const auto b = run_pipeline(dir, "run_b");
    c.expect(b.ok, b.failure);

    const auto task = taskgen::load_task(a.out / "task.jsonl");
    c.expect(task.size() == 60, "task entries " + std::to_string(task.size()));
    std::set<std::string> keys;
    for (const auto& e : task) keys.insert(e.key());
    c.expect(keys.size() == task.size(), "task keys not unique");

    const auto synthetic = corpus::load_records(a.out / "synthetic.jsonl");
    c.expect(synthetic.size() == 60, "synthetic records " + std::to_string(synthetic.size()));
    std::set<std::string> joined;
    for (const auto& s : synthetic) {
        c.expect(s.origin == corpus::Origin::Synthetic, "origin of " + s.id);
        c.expect(s.split == corpus::Split::Train, "synthetic record outside train: " + s.id);
        const auto ref = s.meta.value("task_ref", std::string());
        c.expect(keys.contains(ref), "task_ref does not join: " + ref);
        const auto entry = std::find_if(task.begin(), task.end(), [&](const auto& e) { return e.key() == ref; });
        c.expect(entry != task.end() && entry->code == s.code, "code mismatch for " + s.id);
        joined.insert(ref);
    }
    c.expect(joined == keys, "not every task entry has a synthetic record");

    const auto report = read_json(a.out / "experiment_upsample.json");
    const auto real = corpus::load_corpus(kgtest::fixture("corpus.jsonl"));
    c.expect(report.value("mode", "") == "upsample", "report mode");
    c.expect(report["merged_sizes"]["valid"] == real.count(corpus::Split::Valid) &&
                 report["merged_sizes"]["test"] == real.count(corpus::Split::Test),
             "valid/test sizes changed by the merge");
    c.expect(report["merged_sizes"]["train"] == real.count(corpus::Split::Train) + 60, "train size");
    c.expect(report["runs"].is_array() && report["runs"].size() == report["n_runs"], "runs array");
    for (const auto& run : report["runs"]) {
        c.expect(run.contains("seed") && hit_block_ok(run["overall"]), "run overall block");
        for (const auto& [code, h] : run["per_code"].items()) c.expect(hit_block_ok(h), "per-code block " + code);
        c.expect(run["confusion"]["matrix"].size() == run["confusion"]["labels"].size(), "confusion shape");
    }
    c.expect(hit_block_ok(report["mean"]["overall"]), "mean block");
    c.expect(report["meta"].contains("config_hash") && report["meta"]["seed"] == 7, "meta stamp");

    if (b.ok)
        for (const char* f : {"graph.json", "task.jsonl", "task_baseline.jsonl", "synthetic.jsonl"}) {
            const auto x = kgtest::slurp(a.out / f), y = kgtest::slurp(b.out / f);
            c.expect(!x.empty() && x == y, std::string(f) + " differs between runs");
        }
    c.note("mean hit@1=" + fmt(report["mean"]["overall"]["hit@1"]));
}

// ---------------------------------------------------------------- 10

void gateway_resilience(Check& c) {
    using namespace gateway;
    BackendConfig cfg;
    cfg.max_retries = 3;
    cfg.rate_limit = 10'000;
    const Sleeper no_sleep = [](std::chrono::milliseconds) {};

    auto flaky = MockBackend::echo();
    flaky.fail_first(2);
    const auto r1 = generate(flaky, cfg, "prompt", "a", nullptr, no_sleep);
    c.expect(r1.ok() && r1.attempt_count == 3 && *r1.response_text == "prompt", "fail-twice attempt count");

    auto dead = MockBackend::echo();
    dead.always_fail();
    const auto r2 = generate(dead, cfg, "prompt", "b", nullptr, no_sleep);
    c.expect(!r2.ok() && r2.attempt_count == cfg.max_retries + 1 && !r2.response_text, "always-fail attempt count");
    c.expect(dead.call_count() == static_cast<std::size_t>(cfg.max_retries + 1), "always-fail call count");

    std::vector<std::string> prompts;
    for (int i = 0; i < 30; ++i) prompts.push_back("note prompt " + std::to_string(i));
    auto slow = MockBackend::reversed();
    slow.with_latency(std::chrono::milliseconds(3));
    const auto ordered = run_batch(slow, cfg, prompts, {.parallelism = 6, .sleeper = no_sleep});
    bool in_order = ordered.size() == prompts.size();
    for (std::size_t i = 0; in_order && i < prompts.size(); ++i)
        in_order = ordered[i].prompt == prompts[i] &&
                   *ordered[i].response_text == std::string(prompts[i].rbegin(), prompts[i].rend());
    c.expect(in_order, "batch order");

    kgtest::TempDir dir("kgsynth-accept");
    const auto ledger = dir / "checkpoint.jsonl";
    constexpr std::size_t kCrashAfter = 11;
    bool crashed = false;
    try {
        auto crashing = MockBackend::echo();
        crashing.crash_after(kCrashAfter);
        run_batch(crashing, cfg, prompts, {.parallelism = 1, .checkpoint = ledger, .sleeper = no_sleep});
    } catch (const SimulatedCrash&) {
        crashed = true;
    }
    c.expect(crashed, "crash not raised");
    const auto before = load_checkpoint(ledger);
    c.expect(before.size() == kCrashAfter, "ledger after crash holds " + std::to_string(before.size()));

    auto resumed_backend = MockBackend::echo();
    const auto resumed = run_batch(resumed_backend, cfg, prompts, {.parallelism = 4, .checkpoint = ledger, .sleeper = no_sleep});
    c.expect(resumed_backend.call_count() == prompts.size() - kCrashAfter,
             "resume re-issued " + std::to_string(resumed_backend.call_count()));
    for (const auto& call : resumed_backend.call_log())
        c.expect(!before.contains(call.request_id), "completed request re-issued: " + call.request_id);
    std::set<std::string> ids;
    bool all_ok = resumed.size() == prompts.size();
    for (std::size_t i = 0; all_ok && i < resumed.size(); ++i) {
        all_ok = resumed[i].ok() && resumed[i].prompt == prompts[i];
        ids.insert(resumed[i].request_id);
    }
    c.expect(all_ok && ids.size() == prompts.size(), "resumed batch incomplete or duplicated");
    std::map<std::string, int> lines;
    for (const auto& row : read_jsonl(ledger)) ++lines[row.at("request_id").get<std::string>()];
    c.expect(lines.size() == prompts.size(), "ledger ids");
    c.expect(std::all_of(lines.begin(), lines.end(), [](const auto& kv) { return kv.second == 1; }),
             "ledger holds duplicates");
}

// ---------------------------------------------------------------- 11

void replace_contract(Check& c) {
    const auto real = corpus::load_corpus(kgtest::fixture("corpus.jsonl"));
    const auto k81 = IcdCategory::parse("K81");
    std::vector<corpus::NoteRecord> synthetic;
    for (int i = 0; i < 30; ++i)
        synthetic.push_back({"syn-K81-" + std::to_string(i), "Synthetic note " + std::to_string(i), k81,
                             corpus::Split::Train, corpus::Origin::Synthetic,
                             json{{"backend", "mock"}, {"task_ref", "full:K81:" + std::to_string(i)}}});
    const auto merged = corpus::merge_for_training(real, synthetic, corpus::MergeMode::Replace, {k81});
    std::size_t real_train = 0, syn_train = 0;
    for (const auto* r : merged.in_split(corpus::Split::Train)) {
        if (r->code != k81) continue;
        (r->origin == corpus::Origin::Real ? real_train : syn_train)++;
    }
    c.expect(real_train == 0, "real K81 train records: " + std::to_string(real_train));
    c.expect(syn_train == 30, "synthetic K81 train records: " + std::to_string(syn_train));
    std::set<std::string> test_ids;
    for (const auto* r : merged.in_split(corpus::Split::Test)) test_ids.insert(r->id);
    std::size_t moved = 0;
    for (const auto* r : real.in_split(corpus::Split::Train))
        if (r->code == k81) {
            c.expect(test_ids.contains(r->id), "former train record missing from test: " + r->id);
            ++moved;
        }
    c.expect(moved > 0, "fixture has no K81 train records");
    for (const auto* r : merged.in_split(corpus::Split::Test)) c.expect(r->origin == corpus::Origin::Real, "synthetic in test");
    c.note(std::to_string(moved) + " real records moved to test");
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<void(Check&)> run;
};

}  // namespace

int main() {
    kgsynth::log::set_level("error");
    const std::vector<Criterion> criteria{
        {1, "generation weight vs arbitrary-precision oracle", 1.0, weight_oracle},
        {2, "largest-remainder allocation", 10.0, allocation},
        {3, "hit@k vs rescan oracle", 1.0, hit_at_k_oracle},
        {4, "classifier sanity", 60.0, classifier_sanity},
        {5, "symptom sampling distribution", 30.0, sampling_distribution},
        {6, "n-gram usage ratio vs set arithmetic", 5.0, ngram_oracle},
        {7, "validity filter vote partition", 30.0, validity_partition},
        {8, "k-hop samples vs path enumeration", 5.0, khop_oracle},
        {9, "end-to-end pipeline with mock backend", 60.0, pipeline},
        {10, "gateway resilience", 10.0, gateway_resilience},
        {11, "replace-mode contract", 5.0, replace_contract},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        check.expect(took.count() < cr.budget_s, "over time budget of " + fmt(cr.budget_s) + "s");
        const bool ok = check.ok();
        failed += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << std::setw(2) << cr.id << ": " << cr.title << " ("
                  << std::fixed << std::setprecision(2) << took.count() << "s; " << check.summary() << ")"
                  << std::endl;
        std::cout.unsetf(std::ios::fixed);
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " of " : "ALL PASSED: ") << criteria.size()
              << " criteria" << std::endl;
    return failed ? 1 : 0;
}
