#include <CLI11.hpp>
#include <iostream>
#include <numeric>
#include <sstream>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/corpus/synthetic.hpp"
#include "kgsynth/eval/experiment.hpp"
#include "kgsynth/eval/metrics.hpp"
#include "kgsynth/eval/ngram.hpp"
#include "kgsynth/eval/sbs.hpp"
#include "kgsynth/eval/similarity.hpp"
#include "kgsynth/eval/validity.hpp"
#include "kgsynth/gateway/http_backend.hpp"
#include "kgsynth/gateway/mock_backend.hpp"
#include "kgsynth/gateway/runner.hpp"
#include "kgsynth/mkg/extract.hpp"
#include "kgsynth/mkg/graph.hpp"
#include "kgsynth/prompting/instructions.hpp"
#include "kgsynth/prompting/render.hpp"
#include "kgsynth/taskgen/task.hpp"
#include "run_config.hpp"

namespace kg = kgsynth;
using kg::json;
namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> output_dir, graph, corpus, templates, log_level;
    std::optional<std::uint64_t> seed;
};

struct Context {
    kg::cli::RunConfig cfg;
    std::string command;

    json stamp() const {
        return {{"command", command},
                {"config_hash", kg::cli::config_hash(cfg)},
                {"seed", cfg.seed ? json(*cfg.seed) : json(nullptr)}};
    }
    fs::path out(const fs::path& name) const { return kg::cli::output_path(cfg, name); }
    std::uint64_t seed() const { return *cfg.seed; }

    /// Data file plus a "<name>.meta.json" sidecar.
    fs::path write_jsonl(const fs::path& name, const std::vector<json>& rows, json extra = json::object()) const {
        const auto path = out(name);
        kg::write_jsonl_atomic(path, rows);
        write_sidecar(path, std::move(extra));
        return path;
    }
    void write_sidecar(const fs::path& path, json extra) const {
        auto meta = stamp();
        meta.update(extra);
        kg::write_json_atomic(path.string() + ".meta.json", meta);
    }
    /// Reports carry their stamp inline.
    fs::path write_report(const fs::path& name, json report) const {
        const auto path = out(name);
        report["meta"] = stamp();
        kg::write_json_atomic(path, report);
        return path;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        const auto t = kg::text::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::vector<std::vector<std::string>> read_tsv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream in(kg::read_text(path));
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        for (std::string f; std::getline(ls, f, '\t');) fields.push_back(f);
        if (line.back() == '\t') fields.emplace_back();
        rows.push_back(std::move(fields));
    }
    return rows;
}

/// Tab-separated tables with a header row become objects keyed by column.
json tsv_objects(const fs::path& path) {
    const auto rows = read_tsv(path);
    if (rows.empty()) throw kg::ParseError(path.string() + ": missing header row");
    json out = json::array();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        json obj = json::object();
        for (std::size_t c = 0; c < rows[0].size() && c < rows[i].size(); ++c)
            if (!rows[i][c].empty()) obj[rows[0][c]] = rows[i][c];
        out.push_back(std::move(obj));
    }
    return out;
}

std::unique_ptr<kg::gateway::Backend> make_backend(const kg::cli::BackendSection& b) {
    using kg::gateway::MockBackend;
    if (b.kind == "http") return std::make_unique<kg::gateway::HttpBackend>(b.config);
    std::unique_ptr<MockBackend> mock;
    if (b.mock == "echo")
        mock.reset(new MockBackend(MockBackend::echo()));
    else if (b.mock == "reverse")
        mock.reset(new MockBackend(MockBackend::reversed()));
    else
        mock.reset(new MockBackend(MockBackend::from_table(b.table)));
    if (b.default_response) mock->with_default(*b.default_response);
    return mock;
}

kg::corpus::LabeledCorpus load_real(const Context& ctx) { return kg::corpus::load_corpus(ctx.cfg.paths.corpus); }

std::vector<kg::corpus::NoteRecord> load_synthetic(const Context& ctx, const std::string& flag) {
    return kg::corpus::load_records(flag.empty() ? ctx.out("synthetic.jsonl") : fs::path(flag));
}

std::set<kg::IcdCategory> parse_codes(const std::string& list) {
    std::set<kg::IcdCategory> codes;
    for (const auto& c : split_list(list)) codes.insert(kg::IcdCategory::parse(c));
    return codes;
}

// ---------------------------------------------------------------- kg

json cmd_kg_build(Context& ctx, const std::string& from, const std::string& nodes, const std::string& edges,
                  const std::string& out) {
    const auto path = ctx.out(out);
    kg::mkg::KnowledgeGraph graph;
    if (!from.empty()) {
        graph = kg::mkg::load_graph(from);
    } else {
        if (nodes.empty() || edges.empty()) throw kg::ConfigError("kg build needs --from or both --nodes and --edges");
        auto edge_rows = tsv_objects(edges);
        for (auto& e : edge_rows) {
            if (e.contains("relation") && !e.contains("rel")) e["rel"] = e["relation"];
            e.erase("relation");
        }
        graph = kg::mkg::graph_from_json({{"nodes", tsv_objects(nodes)}, {"edges", edge_rows}});
    }
    kg::mkg::save_graph(graph, path);
    ctx.write_sidecar(path, json::object());
    return {{"graph", path.string()}, {"stats", kg::mkg::stats_to_json(kg::mkg::stats(graph))}};
}

json cmd_kg_stats(Context& ctx) {
    const auto graph = kg::mkg::load_graph(ctx.cfg.paths.graph);
    const auto stats = kg::mkg::stats_to_json(kg::mkg::stats(graph));
    ctx.write_report("graph_stats.json", {{"stats", stats}});
    return stats;
}

json cmd_kg_extract(Context& ctx, const std::string& code, std::string text, const std::string& text_file,
                    const std::string& prompt_file, const std::string& review) {
    const auto path = ctx.out(review);
    if (!text_file.empty()) text = kg::read_text(text_file);
    if (kg::text::trim(text).empty()) throw kg::ConfigError("kg extract-symptoms needs --text or --text-file");
    const std::string prompt = prompt_file.empty() ? std::string(kg::mkg::kDefaultExtractionPrompt)
                                                   : kg::read_text(prompt_file);
    auto backend = make_backend(ctx.cfg.backend);
    const auto result =
        kg::mkg::extract_symptoms(*backend, ctx.cfg.backend.config, text, kg::IcdCategory::parse(code), prompt);
    kg::mkg::append_review(path, result);
    return {{"review", path.string()}, {"request_id", result.request_id}, {"candidates", result.candidates}};
}

json cmd_kg_approve(Context& ctx, const std::string& review, const std::string& out) {
    const auto path = ctx.out(out);
    const auto before = kg::mkg::load_graph(ctx.cfg.paths.graph);
    const auto after = kg::mkg::approve_symptoms(before, fs::path(review));
    kg::mkg::save_graph(after, path);
    ctx.write_sidecar(path, {{"review", review}});
    return {{"graph", path.string()},
            {"before", kg::mkg::stats_to_json(kg::mkg::stats(before))},
            {"after", kg::mkg::stats_to_json(kg::mkg::stats(after))}};
}

// ---------------------------------------------------------------- task

json cmd_task_build(Context& ctx) {
    const auto graph = kg::mkg::load_graph(ctx.cfg.paths.graph);
    const auto corpus = load_real(ctx);
    kg::taskgen::TaskOptions options;
    options.total = ctx.cfg.task.total;
    options.seed = ctx.seed();
    options.exceptions = ctx.cfg.task.exceptions;
    options.baseline = ctx.cfg.task.baseline;
    const auto task = kg::taskgen::build_task(graph, corpus, options);

    kg::taskgen::save_task(task.full, ctx.out("task.jsonl"));
    ctx.write_sidecar(ctx.out("task.jsonl"), {{"kind", "full"}});
    if (options.baseline) {
        kg::taskgen::save_task(task.baseline, ctx.out("task_baseline.jsonl"));
        ctx.write_sidecar(ctx.out("task_baseline.jsonl"), {{"kind", "baseline"}});
    }
    json allocation = json::array();
    for (const auto& w : task.allocation)
        allocation.push_back({{"code", w.code.code()}, {"weight", w.weight}, {"allocated", w.allocated}});
    json skipped = json::array();
    for (const auto& c : task.skipped_codes) skipped.push_back(c.code());
    ctx.write_report("allocation.json", {{"total", options.total}, {"allocation", allocation}, {"skipped_codes", skipped}});
    return {{"entries", task.full.size()}, {"baseline_entries", task.baseline.size()}, {"skipped_codes", skipped}};
}

// ---------------------------------------------------------------- generate

json cmd_generate(Context& ctx, const std::string& task_flag, const std::string& kind, bool fresh) {
    if (kind != "full" && kind != "baseline") throw kg::ConfigError("--kind must be full or baseline");
    const fs::path task_path =
        task_flag.empty() ? ctx.out(kind == "full" ? "task.jsonl" : "task_baseline.jsonl") : fs::path(task_flag);
    const auto entries = kg::taskgen::load_task(task_path);
    const auto templates = kg::prompting::TemplateSet::load(ctx.cfg.paths.templates);
    const auto stem = kind == "full" ? std::string("generations") : std::string("generations_baseline");

    const auto render_seed = kg::derive_seed(ctx.seed(), "render");
    std::vector<kg::gateway::BatchItem> items;
    std::map<std::string, kg::taskgen::GenerationTaskEntry> by_request;
    for (const auto& e : entries) {
        const auto t = e.kind == kg::taskgen::PromptKind::Full ? kg::prompting::TemplateKind::FullNote
                                                                : kg::prompting::TemplateKind::BaselineNote;
        kg::Rng rng(kg::derive_seed(render_seed, e.key()));
        items.push_back({"gen-" + e.key(), kg::prompting::render_note_prompt(e, templates.get(t), rng)});
        if (!by_request.emplace(items.back().request_id, e).second)
            throw kg::IntegrityError("duplicate task entry " + e.key());
    }

    const auto checkpoint = ctx.out(stem + ".checkpoint.jsonl");
    if (fresh) fs::remove(checkpoint);
    auto backend = make_backend(ctx.cfg.backend);
    kg::gateway::BatchOptions options;
    options.parallelism = ctx.cfg.backend.parallelism;
    options.checkpoint = checkpoint;
    const auto records = kg::gateway::run_batch(*backend, ctx.cfg.backend.config, items, options);

    std::vector<json> rows;
    for (const auto& r : records) rows.push_back(kg::gateway::to_json(r));
    ctx.write_jsonl(stem + ".jsonl", rows);

    const auto ingest = kg::corpus::ingest_synthetic(records, by_request);
    const auto synthetic_name = kind == "full" ? std::string("synthetic.jsonl") : std::string("synthetic_baseline.jsonl");
    kg::corpus::save_records(ingest.notes, ctx.out(synthetic_name));
    ctx.write_sidecar(ctx.out(synthetic_name), {{"backend", backend->name()},
                                                {"backend_deterministic", ctx.cfg.backend.kind == "mock"},
                                                {"task", task_path.string()}});
    std::size_t failed = 0;
    for (const auto& r : records) failed += !r.ok();
    return {{"entries", entries.size()},
            {"synthetic", ingest.notes.size()},
            {"failed", failed},
            {"skipped", ingest.skipped_failed},
            {"leak_flagged", ingest.leak_flagged}};
}

// ---------------------------------------------------------------- instruct

json cmd_instruct_build(Context& ctx, const std::string& hops, std::size_t limit, bool with_notes) {
    const auto graph = kg::mkg::load_graph(ctx.cfg.paths.graph);
    const auto templates = kg::prompting::TemplateSet::load(ctx.cfg.paths.templates);
    std::vector<kg::prompting::InstructionSample> samples;
    json counts = json::object();
    for (const auto& h : split_list(hops)) {
        const int hop = std::stoi(h);
        kg::Rng rng(kg::derive_seed(ctx.seed(), "hop-" + h));
        auto part = kg::prompting::build_hop_samples(graph, hop, templates, limit, rng);
        counts["hop" + h] = part.size();
        samples.insert(samples.end(), part.begin(), part.end());
    }
    if (with_notes) {
        const auto corpus = load_real(ctx);
        kg::Rng cont_rng(kg::derive_seed(ctx.seed(), "continuation"));
        auto cont = kg::prompting::build_continuation_samples(corpus, templates, cont_rng);
        kg::Rng gen_rng(kg::derive_seed(ctx.seed(), "generation"));
        auto gen = kg::prompting::build_generation_samples(corpus, graph, templates, gen_rng);
        counts["continuation"] = cont.samples.size();
        counts["generation"] = gen.samples.size();
        counts["skipped_notes"] = cont.skipped + gen.skipped;
        samples.insert(samples.end(), cont.samples.begin(), cont.samples.end());
        samples.insert(samples.end(), gen.samples.begin(), gen.samples.end());
    }
    std::vector<json> rows;
    for (const auto& s : samples) rows.push_back(kg::prompting::sample_to_json(s));
    ctx.write_jsonl("instructions.jsonl", rows);
    return counts;
}

// ---------------------------------------------------------------- eval

json cmd_eval_train(Context& ctx, const std::string& out) {
    const auto path = ctx.out(out);
    const auto model = kg::eval::train_classifier(load_real(ctx), ctx.cfg.eval.params, ctx.seed());
    kg::write_json_atomic(path, kg::eval::model_to_json(model));
    ctx.write_sidecar(path, json::object());
    return {{"model", path.string()},
            {"labels", model.labels.size()},
            {"vocabulary", model.vocabulary.size()},
            {"epochs", model.epochs_run},
            {"final_loss", model.loss_history.empty() ? 0.0 : model.loss_history.back()}};
}

json cmd_eval_score(Context& ctx, const std::string& model_flag, const std::string& split, const std::string& out) {
    ctx.out(out);
    const auto model = kg::eval::model_from_json(kg::read_json(model_flag.empty() ? ctx.out("model.json")
                                                                                 : fs::path(model_flag)));
    const auto corpus = load_real(ctx);
    const auto records = corpus.in_split(kg::corpus::split_from_string(split));
    if (records.empty()) throw kg::SplitError("split '" + split + "' is empty");
    const auto predictions = model.predict(records);
    std::vector<kg::IcdCategory> truths;
    for (const auto* r : records) truths.push_back(r->code);
    auto report = kg::eval::report_to_json(
        kg::eval::evaluate(predictions, truths, {{"split", split}, {"model_seed", model.seed}}));
    json hit_at = json::object();
    for (auto k : ctx.cfg.eval.k) hit_at[std::to_string(k)] = kg::eval::hit_at_k(predictions, truths, k);
    report["hit_at"] = hit_at;
    const auto path = ctx.write_report(out, report);
    return {{"report", path.string()}, {"overall", report["overall"]}, {"hit_at", hit_at}};
}

json cmd_eval_confusion(Context& ctx, const std::string& report_flag, std::size_t top) {
    const auto report =
        kg::eval::report_from_json(kg::read_json(report_flag.empty() ? ctx.out("report.json") : fs::path(report_flag)));
    const auto pairs = kg::eval::confusion_pairs(report);
    json rows = json::array();
    for (std::size_t i = 0; i < pairs.size() && (top == 0 || i < top); ++i)
        rows.push_back({{"first", pairs[i].first.code()}, {"second", pairs[i].second.code()}, {"mass", pairs[i].mass}});
    ctx.write_report("confusion_pairs.json", {{"pairs", rows}});
    return {{"pairs", rows}};
}

json cmd_eval_ngram(Context& ctx, const std::string& synthetic_flag, const std::string& ns) {
    const auto synthetic = load_synthetic(ctx, synthetic_flag);
    std::vector<int> orders;
    for (const auto& n : split_list(ns)) orders.push_back(std::stoi(n));
    json per_record = json::array();
    std::map<int, std::pair<double, std::size_t>> sums;
    for (const auto& r : synthetic) {
        const auto example = r.meta.value("example", json(nullptr));
        if (!example.is_string()) continue;
        json ratios = json::object();
        for (int n : orders) {
            try {
                const double v = kg::eval::ngram_usage_ratio(r.text, example.get<std::string>(), n);
                ratios[std::to_string(n)] = v;
                sums[n].first += v;
                ++sums[n].second;
            } catch (const kg::DomainError&) {
                ratios[std::to_string(n)] = nullptr;
            }
        }
        per_record.push_back({{"id", r.id}, {"code", r.code.code()}, {"ratios", ratios}});
    }
    json mean = json::object();
    for (int n : orders) {
        const auto [sum, count] = sums[n];
        mean[std::to_string(n)] = count ? json(sum / static_cast<double>(count)) : json(nullptr);
    }
    ctx.write_report("ngram.json", {{"mean", mean}, {"records", per_record}});
    return {{"mean", mean}, {"records", per_record.size()}};
}

json cmd_eval_similarity(Context& ctx, const std::string& synthetic_flag, const std::string& provider_kind,
                         const std::string& endpoint, std::size_t dimension) {
    const auto synthetic = load_synthetic(ctx, synthetic_flag);
    std::unique_ptr<kg::eval::EmbeddingProvider> provider;
    if (provider_kind == "hash")
        provider = std::make_unique<kg::eval::HashEmbeddingProvider>(dimension, ctx.cfg.seed.value_or(0));
    else if (provider_kind == "http")
        provider = std::make_unique<kg::eval::HttpEmbeddingProvider>(endpoint);
    else
        throw kg::ConfigError("--provider must be hash or http");
    json per_record = json::array();
    kg::eval::SimilarityScores mean;
    std::size_t n = 0;
    for (const auto& r : synthetic) {
        const auto example = r.meta.value("example", json(nullptr));
        if (!example.is_string() || kg::text::words(r.text).empty() || kg::text::words(example.get<std::string>()).empty())
            continue;
        const auto s = kg::eval::embedding_similarity(r.text, example.get<std::string>(), *provider);
        per_record.push_back({{"id", r.id}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}});
        mean.precision += s.precision;
        mean.recall += s.recall;
        mean.f1 += s.f1;
        ++n;
    }
    if (n) {
        mean.precision /= n;
        mean.recall /= n;
        mean.f1 /= n;
    }
    const json summary{{"precision", mean.precision}, {"recall", mean.recall}, {"f1", mean.f1}, {"n", n}};
    ctx.write_report("similarity.json", {{"provider", provider_kind}, {"mean", summary}, {"records", per_record}});
    return summary;
}

// ---------------------------------------------------------------- filter / experiment / sbs

json cmd_filter_validity(Context& ctx, const std::string& synthetic_flag) {
    const auto synthetic = load_synthetic(ctx, synthetic_flag);
    kg::eval::ValidityConfig config;
    config.n_models = ctx.cfg.eval.n_models;
    config.quorum = ctx.cfg.eval.quorum;
    config.params = ctx.cfg.eval.params;
    config.seeds = kg::eval::ValidityConfig::derived_seeds(ctx.seed(), config.n_models);
    const auto result = kg::eval::validity_filter(synthetic, load_real(ctx), config);
    kg::corpus::save_records(result.valid, ctx.out("synthetic_valid.jsonl"));
    ctx.write_sidecar(ctx.out("synthetic_valid.jsonl"), json::object());
    kg::corpus::save_records(result.invalid, ctx.out("synthetic_invalid.jsonl"));
    ctx.write_sidecar(ctx.out("synthetic_invalid.jsonl"), json::object());
    ctx.write_report("validity.json", {{"n_models", config.n_models},
                                       {"k", config.k},
                                       {"quorum", config.quorum},
                                       {"model_seeds", config.seeds},
                                       {"records", kg::eval::validity_votes_to_json(synthetic, result)}});
    return {{"valid", result.valid.size()}, {"invalid", result.invalid.size()}};
}

json cmd_experiment(Context& ctx, kg::corpus::MergeMode mode, const std::string& synthetic_flag,
                    const std::string& codes, bool move_valid) {
    kg::eval::ExperimentSpec spec;
    spec.mode = mode;
    spec.codes = parse_codes(codes);
    spec.n_runs = ctx.cfg.eval.n_runs;
    spec.seed = ctx.seed();
    spec.params = ctx.cfg.eval.params;
    spec.merge.move_valid_to_test = move_valid;
    const auto result = kg::eval::run_experiment(load_real(ctx), load_synthetic(ctx, synthetic_flag), spec);
    const auto report = kg::eval::experiment_to_json(result, spec);
    const auto path = ctx.write_report("experiment_" + std::string(kg::corpus::to_string(mode)) + ".json", report);
    return {{"report", path.string()}, {"mean", report["mean"]}};
}

json cmd_sbs_build(Context& ctx, const std::string& synthetic_flag, std::size_t pairs) {
    const auto synthetic = load_synthetic(ctx, synthetic_flag);
    kg::Rng rng(kg::derive_seed(ctx.seed(), "sbs"));
    const auto sheet = kg::eval::build_sbs_sheet(load_real(ctx), synthetic, pairs, rng);
    kg::write_text_atomic(ctx.out("sbs_sheet.csv"), kg::eval::sbs_sheet_csv(sheet));
    kg::write_text_atomic(ctx.out("sbs_key.csv"), kg::eval::sbs_key_csv(sheet));
    json provenance = json::array();
    for (const auto& p : sheet.pairs)
        provenance.push_back({{"pair_id", p.pair_id}, {"code", p.code.code()}, {"real_id", p.real_id},
                              {"synthetic_id", p.synthetic_id}});
    ctx.write_report("sbs_summary.json", {{"pairs", sheet.pairs.size()},
                                          {"median_words", sheet.median_words},
                                          {"fallbacks", sheet.fallbacks},
                                          {"provenance", provenance}});
    return {{"pairs", sheet.pairs.size()}, {"median_words", sheet.median_words}, {"fallbacks", sheet.fallbacks}};
}

json cmd_sbs_score(Context& ctx, const std::string& key_flag, const std::string& answers) {
    const auto key = kg::read_text(key_flag.empty() ? ctx.out("sbs_key.csv") : fs::path(key_flag));
    const auto score = kg::eval::score_sbs(key, kg::read_text(answers));
    const json out{{"correct", score.correct},
                   {"answered", score.answered},
                   {"unanswered", score.unanswered},
                   {"accuracy", score.accuracy}};
    ctx.write_report("sbs_score.json", out);
    return out;
}

// ---------------------------------------------------------------- driver

struct Command {
    CLI::App* app;
    std::string name;
    kg::cli::Needs needs;
    std::function<json(Context&)> run;
};

Context make_context(const Overrides& o, const Command& cmd) {
    Context ctx;
    ctx.command = cmd.name;
    ctx.cfg = o.config.empty() ? kg::cli::run_config_from_json(json::object(), fs::current_path())
                               : kg::cli::load_run_config(o.config);
    const auto abs = [](const std::string& p) { return fs::absolute(p).lexically_normal(); };
    if (o.output_dir) ctx.cfg.paths.output_dir = abs(*o.output_dir);
    if (o.graph) ctx.cfg.paths.graph = abs(*o.graph);
    if (o.corpus) ctx.cfg.paths.corpus = abs(*o.corpus);
    if (o.templates) ctx.cfg.paths.templates = abs(*o.templates);
    if (o.log_level) ctx.cfg.log_level = *o.log_level;
    if (o.seed) ctx.cfg.seed = *o.seed;
    return ctx;
}

int report_error(const std::string& kind, const std::string& message, const json& extra = json::object()) {
    json e{{"error", kind}, {"message", message}};
    e.update(extra);
    std::cerr << e.dump() << '\n';
    return kind == "config" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph driven synthetic clinical note toolkit"};
    app.fallthrough();
    app.require_subcommand(1);
    Overrides o;
    app.add_option("--config", o.config, "JSON run configuration");
    app.add_option("--output-dir", o.output_dir, "Directory for every artifact written");
    app.add_option("--graph", o.graph, "Graph JSON file");
    app.add_option("--corpus", o.corpus, "Corpus JSONL file");
    app.add_option("--templates", o.templates, "Template file or directory");
    app.add_option("--seed", o.seed, "Seed for every sampling step");
    app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off");

    std::vector<Command> commands;
    const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, kg::cli::Needs needs) {
        auto* sub = parent->add_subcommand(name, help);
        commands.push_back({sub, std::string(parent == &app ? "" : parent->get_name() + " ") + name, needs, {}});
        return sub;
    };
    const auto& last = [&]() -> Command& { return commands.back(); };

    // kg
    auto* kg_cmd = app.add_subcommand("kg", "Knowledge graph")->require_subcommand(1);
    std::string from, nodes, edges, graph_out = "graph.json";
    auto* sub = leaf(kg_cmd, "build", "Validate and store a graph", {});
    sub->add_option("--from", from, "Graph JSON file");
    sub->add_option("--nodes", nodes, "Node table (TSV: id, kind, label, icd, source_text)");
    sub->add_option("--edges", edges, "Edge table (TSV: from, to, rel)");
    sub->add_option("--out", graph_out, "Output name");
    last().run = [&](Context& c) { return cmd_kg_build(c, from, nodes, edges, graph_out); };

    leaf(kg_cmd, "stats", "Node and edge counts", {.graph = true});
    last().run = [](Context& c) { return cmd_kg_stats(c); };

    std::string code, note_text, text_file, prompt_file, review_name = "review.jsonl";
    sub = leaf(kg_cmd, "extract-symptoms", "Ask the backend for symptom candidates", {.backend = true});
    sub->add_option("--code", code, "ICD-10 category")->required();
    sub->add_option("--text", note_text, "Clinical manifestation text");
    sub->add_option("--text-file", text_file, "File holding the text");
    sub->add_option("--prompt-template", prompt_file, "Prompt with a {text} placeholder");
    sub->add_option("--review", review_name, "Review file name in the output directory");
    last().run = [&](Context& c) { return cmd_kg_extract(c, code, note_text, text_file, prompt_file, review_name); };

    std::string review_in, approved_out = "graph.json";
    sub = leaf(kg_cmd, "approve", "Apply accepted review items to the graph", {.graph = true});
    sub->add_option("--review", review_in, "Review JSONL file")->required();
    sub->add_option("--out", approved_out, "Output name");
    last().run = [&](Context& c) { return cmd_kg_approve(c, review_in, approved_out); };

    // task
    auto* task_cmd = app.add_subcommand("task", "Generation tasks")->require_subcommand(1);
    std::optional<std::size_t> total;
    bool baseline = false;
    sub = leaf(task_cmd, "build", "Allocate and sample generation entries",
               {.graph = true, .corpus = true, .seed = true, .total = true});
    sub->add_option("--total", total, "Total number of entries");
    sub->add_flag("--baseline", baseline, "Also write disease-name-only entries");
    last().run = [](Context& c) { return cmd_task_build(c); };
    auto* task_build = sub;

    // generate
    std::string task_file, gen_kind = "full";
    bool fresh = false;
    sub = leaf(&app, "generate", "Render prompts, call the backend, ingest notes",
               {.templates = true, .seed = true, .backend = true});
    sub->add_option("--task", task_file, "Task JSONL (default: output directory)");
    sub->add_option("--kind", gen_kind, "full or baseline");
    sub->add_flag("--fresh", fresh, "Ignore an existing checkpoint");
    last().run = [&](Context& c) { return cmd_generate(c, task_file, gen_kind, fresh); };

    // instruct
    auto* instruct_cmd = app.add_subcommand("instruct", "Instruction data")->require_subcommand(1);
    std::string hops = "1,2,3";
    std::size_t hop_limit = 0;
    bool no_notes = false;
    sub = leaf(instruct_cmd, "build", "Graph hop questions and note tasks",
               {.graph = true, .templates = true, .seed = true});
    sub->add_option("--hops", hops, "Comma-separated hop counts");
    sub->add_option("--limit", hop_limit, "Samples per hop, 0 for all");
    sub->add_flag("--no-notes", no_notes, "Skip continuation and generation samples");
    last().run = [&](Context& c) { return cmd_instruct_build(c, hops, hop_limit, !no_notes); };
    auto* instruct_build = sub;

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Classifier and text metrics")->require_subcommand(1);
    std::string model_out = "model.json";
    sub = leaf(eval_cmd, "train", "Train the TF-IDF classifier", {.corpus = true, .seed = true});
    sub->add_option("--out", model_out, "Output name");
    last().run = [&](Context& c) { return cmd_eval_train(c, model_out); };

    std::string model_in, split = "test", report_out = "report.json";
    sub = leaf(eval_cmd, "score", "hit@k and confusion on a split", {.corpus = true});
    sub->add_option("--model", model_in, "Model JSON (default: output directory)");
    sub->add_option("--split", split, "train, valid or test");
    sub->add_option("--out", report_out, "Output name");
    last().run = [&](Context& c) { return cmd_eval_score(c, model_in, split, report_out); };

    std::string report_in;
    std::size_t top = 0;
    sub = leaf(eval_cmd, "confusion", "Most confused code pairs", {});
    sub->add_option("--report", report_in, "Report JSON (default: output directory)");
    sub->add_option("--top", top, "Pairs to keep, 0 for all");
    last().run = [&](Context& c) { return cmd_eval_confusion(c, report_in, top); };

    std::string synthetic_in, orders = "1,2,3";
    sub = leaf(eval_cmd, "ngram", "n-gram reuse of the prompt example", {});
    sub->add_option("--synthetic", synthetic_in, "Synthetic JSONL (default: output directory)");
    sub->add_option("--n", orders, "Comma-separated n values");
    last().run = [&](Context& c) { return cmd_eval_ngram(c, synthetic_in, orders); };

    std::string provider = "hash", endpoint;
    std::size_t dimension = 64;
    sub = leaf(eval_cmd, "similarity", "Embedding similarity to the prompt example", {});
    sub->add_option("--synthetic", synthetic_in, "Synthetic JSONL (default: output directory)");
    sub->add_option("--provider", provider, "hash or http");
    sub->add_option("--endpoint", endpoint, "Embedding service URL for http");
    sub->add_option("--dimension", dimension, "Vector size for the hash provider");
    last().run = [&](Context& c) { return cmd_eval_similarity(c, synthetic_in, provider, endpoint, dimension); };

    // filter
    auto* filter_cmd = app.add_subcommand("filter", "Synthetic note filters")->require_subcommand(1);
    sub = leaf(filter_cmd, "validity", "Ensemble top-k vote", {.corpus = true, .seed = true});
    sub->add_option("--synthetic", synthetic_in, "Synthetic JSONL (default: output directory)");
    last().run = [&](Context& c) { return cmd_filter_validity(c, synthetic_in); };

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Training-set experiments")->require_subcommand(1);
    std::string codes;
    bool move_valid = false;
    for (const auto mode : {kg::corpus::MergeMode::Replace, kg::corpus::MergeMode::Upsample}) {
        sub = leaf(exp_cmd, std::string(kg::corpus::to_string(mode)), "Merge, train n_runs models, score",
                   {.corpus = true, .seed = true});
        sub->add_option("--synthetic", synthetic_in, "Synthetic JSONL (default: output directory)");
        sub->add_option("--codes", codes, "Comma-separated target codes (default: all)");
        if (mode == kg::corpus::MergeMode::Replace)
            sub->add_flag("--move-valid", move_valid, "Also move validation notes of the codes to test");
        last().run = [&, mode](Context& c) { return cmd_experiment(c, mode, synthetic_in, codes, move_valid); };
    }

    // sbs
    auto* sbs_cmd = app.add_subcommand("sbs", "Side-by-side annotation")->require_subcommand(1);
    std::size_t pairs = 105;
    sub = leaf(sbs_cmd, "build", "Sheet of real/synthetic sentence pairs", {.corpus = true, .seed = true});
    sub->add_option("--synthetic", synthetic_in, "Synthetic JSONL (default: output directory)");
    sub->add_option("--pairs", pairs, "Number of pairs");
    last().run = [&](Context& c) { return cmd_sbs_build(c, synthetic_in, pairs); };

    std::string key_in, answers;
    sub = leaf(sbs_cmd, "score", "Annotator accuracy against the key", {});
    sub->add_option("--key", key_in, "Key CSV (default: output directory)");
    sub->add_option("--answers", answers, "Answers CSV: pair_id,answer")->required();
    last().run = [&](Context& c) { return cmd_sbs_score(c, key_in, answers); };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const auto it = std::find_if(commands.begin(), commands.end(), [](const Command& c) { return c.app->parsed(); });
        if (it == commands.end()) throw kg::ConfigError("no command given");
        auto ctx = make_context(o, *it);
        if (it->app == task_build) {
            if (total) ctx.cfg.task.total = *total;
            if (baseline) ctx.cfg.task.baseline = true;
        }
        auto needs = it->needs;
        if (it->app == instruct_build && !no_notes) needs.corpus = true;
        kg::cli::validate(ctx.cfg, needs);
        fs::create_directories(ctx.cfg.paths.output_dir);
        const auto summary = it->run(ctx);
        std::cout << summary.dump() << '\n';
        return 0;
    } catch (const kg::cli::ConfigProblems& e) {
        return report_error(e.kind(), e.what(), {{"problems", e.problems()}});
    } catch (const kg::BackendError& e) {
        return report_error(e.kind(), e.what(), {{"request_id", e.request_id()}});
    } catch (const kg::Error& e) {
        return report_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
}
