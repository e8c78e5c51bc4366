#include "run_config.hpp"

#include <set>

#include "kgsynth/common/log.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/taskgen/weights.hpp"

namespace kgsynth::cli {
namespace {

fs::path resolve(const json& section, const char* key, const fs::path& base_dir) {
    if (!section.contains(key)) return {};
    fs::path p = section.at(key).get<std::string>();
    return p.is_relative() ? (base_dir / p).lexically_normal() : p;
}

void check_path(std::vector<std::string>& out, const fs::path& p, const char* key) {
    if (p.empty())
        out.push_back(std::string("paths.") + key + " is not set");
    else if (!fs::exists(p))
        out.push_back(std::string("paths.") + key + " does not exist: " + p.string());
}

}  // namespace

ConfigProblems::ConfigProblems(std::vector<std::string> problems)
    : ConfigError("invalid configuration: " + text::join(problems, "; ")), problems_(std::move(problems)) {}

RunConfig run_config_from_json(const json& j, const fs::path& base_dir) {
    RunConfig c;
    c.task.exceptions = taskgen::default_exceptions();
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        const auto paths = j.value("paths", json::object());
        c.paths.graph = resolve(paths, "graph", base_dir);
        c.paths.corpus = resolve(paths, "corpus", base_dir);
        c.paths.templates = resolve(paths, "templates", base_dir);
        c.paths.output_dir = resolve(paths, "output_dir", base_dir);

        const auto backend = j.value("backend", json::object());
        c.backend.kind = backend.value("kind", c.backend.kind);
        c.backend.mock = backend.value("mock", c.backend.mock);
        c.backend.table = backend.value("table", c.backend.table);
        if (backend.contains("default_response") && !backend["default_response"].is_null())
            c.backend.default_response = backend["default_response"].get<std::string>();
        c.backend.parallelism = backend.value("parallelism", c.backend.parallelism);
        c.backend.config = gateway::backend_config_from_json(backend);

        const auto task = j.value("task", json::object());
        c.task.total = task.value("total", c.task.total);
        c.task.baseline = task.value("baseline", c.task.baseline);
        if (task.contains("seed") && !task["seed"].is_null()) c.seed = task["seed"].get<std::uint64_t>();
        if (task.contains("exceptions")) {
            c.task.exceptions.clear();
            for (const auto& [code, n] : task["exceptions"].items())
                c.task.exceptions.emplace(IcdCategory::parse(code), n.get<std::size_t>());
        }

        const auto ev = j.value("eval", json::object());
        c.eval.k = ev.value("k", c.eval.k);
        c.eval.n_runs = ev.value("n_runs", c.eval.n_runs);
        c.eval.n_models = ev.value("n_models", c.eval.n_models);
        c.eval.quorum = ev.value("quorum", c.eval.quorum);
        if (ev.contains("params")) c.eval.params = eval::training_params_from_json(ev["params"]);

        if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
        c.log_level = j.value("log_level", c.log_level);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const MalformedCodeError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const fs::path& path) {
    return run_config_from_json(read_json(path), fs::absolute(path).parent_path());
}

json to_json(const RunConfig& c) {
    json exceptions = json::object();
    for (const auto& [code, n] : c.task.exceptions) exceptions[code.code()] = n;
    auto backend = gateway::to_json(c.backend.config);
    backend["kind"] = c.backend.kind;
    backend["mock"] = c.backend.mock;
    backend["table"] = c.backend.table;
    backend["default_response"] = c.backend.default_response ? json(*c.backend.default_response) : json(nullptr);
    backend["parallelism"] = c.backend.parallelism;
    return {{"paths", {{"graph", c.paths.graph.string()},
                       {"corpus", c.paths.corpus.string()},
                       {"templates", c.paths.templates.string()},
                       {"output_dir", c.paths.output_dir.string()}}},
            {"backend", backend},
            {"task", {{"total", c.task.total}, {"baseline", c.task.baseline}, {"exceptions", exceptions}}},
            {"eval", {{"k", c.eval.k},
                      {"n_runs", c.eval.n_runs},
                      {"n_models", c.eval.n_models},
                      {"quorum", c.eval.quorum},
                      {"params", eval::to_json(c.eval.params)}}},
            {"seed", c.seed ? json(*c.seed) : json(nullptr)},
            {"log_level", c.log_level}};
}

std::vector<std::string> problems(const RunConfig& c, const Needs& needs) {
    std::vector<std::string> out;
    if (c.paths.output_dir.empty()) out.emplace_back("paths.output_dir is not set");
    if (needs.graph) check_path(out, c.paths.graph, "graph");
    if (needs.corpus) check_path(out, c.paths.corpus, "corpus");
    if (needs.templates) check_path(out, c.paths.templates, "templates");
    if (needs.seed && !c.seed) out.emplace_back("seed is required for this command");
    if (needs.total && c.task.total == 0) out.emplace_back("task.total must be positive");
    if (needs.backend) {
        static const std::set<std::string> kinds{"mock", "http"}, mocks{"echo", "reverse", "table"};
        if (!kinds.contains(c.backend.kind)) out.push_back("backend.kind must be mock or http, got '" + c.backend.kind + "'");
        if (c.backend.kind == "mock" && !mocks.contains(c.backend.mock))
            out.push_back("backend.mock must be echo, reverse or table, got '" + c.backend.mock + "'");
        if (c.backend.kind == "http") {
            if (c.backend.config.endpoint.empty()) out.emplace_back("backend.endpoint is required for http");
            if (c.backend.config.model_id.empty()) out.emplace_back("backend.model is required for http");
            if (c.backend.config.auth_token_env.empty()) out.emplace_back("backend.auth_token_env is required for http");
        }
        if (c.backend.parallelism == 0) out.emplace_back("backend.parallelism must be positive");
        for (auto& p : c.backend.config.problems()) out.push_back(std::move(p));
    }
    for (auto k : c.eval.k)
        if (k == 0) out.emplace_back("eval.k entries must be positive");
    if (c.eval.n_runs == 0) out.emplace_back("eval.n_runs must be positive");
    if (c.eval.quorum == 0 || c.eval.quorum > c.eval.n_models)
        out.push_back("eval.quorum must be in 1.." + std::to_string(c.eval.n_models));
    if (!(c.eval.params.learning_rate > 0.0)) out.emplace_back("eval.params.learning_rate must be positive");
    if (c.eval.params.max_epochs <= 0) out.emplace_back("eval.params.max_epochs must be positive");
    try {
        log::set_level(c.log_level);
    } catch (const ConfigError&) {
        out.push_back("log_level '" + c.log_level + "' is not a known level");
    }
    return out;
}

void validate(const RunConfig& config, const Needs& needs) {
    auto p = problems(config, needs);
    if (!p.empty()) throw ConfigProblems(std::move(p));
}

std::string config_hash(const RunConfig& config) {
    auto j = to_json(config);
    j["paths"].erase("output_dir");  // where results go does not change them
    return hex64(fnv1a64(canonical_dump(j)));
}

fs::path output_path(const RunConfig& config, const fs::path& name) {
    if (name.empty() || name.is_absolute()) throw ConfigError("output name must be relative: '" + name.string() + "'");
    const auto normal = name.lexically_normal();
    if (normal.empty() || *normal.begin() == "..")
        throw ConfigError("output '" + name.string() + "' escapes the output directory");
    return config.paths.output_dir / normal;
}

}  // namespace kgsynth::cli
