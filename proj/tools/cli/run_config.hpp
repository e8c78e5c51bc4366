#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/icd.hpp"
#include "kgsynth/common/io.hpp"
#include "kgsynth/eval/classifier.hpp"
#include "kgsynth/gateway/config.hpp"

namespace kgsynth::cli {

struct PathsSection {
    fs::path graph;
    fs::path corpus;
    fs::path templates;
    fs::path output_dir;
};

struct BackendSection {
    std::string kind = "mock";   // mock | http
    std::string mock = "echo";   // echo | reverse | table
    std::map<std::string, std::string> table;
    std::optional<std::string> default_response;
    std::size_t parallelism = 1;
    gateway::BackendConfig config;
};

struct TaskSection {
    std::size_t total = 0;
    std::map<IcdCategory, std::size_t> exceptions;
    bool baseline = false;
};

struct EvalSection {
    std::vector<std::size_t> k{1, 3, 5};
    std::size_t n_runs = 3;
    std::size_t n_models = 5;
    std::size_t quorum = 2;
    eval::TrainingParams params;
};

struct RunConfig {
    PathsSection paths;
    BackendSection backend;
    TaskSection task;
    EvalSection eval;
    std::optional<std::uint64_t> seed;
    std::string log_level = "warn";
};

/// What a subcommand reads, so validation can check it up front.
struct Needs {
    bool graph = false;
    bool corpus = false;
    bool templates = false;
    bool seed = false;
    bool backend = false;
    bool total = false;
};

/// Raised with every validation problem at once.
class ConfigProblems : public ConfigError {
public:
    explicit ConfigProblems(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Relative paths are taken relative to `base_dir`. Throws ConfigError on a
/// wrongly typed field.
RunConfig run_config_from_json(const json& j, const fs::path& base_dir);
RunConfig load_run_config(const fs::path& path);
json to_json(const RunConfig& config);

/// Every problem with the config for a command with the given needs.
std::vector<std::string> problems(const RunConfig& config, const Needs& needs);
void validate(const RunConfig& config, const Needs& needs);

/// fnv1a-64 of the canonical JSON of the effective config, in hex. The
/// output directory is left out.
std::string config_hash(const RunConfig& config);

/// `name` resolved inside the output directory. Throws ConfigError for
/// absolute names or names that climb out of it.
fs::path output_path(const RunConfig& config, const fs::path& name);

}  // namespace kgsynth::cli
