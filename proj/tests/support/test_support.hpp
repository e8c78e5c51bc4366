#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>

namespace kgtest {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) { return fs::path(KGSYNTH_FIXTURES) / name; }
inline fs::path templates_dir(const std::string& lang = "en") { return fs::path(KGSYNTH_TEMPLATES) / lang; }
inline fs::path cli_path() { return KGSYNTH_CLI; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "kgsynth") {
        std::random_device rd;
        path_ = fs::temp_directory_path() / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const fs::path& p) {
    std::string s;
    if (FILE* f = std::fopen(p.c_str(), "rb")) {
        std::array<char, 4096> buf{};
        for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), f)) > 0;) s.append(buf.data(), n);
        std::fclose(f);
    }
    return s;
}

/// Runs the CLI with a shell-quoted argument string; stderr goes to a file.
inline Run run_cli(const std::string& args, const fs::path& scratch) {
    const auto err_file = scratch / "stderr.txt";
    const std::string cmd = "'" + cli_path().string() + "' " + args + " 2>'" + err_file.string() + "'";
    Run r;
    if (FILE* p = popen(cmd.c_str(), "r")) {
        std::array<char, 4096> buf{};
        for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
        const int st = pclose(p);
        r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }
    r.err = slurp(err_file);
    return r;
}

}  // namespace kgtest
