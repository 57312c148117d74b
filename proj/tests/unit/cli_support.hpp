// SPDX-License-Identifier: Apache-2.0
// Helpers for driving the jumpsde binary from tests.
#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace jumpsde::test {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jumpsde_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Runs `<cli> <args>` through the shell, capturing both streams.
inline CliRun run_cli(const std::string& cli, const std::string& args, const std::string& env = "") {
    const fs::path dir = scratch_dir("capture");
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + cli + "' " + args + " > '" +
                            (dir / "out").string() + "' 2> '" + (dir / "err").string() + "'";
    const int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.out = slurp(dir / "out");
    run.err = slurp(dir / "err");
    fs::remove_all(dir);
    return run;
}

struct GoldenCase {
    std::string name;
    std::string args;  // with {configs} substituted
};

inline std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<GoldenCase> golden_cases(const fs::path& golden_dir, const fs::path& config_dir) {
    std::vector<GoldenCase> out;
    std::ifstream in(golden_dir / "manifest.txt");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto bar = line.find('|');
        GoldenCase c{strip(line.substr(0, bar)), strip(line.substr(bar + 1))};
        for (std::size_t p; (p = c.args.find("{configs}")) != std::string::npos;) {
            c.args.replace(p, 9, config_dir.string());
        }
        out.push_back(c);
    }
    return out;
}

/// Names of files that differ between the two directories (either side).
inline std::vector<std::string> differing_files(const fs::path& a, const fs::path& b) {
    std::vector<std::string> names;
    for (const auto& dir : {a, b}) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            names.push_back(entry.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::vector<std::string> bad;
    for (const auto& n : names) {
        if (!fs::exists(a / n) || !fs::exists(b / n) || slurp(a / n) != slurp(b / n)) {
            bad.push_back(n);
        }
    }
    return bad;
}

}  // namespace jumpsde::test
