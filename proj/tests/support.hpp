#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testing_support {

inline std::filesystem::path source_dir() { return EEGDIST_SOURCE_DIR; }
inline std::string cli_path() { return EEGDIST_CLI_PATH; }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("eegdist_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs the CLI with the given argument string; stdout and stderr are captured together.
inline CommandResult run_cli(const std::string& args) {
    const auto out = std::filesystem::temp_directory_path() / ("eegdist_cli_" + std::to_string(::getpid()) + ".txt");
    const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" + out.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    CommandResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    r.output.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    std::filesystem::remove(out);
    return r;
}

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<double> random_signal(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (auto b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace testing_support
