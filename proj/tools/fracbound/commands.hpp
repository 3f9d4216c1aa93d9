#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fracbound::app {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct Invocation {
    std::string command;
    std::filesystem::path config;
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

const std::vector<std::string>& command_names();

/// Runs one command. Throws ConfigError or IoError for usage problems;
/// returns kExitVerification when a check fails.
int run_command(const Invocation& inv);

/// Parses argv, runs, and maps every failure to an exit status with a
/// message on stderr.
int run(int argc, char** argv);

}  // namespace fracbound::app
