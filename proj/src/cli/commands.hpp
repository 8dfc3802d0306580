#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cli/scenario.hpp"
#include "histq/propositions.hpp"

namespace histq::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_property = 3 };

struct Options {
    std::string command;
    std::filesystem::path scenario;
    std::filesystem::path out = "histq-out";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_n;
    std::optional<std::string> series;
};

/// A report document plus the files it is written to.
struct Outcome {
    std::vector<std::pair<std::string, std::string>> files;  // (file name, contents)
    bool passed = true;
};

/// Wright operator over the full grid and the window search it drives.
struct WindowAnalysis {
    WrightOperator wright;
    SearchResult search;
};

[[nodiscard]] WindowAnalysis analyse_windows(const Scenario& s, const DecoherenceState& ds);

[[nodiscard]] Outcome cmd_decohere(const Scenario& s);
[[nodiscard]] Outcome cmd_windows(const Scenario& s);
[[nodiscard]] Outcome cmd_entropy(const Scenario& s);
[[nodiscard]] Outcome cmd_diverge(const Scenario& s, const Options& opts);
[[nodiscard]] Outcome cmd_verify(const Scenario& s, std::uint64_t seed);

/// Loads the scenario, runs the command and writes its files under opts.out.
/// Messages go to `log`; returns an ExitCode.
int run(const Options& opts, std::ostream& log);

/// JSON text with a trailing newline; fixed key order, shortest round-trip doubles.
[[nodiscard]] std::string dump(const nlohmann::ordered_json& doc);

}  // namespace histq::cli
