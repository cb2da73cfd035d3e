#pragma once

#include "proxima/flat.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace proxima {

/// Overrides shared by every subcommand. Unset fields fall back to each
/// experiment's own defaults.
struct ExperimentOptions {
    std::optional<std::size_t> n;
    std::optional<double> byz;
    std::optional<double> p_miss;
    std::uint64_t seed = 0;
    std::optional<std::size_t> seeds;
    std::optional<std::uint64_t> rounds;
    unsigned branching = 10;
    std::optional<double> tau;
    double margin = 1.2;
    unsigned samples = 2000;

    void validate() const;
};

struct CommandOutput {
    std::string text;
    std::vector<std::string> warnings;
};

CommandOutput cmd_calibrate(const ExperimentOptions& o);
CommandOutput cmd_moments(const ExperimentOptions& o);
CommandOutput cmd_collision(const ExperimentOptions& o);
CommandOutput cmd_messages_table(const ExperimentOptions& o);
CommandOutput cmd_byzantine_sweep(const ExperimentOptions& o);
CommandOutput cmd_committees(const ExperimentOptions& o);
CommandOutput cmd_crossshard(const ExperimentOptions& o);
CommandOutput cmd_latency(const ExperimentOptions& o);
CommandOutput cmd_fastpath(const ExperimentOptions& o);
CommandOutput cmd_demo(const ExperimentOptions& o);

/// Reference values the experiments are compared against.
namespace targets {
inline constexpr std::size_t kTableN[] = {1000, 10000, 100000};
inline constexpr double kTreeMessages[] = {2990, 30042, 300245};
inline constexpr double kFlatMessages[] = {3348, 33600, 335803};
inline constexpr double kHotStuffMessages[] = {6518, 65180, 651800};
inline constexpr double kMessageTolerance = 0.10;
} // namespace targets

std::string format_double(double v);

/// One round of each protocol at the messages-table operating point: every
/// Byzantine validator fabricates its digest.
RoundResult simulate_flat_round(std::size_t n, double byz, double p_miss, std::uint64_t seed);
RoundResult simulate_tree_round(std::size_t n, double byz, double p_miss, std::uint64_t seed, unsigned branching);

} // namespace proxima
