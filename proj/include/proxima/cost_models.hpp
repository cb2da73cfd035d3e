#pragma once

#include <cstdint>
#include <string>

namespace proxima {

struct LatencyConstants {
    double aggregate_add_ms = 0.05;
    double aggregate_verify_ms = 1.5;
    double rtt_local_ms = 1.0;
    double rtt_regional_ms = 80.0;
    double rtt_global_ms = 200.0;
    /// Accounting overhead added to the tree's network term in projections.
    double tree_overhead_ms = 10.0;

    void validate() const;
};

enum class Protocol { HotStuff, Flat, Tree };

const char* protocol_name(Protocol p);

/// 2 N^2
std::uint64_t pbft_messages(std::uint64_t n);

/// 6N + 2 p_miss (1 - byz) N: three broadcast+vote rounds plus a
/// request/response pair for every honest validator with an incomplete view.
std::uint64_t hotstuff_messages(std::uint64_t n, double byz_frac, double p_miss);

/// hotstuff: 4 global RTTs; flat: 3 global RTTs;
/// tree: 2 (local + (L-2) regional + global). Tree requires L >= 2.
double network_latency(Protocol p, std::size_t levels, const LatencyConstants& c = {});

/// Critical-path BLS time.
///   flat:     honest adds / cores + one verify
///   hotstuff: 3 rounds of (N adds / cores + one verify)
///   tree:     leaf (honest-in-leaf adds + verify) + (L-1) (B adds + verify);
///             each node aggregates at most B signatures, so cores do not help
double bls_latency(Protocol p, std::uint64_t n, double byz_frac, unsigned branching, unsigned cores,
                   const LatencyConstants& c = {});

/// The formula bls_latency evaluates, as text.
std::string bls_formula(Protocol p);

struct LatencyProjection {
    double bls_ms = 0.0;
    double network_ms = 0.0;
    double total_ms = 0.0;
    unsigned cores = 1;
    std::string formula;
};

/// bls_latency + network_latency (+ tree overhead for the tree).
LatencyProjection finality_projection(Protocol p, std::uint64_t n, double byz_frac, unsigned branching,
                                      unsigned cores, const LatencyConstants& c = {});

} // namespace proxima
