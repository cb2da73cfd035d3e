#pragma once

#include "proxima/analysis.hpp"

#include <cstdint>
#include <vector>

// Monte Carlo kernels. Every kernel has a serial reference and an OpenMP
// version; trial t always draws from derive_seed(seed, t) and results are
// reduced in trial order, so both produce bit-identical output.
namespace proxima::kernels {

enum class Exec { Serial, Parallel };

struct MomentStats {
    double mean_distance = 0.0;
    double mean_sq_distance = 0.0;
    std::uint64_t trials = 0;
};

/// Distance between a full digest and the same set missing k transactions.
MomentStats distance_moments(unsigned k, std::uint64_t trials, std::uint64_t seed, Exec exec = Exec::Parallel);

/// Distance of a one-transaction swap (one dropped, one fresh added).
MomentStats swap_moments(std::uint64_t trials, std::uint64_t seed, Exec exec = Exec::Parallel);

std::vector<double> calibration_distances(const CalibrationParams& params, Exec exec);

struct RateEstimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double rate() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

/// Fraction of fabricated digests (cube model) within tau of a random block's digest.
RateEstimate fabricated_inside_rate(double tau, double radius_scale, unsigned txs_per_block,
                                    std::uint64_t trials, std::uint64_t seed, Exec exec = Exec::Parallel);

/// Same, but the fabricated digest is the digest of an independent random set
/// of the same size.
RateEstimate random_set_inside_rate(double tau, unsigned txs_per_block, std::uint64_t trials,
                                    std::uint64_t seed, Exec exec = Exec::Parallel);

/// Per-lookup false-positive rate: `filters` random filters of `members` ids,
/// each probed with `lookups` random 32-byte non-members.
RateEstimate bloom_fp_rate(unsigned members, double target_fp, std::uint64_t filters, std::uint64_t lookups,
                           std::uint64_t seed, Exec exec = Exec::Parallel);

/// Inserted ids that query negative over `trials` random filters (must be 0).
std::uint64_t bloom_false_negatives(std::uint64_t trials, std::uint64_t seed, Exec exec = Exec::Parallel);

/// Fraction of validators lacking k of `block_size` txs for whom the bloom
/// diff misses at least one of the k.
RateEstimate per_validator_miss_rate(unsigned k, unsigned block_size, double target_fp, std::uint64_t trials,
                                     std::uint64_t seed, Exec exec = Exec::Parallel);

} // namespace proxima::kernels
