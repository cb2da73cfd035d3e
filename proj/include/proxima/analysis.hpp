#pragma once

#include "proxima/digest.hpp"
#include "proxima/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace proxima {

/// E||S||^2 for the sum S of k independent uniform [0,1)^8 vectors: 2k/3 + 2k^2.
double expected_sq_distance(unsigned k);
/// Jensen bound on E||S||: sqrt(expected_sq_distance(k)).
double distance_upper_bound(unsigned k);

/// How many transactions each calibration sample drops.
enum class MissingMix {
    WorstCase,   // every sample misses exactly k_max
    UniformMix,  // uniform on {1..k_max}
};

struct CalibrationParams {
    unsigned k_max = 2;
    unsigned samples = 2000;
    double percentile = 99.0;
    double margin = 1.2;
    std::uint64_t seed = 0;
    unsigned txs_per_block = 20;
    MissingMix mix = MissingMix::WorstCase;

    void validate() const;
};

/// Linear-interpolated percentile (p in [0,100]) of an unsorted sample.
double percentile(std::vector<double> values, double p);

/// Distance-to-full-digest samples for honest stragglers.
std::vector<double> calibration_distances(const CalibrationParams& params);
DistanceThreshold calibrate_threshold(const CalibrationParams& params);

struct LivenessInputs {
    std::uint64_t n_validators = 100;
    double p_conditional = 0.005;
    double p_miss = 0.37;
    std::optional<double> p_exclude;  // derived as p_conditional * p_miss when unset

    double exclusion_probability() const { return p_exclude.value_or(p_conditional * p_miss); }
};

/// Hoeffding bound exp(-2N(1/3 - p)^2) on Pr[X >= N/3 honest excluded].
double liveness_failure_bound(const LivenessInputs& inputs);

/// min(1, (pi^4/24) (tau/R)^8): volume of the 8-ball of radius tau over a cube of side R.
double collision_probability(double tau, double radius_scale);

/// Pr[Bin(group_size, byz_frac) > floor(group_size/3)], exact summation.
double committee_failure_prob(unsigned group_size, double byz_frac);

/// (1 - p_miss)^n_honest
double fast_path_probability(double p_miss, unsigned n_honest);

struct SearchResult {
    std::optional<std::vector<Transaction>> found;
    std::uint64_t trials = 0;
};

/// Random search for `set_size` fresh transactions whose digest lands within
/// tau of `target`. Stops at the first hit or after `budget` candidates.
SearchResult adversarial_search(const Digest& target, double tau, unsigned set_size,
                                std::uint64_t budget, std::uint64_t seed);

/// A fabricated Byzantine digest: uniform over the cube of side `radius_scale`
/// centred on the expected digest of a `txs_per_block` block, on the tick grid.
Digest fabricated_digest(Rng& rng, unsigned txs_per_block, double radius_scale);

inline constexpr double kDefaultRadiusScale = 14.0;

/// Transaction with a 32-byte random payload.
Transaction random_transaction(Rng& rng);
std::vector<Transaction> random_transactions(Rng& rng, std::size_t n);

} // namespace proxima
