#include "proxima/analysis.hpp"

#include "proxima/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace proxima {

double expected_sq_distance(unsigned k)
{
    const double kd = k;
    return 2.0 * kd / 3.0 + 2.0 * kd * kd;
}

double distance_upper_bound(unsigned k)
{
    return std::sqrt(expected_sq_distance(k));
}

void CalibrationParams::validate() const
{
    if (k_max == 0) throw std::invalid_argument("calibration: k_max must be >= 1");
    if (samples == 0) throw std::invalid_argument("calibration: samples must be >= 1");
    if (!(percentile > 0.0 && percentile < 100.0)) throw std::invalid_argument("calibration: percentile must be in (0,100)");
    if (!(margin >= 1.0)) throw std::invalid_argument("calibration: margin must be >= 1");
    if (txs_per_block < k_max) throw std::invalid_argument("calibration: block smaller than k_max");
}

double percentile(std::vector<double> values, double p)
{
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile: p must be in [0,100]");
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

std::vector<double> calibration_distances(const CalibrationParams& params)
{
    return kernels::calibration_distances(params, kernels::Exec::Parallel);
}

DistanceThreshold calibrate_threshold(const CalibrationParams& params)
{
    params.validate();
    const auto d = calibration_distances(params);
    return DistanceThreshold(percentile(d, params.percentile) * params.margin);
}

double liveness_failure_bound(const LivenessInputs& inputs)
{
    const double p = inputs.exclusion_probability();
    if (!(p >= 0.0)) throw std::invalid_argument("liveness: exclusion probability must be >= 0");
    if (!(p < 1.0 / 3.0)) throw std::invalid_argument("liveness: exclusion probability must be < 1/3");
    const double t = 1.0 / 3.0 - p;
    return std::exp(-2.0 * static_cast<double>(inputs.n_validators) * t * t);
}

double collision_probability(double tau, double radius_scale)
{
    if (tau < 0.0) throw std::invalid_argument("collision_probability: tau must be >= 0");
    if (!(radius_scale > 0.0)) throw std::invalid_argument("collision_probability: radius scale must be > 0");
    const double ball = std::pow(std::numbers::pi, 4) / 24.0;
    return std::min(1.0, ball * std::pow(tau / radius_scale, 8));
}

double committee_failure_prob(unsigned group_size, double byz_frac)
{
    if (group_size == 0) throw std::invalid_argument("committee_failure_prob: group size must be >= 1");
    if (!(byz_frac >= 0.0 && byz_frac <= 1.0)) throw std::invalid_argument("committee_failure_prob: fraction out of range");
    const unsigned limit = group_size / 3;
    if (byz_frac == 0.0) return 0.0;
    if (byz_frac == 1.0) return 1.0;

    // pmf(k+1) = pmf(k) * (n-k)/(k+1) * p/(1-p)
    const double ratio = byz_frac / (1.0 - byz_frac);
    double pmf = std::pow(1.0 - byz_frac, group_size);
    double tail = 0.0;
    for (unsigned k = 0; k <= group_size; ++k) {
        if (k > limit) tail += pmf;
        pmf *= static_cast<double>(group_size - k) / static_cast<double>(k + 1) * ratio;
    }
    return std::min(1.0, tail);
}

double fast_path_probability(double p_miss, unsigned n_honest)
{
    if (!(p_miss >= 0.0 && p_miss <= 1.0)) throw std::invalid_argument("fast_path_probability: p_miss out of range");
    return std::pow(1.0 - p_miss, n_honest);
}

Transaction random_transaction(Rng& rng)
{
    return make_transaction(random_bytes(rng, 32));
}

std::vector<Transaction> random_transactions(Rng& rng, std::size_t n)
{
    std::vector<Transaction> txs;
    txs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) txs.push_back(random_transaction(rng));
    return txs;
}

SearchResult adversarial_search(const Digest& target, double tau, unsigned set_size,
                                std::uint64_t budget, std::uint64_t seed)
{
    SearchResult result;
    Rng rng(seed);
    for (std::uint64_t t = 0; t < budget; ++t) {
        auto candidate = random_transactions(rng, set_size);
        ++result.trials;
        if (distance(digest_of(candidate), target) <= tau) {
            result.found = std::move(candidate);
            break;
        }
    }
    return result;
}

Digest fabricated_digest(Rng& rng, unsigned txs_per_block, double radius_scale)
{
    const double centre = txs_per_block / 2.0;
    const auto lo = static_cast<std::int64_t>(std::llround((centre - radius_scale / 2.0) * kQuantum));
    const auto span = static_cast<std::int64_t>(std::llround(radius_scale * kQuantum));
    std::uniform_int_distribution<std::int64_t> dist(0, span - 1);
    Digest d;
    for (std::size_t i = 0; i < kDims; ++i) d[i] = static_cast<double>(lo + dist(rng)) / kQuantum;
    return d;
}

} // namespace proxima
