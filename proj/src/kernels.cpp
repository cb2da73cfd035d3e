#include "proxima/kernels.hpp"

#include "proxima/bloom.hpp"
#include "proxima/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace proxima::kernels {

namespace {

// Runs trial(t) for t in [0, trials) into a pre-sized vector.
template <class T, class F>
std::vector<T> run_trials(std::uint64_t trials, Exec exec, F&& trial)
{
    std::vector<T> out(trials);
    auto body = [&](std::int64_t t) { out[static_cast<std::size_t>(t)] = trial(static_cast<std::uint64_t>(t)); };
    if (exec == Exec::Parallel) {
        parallel_for(static_cast<std::int64_t>(trials), body);
    } else {
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) body(t);
    }
    return out;
}

MomentStats reduce_moments(const std::vector<double>& sq)
{
    MomentStats s;
    s.trials = sq.size();
    if (sq.empty()) return s;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : sq) {
        sum += std::sqrt(v);
        sum_sq += v;
    }
    s.mean_distance = sum / static_cast<double>(sq.size());
    s.mean_sq_distance = sum_sq / static_cast<double>(sq.size());
    return s;
}

RateEstimate reduce_hits(const std::vector<std::uint8_t>& hits)
{
    RateEstimate r;
    r.trials = hits.size();
    r.hits = static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), std::uint8_t{1}));
    return r;
}

} // namespace

MomentStats distance_moments(unsigned k, std::uint64_t trials, std::uint64_t seed, Exec exec)
{
    // Common transactions cancel, so only the k missing ones are generated.
    auto sq = run_trials<double>(trials, exec, [&](std::uint64_t t) {
        Rng rng(derive_seed(seed, t));
        DigestAccumulator acc;
        for (unsigned i = 0; i < k; ++i) acc.add(random_transaction(rng).vector);
        return squared_distance(acc.digest(), Digest{});
    });
    return reduce_moments(sq);
}

MomentStats swap_moments(std::uint64_t trials, std::uint64_t seed, Exec exec)
{
    auto sq = run_trials<double>(trials, exec, [&](std::uint64_t t) {
        Rng rng(derive_seed(seed, t));
        const auto dropped = random_transaction(rng);
        const auto added = random_transaction(rng);
        return squared_distance(to_digest(dropped.vector), to_digest(added.vector));
    });
    return reduce_moments(sq);
}

std::vector<double> calibration_distances(const CalibrationParams& params, Exec exec)
{
    params.validate();
    return run_trials<double>(params.samples, exec, [&](std::uint64_t t) {
        Rng rng(derive_seed(params.seed, t));
        const auto block = random_transactions(rng, params.txs_per_block);
        unsigned k = params.k_max;
        if (params.mix == MissingMix::UniformMix) {
            k = std::uniform_int_distribution<unsigned>(1, params.k_max)(rng);
        }
        std::vector<std::size_t> order(block.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);

        DigestAccumulator view;
        for (std::size_t i = k; i < order.size(); ++i) view.add(block[order[i]].vector);
        return distance(digest_of(std::span<const Transaction>(block)), view.digest());
    });
}

RateEstimate fabricated_inside_rate(double tau, double radius_scale, unsigned txs_per_block,
                                    std::uint64_t trials, std::uint64_t seed, Exec exec)
{
    auto hits = run_trials<std::uint8_t>(trials, exec, [&](std::uint64_t t) -> std::uint8_t {
        Rng rng(derive_seed(seed, t));
        const auto block = random_transactions(rng, txs_per_block);
        const Digest fake = fabricated_digest(rng, txs_per_block, radius_scale);
        return distance(fake, digest_of(std::span<const Transaction>(block))) <= tau;
    });
    return reduce_hits(hits);
}

RateEstimate random_set_inside_rate(double tau, unsigned txs_per_block, std::uint64_t trials,
                                    std::uint64_t seed, Exec exec)
{
    auto hits = run_trials<std::uint8_t>(trials, exec, [&](std::uint64_t t) -> std::uint8_t {
        Rng rng(derive_seed(seed, t));
        const auto block = random_transactions(rng, txs_per_block);
        const auto other = random_transactions(rng, txs_per_block);
        return distance(digest_of(std::span<const Transaction>(other)),
                        digest_of(std::span<const Transaction>(block))) <= tau;
    });
    return reduce_hits(hits);
}

RateEstimate bloom_fp_rate(unsigned members, double target_fp, std::uint64_t filters, std::uint64_t lookups,
                           std::uint64_t seed, Exec exec)
{
    auto counts = run_trials<std::uint64_t>(filters, exec, [&](std::uint64_t t) {
        Rng rng(derive_seed(seed, t));
        std::vector<Bytes> ids;
        ids.reserve(members);
        for (unsigned i = 0; i < members; ++i) ids.push_back(random_bytes(rng, 32));
        const auto filter = BloomFilter::build(std::span<const Bytes>(ids), target_fp);
        std::uint64_t fp = 0;
        for (std::uint64_t q = 0; q < lookups; ++q) {
            if (filter.contains(ByteView(random_bytes(rng, 32)))) ++fp;
        }
        return fp;
    });
    RateEstimate r;
    r.trials = filters * lookups;
    r.hits = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    return r;
}

std::uint64_t bloom_false_negatives(std::uint64_t trials, std::uint64_t seed, Exec exec)
{
    auto counts = run_trials<std::uint64_t>(trials, exec, [&](std::uint64_t t) {
        Rng rng(derive_seed(seed, t));
        const auto n = std::uniform_int_distribution<unsigned>(1, 200)(rng);
        std::vector<Bytes> ids;
        ids.reserve(n);
        for (unsigned i = 0; i < n; ++i) ids.push_back(random_bytes(rng, 1 + rng() % 64));
        const auto filter = BloomFilter::build(std::span<const Bytes>(ids), kDefaultBloomFp);
        std::uint64_t missed = 0;
        for (const auto& id : ids) {
            if (!filter.contains(ByteView(id))) ++missed;
        }
        return missed;
    });
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

RateEstimate per_validator_miss_rate(unsigned k, unsigned block_size, double target_fp, std::uint64_t trials,
                                     std::uint64_t seed, Exec exec)
{
    auto hits = run_trials<std::uint8_t>(trials, exec, [&](std::uint64_t t) -> std::uint8_t {
        Rng rng(derive_seed(seed, t));
        const auto block = random_transactions(rng, block_size);
        // The validator holds all but the first k.
        std::vector<Hash256> held;
        for (std::size_t i = k; i < block.size(); ++i) held.push_back(block[i].id);
        const auto filter = BloomFilter::build(std::span<const Hash256>(held), target_fp);
        for (unsigned i = 0; i < k; ++i) {
            if (filter.contains(ByteView(block[i].id))) return 1;
        }
        return 0;
    });
    return reduce_hits(hits);
}

} // namespace proxima::kernels
