#include "proxima/crossshard.hpp"

#include "proxima/bloom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxima {

void ShardPairScenario::validate() const
{
    if (!(propagation_rate >= 0.0 && propagation_rate <= 1.0)) {
        throw std::invalid_argument("scenario: propagation_rate must be in [0,1]");
    }
}

CoordinationCost twopc_cost(const ShardPairScenario& s, const CrossShardBytes& b)
{
    s.validate();
    const std::uint64_t n = s.n_cross_tx;
    const std::uint64_t N = s.validators_per_shard;
    CoordinationCost c;
    c.cross_shard_messages = 4 * n;
    c.messages = n * (4 + 4 * N);
    c.bandwidth_bytes = c.cross_shard_messages * b.twopc_cross + (c.messages - c.cross_shard_messages) * b.twopc_intra;
    return c;
}

CoordinationCost receipt_cost(const ShardPairScenario& s, const CrossShardBytes& b)
{
    s.validate();
    CoordinationCost c;
    c.cross_shard_messages = s.n_cross_tx;
    c.messages = s.n_cross_tx * (1 + s.validators_per_shard);
    c.bandwidth_bytes = c.messages * b.receipt;
    return c;
}

std::uint64_t digest_conflicts(const ShardPairScenario& s)
{
    s.validate();
    return static_cast<std::uint64_t>(std::llround((1.0 - s.propagation_rate) * static_cast<double>(s.n_cross_tx)));
}

CoordinationCost digest_cost(const ShardPairScenario& s, const CrossShardBytes& b)
{
    const std::uint64_t conflicts = digest_conflicts(s);
    CoordinationCost c;
    c.messages = 2 + conflicts * (1 + s.validators_per_shard);
    c.cross_shard_messages = 2 + conflicts;
    c.bandwidth_bytes = 2 * b.digest;
    if (conflicts > 0) c.bandwidth_bytes += 2 * b.bloom + conflicts * (1 + s.validators_per_shard) * b.resolution;
    return c;
}

const char* model_name(CoordinationModel m)
{
    switch (m) {
    case CoordinationModel::TwoPhaseCommit: return "2pc";
    case CoordinationModel::Receipt: return "receipt";
    case CoordinationModel::Digest: return "digest";
    }
    return "unknown";
}

CoordinationCost multi_shard_cost(std::size_t shards, std::uint64_t per_pair_tx, std::uint64_t validators,
                                  double rate, CoordinationModel model, const CrossShardBytes& b)
{
    if (shards < 2) throw std::invalid_argument("multi_shard_cost: need at least 2 shards");
    const ShardPairScenario s{per_pair_tx, validators, rate, 0};
    CoordinationCost pair;
    switch (model) {
    case CoordinationModel::TwoPhaseCommit: pair = twopc_cost(s, b); break;
    case CoordinationModel::Receipt: pair = receipt_cost(s, b); break;
    case CoordinationModel::Digest: pair = digest_cost(s, b); break;
    }
    // A ring of S shards has S adjacent pairs.
    CoordinationCost c;
    c.messages = pair.messages * shards;
    c.bandwidth_bytes = pair.bandwidth_bytes * shards;
    c.cross_shard_messages = pair.cross_shard_messages * shards;
    return c;
}

CoordinationCost global_digest_cost(std::size_t shards, std::uint64_t per_pair_tx, std::uint64_t validators,
                                    double rate, const CrossShardBytes& b)
{
    if (shards < 2) throw std::invalid_argument("global_digest_cost: need at least 2 shards");
    const ShardPairScenario s{per_pair_tx, validators, rate, 0};
    const std::uint64_t conflicts = digest_conflicts(s) * shards;
    CoordinationCost c;
    c.messages = 2 + conflicts * (1 + validators);
    c.cross_shard_messages = 2 + conflicts;
    c.bandwidth_bytes = 2 * b.digest;
    if (conflicts > 0) c.bandwidth_bytes += 2 * b.bloom + conflicts * (1 + validators) * b.resolution;
    return c;
}

PairSimulation simulate_pair(std::span<const Transaction> shard_a, std::span<const Transaction> shard_b,
                             double bloom_fp, const CrossShardBytes& b)
{
    PairSimulation out;
    const Digest da = digest_of(shard_a);
    const Digest db = digest_of(shard_b);
    out.distance = distance(da, db);
    out.cost.messages = 2;
    out.cost.cross_shard_messages = 2;
    out.cost.bandwidth_bytes = 2 * b.digest;
    if (out.distance == 0.0) return out;

    auto ids_of = [](std::span<const Transaction> txs) {
        std::vector<Hash256> ids;
        ids.reserve(txs.size());
        for (const auto& tx : txs) ids.push_back(tx.id);
        return ids;
    };
    auto filter_of = [&](std::span<const Transaction> txs) {
        const auto ids = ids_of(txs);
        if (ids.empty()) return BloomFilter::empty(1, bloom_fp);
        return BloomFilter::build(std::span<const Hash256>(ids), bloom_fp);
    };
    const BloomFilter fa = filter_of(shard_a);
    const BloomFilter fb = filter_of(shard_b);
    out.cost.messages += 2;
    out.cost.cross_shard_messages += 2;
    out.cost.bandwidth_bytes += fa.encode().size() + fb.encode().size();

    // a-only candidates are a's items missing from b's filter, and vice versa.
    const auto only_a = missing_from(fb, shard_a);
    const auto only_b = missing_from(fa, shard_b);
    std::vector<bool> flag_a(shard_a.size(), false);
    std::vector<bool> flag_b(shard_b.size(), false);
    DigestAccumulator gap;
    for (const auto& tx : shard_a) gap.add(tx.vector);
    for (auto i : only_a) {
        flag_a[i] = true;
        gap.remove(shard_a[i].vector);
        out.bloom_candidates.push_back(shard_a[i].id);
    }
    DigestAccumulator rest_b;
    for (const auto& tx : shard_b) rest_b.add(tx.vector);
    for (auto i : only_b) {
        flag_b[i] = true;
        rest_b.remove(shard_b[i].vector);
        out.bloom_candidates.push_back(shard_b[i].id);
    }
    out.divergent = out.bloom_candidates;

    std::vector<Transaction> pool_a;
    std::vector<Transaction> pool_b;
    for (std::size_t i = 0; i < shard_a.size(); ++i) {
        if (!flag_a[i]) pool_a.push_back(shard_a[i]);
    }
    for (std::size_t i = 0; i < shard_b.size(); ++i) {
        if (!flag_b[i]) pool_b.push_back(shard_b[i]);
    }
    // Common items cancel, leaving (a-only hidden by b's filter) - (b-only hidden by a's).
    const Digest residual = gap.digest() - rest_b.digest();
    if (auto m = resolve_residual(residual, pool_a, pool_b, 3)) {
        for (auto p : m->positive) out.divergent.push_back(pool_a[p].id);
        for (auto q : m->negative) out.divergent.push_back(pool_b[q].id);
    }

    std::sort(out.bloom_candidates.begin(), out.bloom_candidates.end());
    std::sort(out.divergent.begin(), out.divergent.end());
    out.divergent.erase(std::unique(out.divergent.begin(), out.divergent.end()), out.divergent.end());
    return out;
}

} // namespace proxima
