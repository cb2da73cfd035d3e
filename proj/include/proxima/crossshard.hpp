#pragma once

#include "proxima/digest.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace proxima {

struct ShardPairScenario {
    std::uint64_t n_cross_tx = 1000;
    std::uint64_t validators_per_shard = 100;
    double propagation_rate = 0.95;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-message payload sizes for the coordination models.
struct CrossShardBytes {
    std::size_t twopc_cross = 64;   // prepare/vote/commit/ack between coordinators
    std::size_t twopc_intra = 96;   // signed intra-shard vote or commit
    std::size_t receipt = 128;
    std::size_t digest = 64;
    std::size_t bloom = 25;
    std::size_t resolution = 200;   // per message resolving one divergent tx
};

struct CoordinationCost {
    std::uint64_t messages = 0;
    std::uint64_t bandwidth_bytes = 0;
    std::uint64_t cross_shard_messages = 0;

    friend bool operator==(const CoordinationCost&, const CoordinationCost&) = default;
};

/// messages n(4 + 4N), cross-shard 4n
CoordinationCost twopc_cost(const ShardPairScenario& s, const CrossShardBytes& b = {});
/// messages n(1 + N), cross-shard n
CoordinationCost receipt_cost(const ShardPairScenario& s, const CrossShardBytes& b = {});
/// round((1 - rate) n)
std::uint64_t digest_conflicts(const ShardPairScenario& s);
/// messages 2 + conflicts (1 + N), cross-shard 2 + conflicts
CoordinationCost digest_cost(const ShardPairScenario& s, const CrossShardBytes& b = {});

enum class CoordinationModel { TwoPhaseCommit, Receipt, Digest };

const char* model_name(CoordinationModel m);

/// Per-pair cost summed over the `shards` pairs of a ring.
CoordinationCost multi_shard_cost(std::size_t shards, std::uint64_t per_pair_tx, std::uint64_t validators,
                                  double rate, CoordinationModel model, const CrossShardBytes& b = {});

/// Digest model with one global digest exchange for the whole ring instead of
/// one per pair: 2 + total conflicts (1 + N).
CoordinationCost global_digest_cost(std::size_t shards, std::uint64_t per_pair_tx, std::uint64_t validators,
                                    double rate, const CrossShardBytes& b = {});

struct PairSimulation {
    double distance = 0.0;
    /// Ids flagged by the bloom diff in either direction.
    std::vector<Hash256> bloom_candidates;
    /// Bloom candidates plus members recovered from the exact digest gap.
    std::vector<Hash256> divergent;
    CoordinationCost cost;
};

/// Digest exchange between two shards, then bloom exchange if the digests
/// differ. Ids are sorted.
PairSimulation simulate_pair(std::span<const Transaction> shard_a, std::span<const Transaction> shard_b,
                             double bloom_fp = 0.01, const CrossShardBytes& b = {});

} // namespace proxima
