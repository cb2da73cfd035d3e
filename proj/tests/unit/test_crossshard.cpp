#include "proxima/analysis.hpp"
#include "proxima/crossshard.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace proxima;

TEST_CASE("pair costs at the default operating point")
{
    const ShardPairScenario s;
    const auto twopc = twopc_cost(s);
    const auto receipt = receipt_cost(s);
    const auto digest = digest_cost(s);
    CHECK(twopc.messages == 404000);
    CHECK(receipt.messages == 101000);
    CHECK(digest.messages == 5052);
    CHECK(twopc.cross_shard_messages == 4000);
    CHECK(receipt.cross_shard_messages == 1000);
    CHECK(digest.cross_shard_messages == 52);
    CHECK(digest_conflicts(s) == 50);
    CHECK(twopc.bandwidth_bytes == 4000 * 64 + 400000 * 96);
    CHECK(receipt.bandwidth_bytes == 101000 * 128);
    CHECK(digest.bandwidth_bytes == 128 + 50 + 50 * 101 * 200);
}

TEST_CASE("full propagation needs only the digest exchange")
{
    ShardPairScenario s;
    s.propagation_rate = 1.0;
    const auto c = digest_cost(s);
    CHECK(c.messages == 2);
    CHECK(c.cross_shard_messages == 2);
    CHECK(c.bandwidth_bytes == 128);
}

TEST_CASE("digest cost is non-increasing in the propagation rate")
{
    ShardPairScenario s;
    std::uint64_t previous = UINT64_MAX;
    for (int r = 0; r <= 100; ++r) {
        s.propagation_rate = r / 100.0;
        const auto c = digest_cost(s);
        CHECK(c.messages <= previous);
        CHECK(c.messages <= receipt_cost(s).messages + 2);
        previous = c.messages;
    }
    s.propagation_rate = 1.5;
    CHECK_THROWS_AS(digest_cost(s), std::invalid_argument);
}

TEST_CASE("ring totals")
{
    // 100 shards in a ring, 100 cross-shard txs per adjacent pair.
    CHECK(multi_shard_cost(100, 100, 100, 0.95, CoordinationModel::TwoPhaseCommit).messages == 4040000);
    CHECK(multi_shard_cost(100, 100, 100, 0.95, CoordinationModel::Receipt).messages == 1010000);
    CHECK(multi_shard_cost(100, 100, 100, 0.95, CoordinationModel::Digest).messages == 50700);
    CHECK(global_digest_cost(100, 100, 100, 0.95).messages == 50502);
    CHECK_THROWS_AS(multi_shard_cost(1, 1000, 100, 0.95, CoordinationModel::Digest), std::invalid_argument);
    CHECK(std::string(model_name(CoordinationModel::Receipt)) == "receipt");
}

TEST_CASE("pair simulation finds exactly the divergent transactions")
{
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const auto common = random_transactions(rng, 40);
        const auto only_a = random_transactions(rng, trial % 3);
        const auto only_b = random_transactions(rng, (trial / 3) % 2);
        auto a = common;
        a.insert(a.end(), only_a.begin(), only_a.end());
        auto b = common;
        b.insert(b.end(), only_b.begin(), only_b.end());
        std::shuffle(b.begin(), b.end(), rng);

        std::vector<Hash256> expected;
        for (const auto& t : only_a) expected.push_back(t.id);
        for (const auto& t : only_b) expected.push_back(t.id);
        std::sort(expected.begin(), expected.end());

        const auto sim = simulate_pair(a, b);
        CHECK(sim.divergent == expected);
        for (const auto& id : sim.bloom_candidates) {
            CHECK(std::binary_search(expected.begin(), expected.end(), id));
        }
        if (expected.empty()) {
            CHECK(sim.distance == 0.0);
            CHECK(sim.cost.messages == 2);
        } else {
            CHECK(sim.distance > 0.0);
            CHECK(sim.cost.messages == 4);
        }
    }
}
