#include "proxima/analysis.hpp"
#include "proxima/flat.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace proxima;

namespace {

SimConfig config(std::size_t n, double byz, double p_miss, std::uint64_t seed)
{
    SimConfig c;
    c.n_validators = n;
    c.byz_fraction = byz;
    c.p_miss = p_miss;
    c.seed = seed;
    return c;
}

const DistanceThreshold tau{kDefaultTau};

} // namespace

TEST_CASE("complete views and no Byzantine take the fast path")
{
    World w(config(100, 0.0, 0.0, 1));
    const auto r = run_round(w, tau);
    CHECK(r.finality == FinalityKind::FastPath);
    CHECK(r.cluster.included.size() == 100);
    CHECK(r.cluster.variance <= kFastPathEpsilon);
    CHECK(r.commits == 0);
    CHECK(r.metrics.messages == 200);
    CHECK(r.metrics.by_kind(MessageKind::Phase1Digest).messages == 100);
    CHECK(r.metrics.by_kind(MessageKind::ClusterAssign).messages == 100);
    CHECK(r.metrics.consistent());
}

TEST_CASE("fabricated digests are excluded and honest validators kept")
{
    auto c = config(1000, 0.3, 0.37, 2);
    c.pinned_behavior = Behavior::FabricateDigest;
    World w(c);
    const auto r = run_round(w, tau);
    CHECK(r.metrics.excluded_honest == 0);
    CHECK(r.metrics.excluded_byz == 300);
    CHECK(r.cluster.included.size() == 700);
    REQUIRE(r.finality == FinalityKind::Certificate);
    CHECK(r.certificate->block_hash == r.block_hash);
    CHECK(r.commits == 700);
    CHECK(r.certificate->signers.count() == 700);
    for (std::size_t i = 0; i < 300; ++i) CHECK_FALSE(r.certificate->signers.test(i));
}

TEST_CASE("validators missing one transaction are included and synced")
{
    // Every validator misses exactly one transaction.
    auto c = config(20, 0.0, 1.0, 3);
    c.max_missing = 1;
    World s(c);
    s.begin_height();
    const auto cluster = run_phase1(s, tau);
    CHECK(cluster.included.size() == 20);
    CHECK(cluster.push_messages == 20);
    CHECK(cluster.pushed_tx_count == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(cluster.distances[i] > 0.0);
        CHECK(cluster.distances[i] < kDefaultTau);
        CHECK(s.validator(i).complete());
        CHECK(s.view_digest(i) == s.reference_digest());
    }
    CHECK_FALSE(cluster.fast_path);
}

TEST_CASE("phase 2 quorum boundary")
{
    SUBCASE("70 honest sign")
    {
        // Missing transactions keep the round off the fast path.
        auto c = config(100, 0.3, 0.37, 4);
        c.pinned_behavior = Behavior::WithholdSignature;
        World w(c);
        const auto r = run_round(w, tau);
        REQUIRE(r.certificate);
        CHECK(r.certificate->signers.count() == 70);
        CHECK(w.oracle().verify_aggregate(*r.certificate, w.publics(), ByteView(r.block_hash)));
    }
    SUBCASE("35 percent withhold")
    {
        auto c = config(100, 0.35, 0.37, 4);
        c.pinned_behavior = Behavior::WithholdSignature;
        World w(c);
        const auto r = run_round(w, tau);
        CHECK_FALSE(r.finalized());
        CHECK_FALSE(r.certificate);
        CHECK(r.certificates.empty());
    }
    SUBCASE("replaced transaction commitments are discarded")
    {
        auto c = config(100, 0.3, 0.0, 5);
        c.pinned_behavior = Behavior::ReplaceOneTx;
        World w(c);
        const auto r = run_round(w, tau);
        // Inside the cluster, but they sign their own variant.
        CHECK(r.cluster.included.size() == 100);
        REQUIRE(r.certificate);
        CHECK(r.certificate->block_hash == r.block_hash);
        CHECK(r.certificate->signers.count() == 70);
        CHECK(r.commits == 100);
        CHECK(r.certificates.size() == 1);
    }
}

TEST_CASE("forced inclusion of Byzantine validators never certifies a wrong hash")
{
    for (double byz : {0.1, 0.2, 0.3}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            World w(config(60, byz, 0.37, seed));
            const auto r = run_round(w, tau, RoundOptions{true});
            for (const auto& qc : r.certificates) CHECK(qc.block_hash == r.block_hash);
            if (r.certificate) CHECK(r.certificate->block_hash == w.block().hash);
        }
    }
}

TEST_CASE("a large run finalizes with about 700 commits")
{
    auto c = config(1000, 0.3, 0.37, 6);
    c.pinned_behavior = Behavior::FabricateDigest;
    World w(c);
    const auto r = run_round(w, tau);
    CHECK(r.finalized());
    CHECK(r.commits >= 650);
    CHECK(r.commits <= 760);
}

TEST_CASE("messages are non-increasing in the Byzantine fraction")
{
    std::uint64_t previous = UINT64_MAX;
    for (double byz : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        auto c = config(200, byz, 0.37, 7);
        c.pinned_behavior = Behavior::FabricateDigest;
        World w(c);
        const auto s = run_many(w, 20, tau);
        CHECK(s.mean_messages <= static_cast<double>(previous));
        previous = static_cast<std::uint64_t>(s.mean_messages);
    }
}

TEST_CASE("reputation separates fabricators from honest stragglers")
{
    auto c = config(100, 0.3, 0.2, 8);
    c.pinned_behavior = Behavior::FabricateDigest;
    World w(c);
    const auto s = run_many(w, 1000, tau);
    const double honest = s.reputation.group_mean(30, 100);
    const double byz = s.reputation.group_mean(0, 30);
    CHECK(honest >= 0.2);
    CHECK(honest <= 0.8);
    CHECK(byz > 5.0);
    CHECK(s.reputation.samples(0) == 1000);
    CHECK(s.success_rate() == 1.0);
}

TEST_CASE("run_many statistics")
{
    World w(config(10, 0.0, 0.0, 9));
    const auto s = run_many(w, 50, tau);
    CHECK(s.fast_path_rate() == 1.0);
    CHECK(s.success_rate() == 1.0);
    CHECK(s.conflicting_heights == 0);
    CHECK_THROWS_AS(run_many(w, 0, tau), std::invalid_argument);

    World f(config(10, 0.0, 0.05, 10));
    const auto fs = run_many(f, 2000, tau);
    CHECK(std::abs(fs.fast_path_rate() - fast_path_probability(0.05, 10)) <= 0.05);
}

TEST_CASE("a suppressing aggregator costs a view change")
{
    auto c = config(10, 0.1, 0.0, 11);
    c.pinned_behavior = Behavior::SuppressAsAggregator;
    World w(c);
    // Height 1 has aggregator 0, which suppresses.
    const auto r = run_round(w, tau);
    CHECK(r.metrics.view_changes == 1);
    CHECK(r.metrics.by_kind(MessageKind::ViewChange).messages == 10);
    CHECK(r.metrics.by_kind(MessageKind::Phase1Digest).messages == 20);
    CHECK(r.finalized());
}

TEST_CASE("reputation table")
{
    ReputationTable t(3);
    t.record(0, 1.0);
    t.record(0, 3.0);
    CHECK(t.mean(0) == 2.0);
    CHECK(t.mean(1) == 0.0);
    CHECK(t.group_mean(0, 2) == 1.0);
    CHECK_THROWS_AS(t.record(3, 1.0), std::out_of_range);
}
