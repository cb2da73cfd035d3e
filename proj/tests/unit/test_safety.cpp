#include "proxima/tree.hpp"

#include <doctest.h>

#include <optional>
#include <vector>

using namespace proxima;

namespace {

const DistanceThreshold tau{kDefaultTau};

struct Mix {
    const char* name;
    std::optional<Behavior> pinned;
};

const Mix kMixes[] = {
    {"round-robin", std::nullopt},
    {"fabricate", Behavior::FabricateDigest},
    {"replace", Behavior::ReplaceOneTx},
    {"withhold", Behavior::WithholdSignature},
    {"wrong-hash", Behavior::SignWrongHash},
    {"suppress", Behavior::SuppressAsAggregator},
};

// Largest Byzantine fraction strictly below one third of n.
double max_fraction(std::size_t n)
{
    return static_cast<double>((n - 1) / 3) / static_cast<double>(n);
}

// After the round, the adversary collects every signature it can on the
// alternative block: its own, plus any honest validator that already committed
// this height and is asked again (the signing guard must refuse).
std::vector<QuorumCertificate> adversary_certificates(World& world)
{
    std::vector<CommitRecord> pool;
    const Hash256 alt = world.alternative_block().hash;
    for (std::size_t i = 0; i < world.size(); ++i) {
        const auto& v = world.validator(i);
        if (!v.byzantine() && v.signed_height != world.height()) continue;
        if (auto sig = world.sign_hash(i, alt)) pool.push_back({i, alt, *sig});
    }
    return assemble_certificates(world, pool);
}

struct Tally {
    std::size_t rounds = 0;
    std::size_t conflicts = 0;
    std::size_t wrong_hash = 0;
    std::size_t adversary_wins = 0;
};

void check_round(World& world, const RoundResult& r, Tally& tally)
{
    ++tally.rounds;
    if (r.certificates.size() > 1) ++tally.conflicts;
    for (const auto& qc : r.certificates) {
        if (qc.block_hash != r.block_hash) ++tally.wrong_hash;
    }
    if (r.certificate && r.certificate->block_hash != r.block_hash) ++tally.wrong_hash;
    // A finalized height plus an adversary certificate would be two blocks.
    if (!adversary_certificates(world).empty() && r.finalized()) ++tally.adversary_wins;
}

template <typename RunRound>
Tally run_suite(RunRound&& run_one)
{
    Tally tally;
    const std::size_t sizes[] = {30, 100, 300};
    std::uint64_t seed = 0;
    // 6 mixes x 3 sizes x 56 seeds = 1008 rounds.
    for (const auto& mix : kMixes) {
        for (std::size_t n : sizes) {
            for (int k = 0; k < 56; ++k, ++seed) {
                SimConfig c;
                c.n_validators = n;
                c.byz_fraction = (k % 2 == 0) ? max_fraction(n) : max_fraction(n) * 0.5;
                c.p_miss = 0.37;
                c.seed = seed;
                c.pinned_behavior = mix.pinned;
                World w(c);
                const RoundResult r = run_one(w, seed);
                check_round(w, r, tally);
            }
        }
    }
    return tally;
}

} // namespace

TEST_CASE("flat protocol never certifies two blocks at one height")
{
    const auto t = run_suite([](World& w, std::uint64_t) { return run_round(w, tau); });
    CHECK(t.rounds >= 1000);
    CHECK(t.conflicts == 0);
    CHECK(t.wrong_hash == 0);
    CHECK(t.adversary_wins == 0);
}

TEST_CASE("flat protocol stays safe with Byzantine validators forced into the cluster")
{
    const auto t = run_suite([](World& w, std::uint64_t) { return run_round(w, tau, RoundOptions{true}); });
    CHECK(t.conflicts == 0);
    CHECK(t.wrong_hash == 0);
    CHECK(t.adversary_wins == 0);
}

TEST_CASE("tree protocol never certifies two blocks at one height")
{
    const auto t = run_suite([](World& w, std::uint64_t seed) {
        const unsigned branching = 3 + static_cast<unsigned>(seed % 8);
        const auto topo = build_topology(w.size(), branching, seed);
        return run_tree_round(w, topo, tau);
    });
    CHECK(t.rounds >= 1000);
    CHECK(t.conflicts == 0);
    CHECK(t.wrong_hash == 0);
    CHECK(t.adversary_wins == 0);
}

TEST_CASE("consecutive heights in one world stay safe")
{
    SimConfig c;
    c.n_validators = 100;
    c.byz_fraction = 0.33;
    c.seed = 99;
    World w(c);
    const auto topo = build_topology(100, 10, 5);
    Tally tally;
    for (int h = 0; h < 100; ++h) {
        const auto r = (h % 2 == 0) ? run_round(w, tau) : run_tree_round(w, topo, tau);
        check_round(w, r, tally);
        CHECK(r.finalized());
    }
    CHECK(tally.conflicts == 0);
    CHECK(tally.wrong_hash == 0);
    CHECK(tally.adversary_wins == 0);
}
