#include "proxima/cost_models.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace proxima;

TEST_CASE("message baselines")
{
    CHECK(pbft_messages(1000) == 2000000ULL);
    CHECK(pbft_messages(10000) == 200000000ULL);
    CHECK(pbft_messages(100000) == 20000000000ULL);
    CHECK(hotstuff_messages(1000, 0.3, 0.37) == 6518);
    CHECK(hotstuff_messages(10000, 0.3, 0.37) == 65180);
    CHECK(hotstuff_messages(100000, 0.3, 0.37) == 651800);
    CHECK(hotstuff_messages(100, 0.0, 0.0) == 600);
    CHECK_THROWS_AS(pbft_messages(0), std::invalid_argument);
    CHECK_THROWS_AS(hotstuff_messages(0, 0.3, 0.37), std::invalid_argument);
}

TEST_CASE("network terms")
{
    CHECK(network_latency(Protocol::HotStuff, 0) == 800.0);
    CHECK(network_latency(Protocol::Flat, 0) == 600.0);
    CHECK(network_latency(Protocol::Tree, 5) == 882.0);
    CHECK(network_latency(Protocol::Tree, 2) == 402.0);
    CHECK_THROWS_AS(network_latency(Protocol::Tree, 1), std::invalid_argument);
}

TEST_CASE("BLS terms at 100K validators")
{
    const double tree = bls_latency(Protocol::Tree, 100000, 0.3, 10, 1);
    const double flat = bls_latency(Protocol::Flat, 100000, 0.3, 10, 1);
    const double hs = bls_latency(Protocol::HotStuff, 100000, 0.3, 10, 1);
    // leaf 10*0.7*0.05 + 1.5, then 4 levels of 10*0.05 + 1.5
    CHECK(tree == doctest::Approx(0.35 + 1.5 + 4 * 2.0));
    CHECK(flat == doctest::Approx(70000 * 0.05 + 1.5));
    CHECK(hs == doctest::Approx(3 * (100000 * 0.05 + 1.5)));
    CHECK(std::abs(tree - 9.9) / 9.9 <= 0.25);
    CHECK(std::abs(flat - 3960) / 3960 <= 0.25);
    CHECK(std::abs(hs - 17595) / 17595 <= 0.25);
    CHECK(std::abs(bls_latency(Protocol::HotStuff, 100000, 0.3, 10, 16) - 940) / 940 <= 0.25);
    // Cores do not help the tree: each node aggregates at most B signatures.
    CHECK(bls_latency(Protocol::Tree, 100000, 0.3, 10, 16) == tree);
    CHECK_THROWS_AS(bls_latency(Protocol::Flat, 100, 0.0, 10, 0), std::invalid_argument);
}

TEST_CASE("BLS ordering tree <= flat <= hotstuff")
{
    for (unsigned cores : {1u, 16u}) {
        for (std::uint64_t n : {10000ULL, 100000ULL}) {
            const double tree = bls_latency(Protocol::Tree, n, 0.3, 10, cores);
            const double flat = bls_latency(Protocol::Flat, n, 0.3, 10, cores);
            const double hs = bls_latency(Protocol::HotStuff, n, 0.3, 10, cores);
            CHECK(tree <= flat);
            CHECK(flat <= hs);
        }
    }
}

TEST_CASE("finality projection")
{
    const auto tree = finality_projection(Protocol::Tree, 100000, 0.3, 10, 1);
    CHECK(tree.network_ms == 892.0);
    CHECK(tree.total_ms == doctest::Approx(tree.bls_ms + tree.network_ms));
    CHECK(tree.formula == bls_formula(Protocol::Tree));
    const auto hs = finality_projection(Protocol::HotStuff, 100000, 0.3, 10, 16);
    CHECK(hs.network_ms == 800.0);
    CHECK(hs.cores == 16);

    LatencyConstants bad;
    bad.rtt_global_ms = 0;
    CHECK_THROWS_AS(finality_projection(Protocol::Flat, 100, 0.0, 10, 1, bad), std::invalid_argument);
    CHECK(std::string(protocol_name(Protocol::Tree)) == "proxima_tree");
}
