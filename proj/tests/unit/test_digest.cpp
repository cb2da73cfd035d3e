#include "proxima/analysis.hpp"
#include "proxima/digest.hpp"
#include "proxima/hash.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace proxima;

namespace {

// Reference group statistics computed directly over the members.
GroupSummary brute_summary(const std::vector<Digest>& ds)
{
    GroupSummary s;
    for (const auto& d : ds) s.mean += d;
    for (std::size_t i = 0; i < kDims; ++i) s.mean[i] /= static_cast<double>(ds.size());
    for (const auto& d : ds) s.variance += squared_distance(d, s.mean);
    s.variance /= static_cast<double>(ds.size());
    s.count = static_cast<std::uint32_t>(ds.size());
    return s;
}

std::vector<Digest> random_digests(Rng& rng, std::size_t n)
{
    std::vector<Digest> out(n);
    for (auto& d : out) {
        for (std::size_t i = 0; i < kDims; ++i) d[i] = uniform01(rng) * 20.0;
    }
    return out;
}

} // namespace

TEST_CASE("sha primitives match published vectors")
{
    CHECK(to_hex(sha256(as_bytes("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha512(as_bytes("abc"))).substr(0, 32) == "ddaf35a193617abacc417349ae204131");
}

TEST_CASE("tx_to_vector golden value")
{
    // SHA-512("tx-0") split into big-endian u64 segments, each mod 10000.
    const TxVector v = tx_to_vector(as_bytes("tx-0"));
    const TxVector::Ticks expected{251, 1982, 3921, 5905, 5580, 7045, 1784, 4038};
    CHECK(v.ticks() == expected);
    CHECK(v[0] == doctest::Approx(0.0251));
    CHECK(v[7] == doctest::Approx(0.4038));
}

TEST_CASE("tx_to_vector is deterministic, bounded and rejects empty input")
{
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto bytes = random_bytes(rng, 1 + i % 40);
        const auto v = tx_to_vector(bytes);
        CHECK(v == tx_to_vector(bytes));
        for (std::size_t d = 0; d < kDims; ++d) {
            CHECK(v[d] >= 0.0);
            CHECK(v[d] < 1.0);
        }
    }
    CHECK_THROWS_AS(tx_to_vector(ByteView{}), std::invalid_argument);
    CHECK_THROWS_AS(TxVector(TxVector::Ticks{10000, 0, 0, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("digest is additive and order independent")
{
    Rng rng(11);
    const auto txs = random_transactions(rng, 50);
    const Digest all = digest_of(std::span<const Transaction>(txs));

    const Digest left = digest_of(std::span<const Transaction>(txs).first(20));
    const Digest right = digest_of(std::span<const Transaction>(txs).subspan(20));
    for (std::size_t i = 0; i < kDims; ++i) CHECK(std::abs((left + right)[i] - all[i]) < 1e-9);

    auto shuffled = txs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(digest_of(std::span<const Transaction>(shuffled)) == all);

    CHECK(digest_of(std::span<const Transaction>{}) == Digest{});
}

TEST_CASE("accumulator add and remove cancel exactly")
{
    Rng rng(5);
    const auto txs = random_transactions(rng, 30);
    DigestAccumulator acc;
    for (const auto& tx : txs) acc.add(tx.vector);
    for (const auto& tx : txs) acc.remove(tx.vector);
    CHECK(acc.digest() == Digest{});
}

TEST_CASE("distance is a metric on sample points")
{
    Rng rng(8);
    const auto ds = random_digests(rng, 30);
    for (const auto& a : ds) {
        CHECK(distance(a, a) == 0.0);
        for (const auto& b : ds) {
            CHECK(distance(a, b) == doctest::Approx(distance(b, a)));
            for (const auto& c : ds) CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
        }
    }
    Digest unit;
    unit[0] = 3.0;
    unit[1] = 4.0;
    CHECK(distance(Digest{}, unit) == doctest::Approx(5.0));
}

TEST_CASE("weighted mean")
{
    Digest a;
    Digest b;
    a[0] = 1.0;
    b[0] = 4.0;
    const WeightedDigest entries[] = {{a, 2.0}, {b, 1.0}};
    CHECK(weighted_mean(entries)[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(weighted_mean(std::span<const WeightedDigest>{}), std::invalid_argument);
    const WeightedDigest bad[] = {{a, 0.0}};
    CHECK_THROWS_AS(weighted_mean(bad), std::invalid_argument);
}

TEST_CASE("summaries match direct computation")
{
    Rng rng(21);
    const auto ds = random_digests(rng, 40);
    const auto s = summarize(ds);
    const auto ref = brute_summary(ds);
    CHECK(s.count == 40);
    CHECK(s.variance == doctest::Approx(ref.variance).epsilon(1e-12));
    for (std::size_t i = 0; i < kDims; ++i) CHECK(std::abs(s.mean[i] - ref.mean[i]) < 1e-9);

    const std::vector<double> w(3, 1.0);
    CHECK_THROWS_AS(summarize(std::span<const Digest>(ds).first(2), w), std::invalid_argument);
    CHECK_THROWS_AS(summarize(std::span<const Digest>{}), std::invalid_argument);
}

TEST_CASE("hierarchical merge equals the flat summary over random partitions")
{
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + rng() % 200;
        const auto ds = random_digests(rng, n);
        // Random cut points define the groups.
        std::vector<std::size_t> cuts{0, n};
        const std::size_t groups = 1 + rng() % std::min<std::size_t>(n, 12);
        while (cuts.size() < groups + 1) {
            const std::size_t c = 1 + rng() % (n - 1);
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<GroupSummary> parts;
        for (std::size_t g = 0; g + 1 < cuts.size(); ++g) {
            parts.push_back(summarize(std::span<const Digest>(ds).subspan(cuts[g], cuts[g + 1] - cuts[g])));
        }
        const auto merged = merge_summaries(parts);
        const auto flat = brute_summary(ds);
        REQUIRE(merged.count == n);
        for (std::size_t i = 0; i < kDims; ++i) REQUIRE(std::abs(merged.mean[i] - flat.mean[i]) < 1e-9);
        REQUIRE(std::abs(merged.variance - flat.variance) < 1e-9);
    }
}

TEST_CASE("digest and summary wire formats")
{
    Digest d;
    d[0] = 1.0;
    d[7] = -2.5;
    const auto enc = encode_digest(d);
    CHECK(enc.size() == 64);
    CHECK(to_hex(ByteView(enc.data(), 8)) == "3ff0000000000000");
    CHECK(decode_digest(enc) == d);

    GroupSummary s;
    s.mean = d;
    s.count = 0x01020304;
    s.variance = 0.5;
    const auto es = encode_summary(s);
    CHECK(es.size() == 76);
    CHECK(to_hex(ByteView(es.data() + 64, 4)) == "01020304");
    CHECK(to_hex(ByteView(es.data() + 68, 8)) == "3fe0000000000000");
    const auto back = decode_summary(es);
    CHECK(back.mean == s.mean);
    CHECK(back.count == s.count);
    CHECK(back.variance == s.variance);

    CHECK_THROWS_AS(decode_digest(ByteView(enc.data(), 63)), std::invalid_argument);
    CHECK_THROWS_AS(decode_summary(ByteView(es.data(), 75)), std::invalid_argument);
}

TEST_CASE("distance threshold validation")
{
    CHECK(DistanceThreshold(4.9).value() == 4.9);
    CHECK_THROWS_AS(DistanceThreshold(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistanceThreshold(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistanceThreshold{INFINITY}, std::invalid_argument);
}
