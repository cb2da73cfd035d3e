#pragma once

#include "proxima/hash.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace proxima {

inline constexpr std::size_t kDims = 8;
inline constexpr std::uint32_t kQuantum = 10000;

/// Per-transaction point on the 1/10000 grid of [0,1)^8. Stored as integer
/// ticks so that sums over transaction sets are exact and order independent.
class TxVector {
public:
    using Ticks = std::array<std::uint16_t, kDims>;

    TxVector() = default;
    explicit TxVector(const Ticks& ticks);

    const Ticks& ticks() const { return ticks_; }
    double operator[](std::size_t i) const { return ticks_[i] / static_cast<double>(kQuantum); }

    friend bool operator==(const TxVector&, const TxVector&) = default;

private:
    Ticks ticks_{};
};

/// SHA-512 of the bytes, split into 8 big-endian 64-bit segments, each
/// reduced mod 10000 and scaled by 1/10000. Throws on empty input.
TxVector tx_to_vector(ByteView tx_bytes);

struct Transaction {
    Hash256 id{};
    Bytes payload;
    TxVector vector;

    friend bool operator==(const Transaction& a, const Transaction& b) { return a.id == b.id; }
};

/// id = SHA-256(payload); vector = tx_to_vector(payload).
Transaction make_transaction(Bytes payload);

struct Digest {
    std::array<double, kDims> coords{};

    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    Digest& operator+=(const Digest& o);
    Digest& operator-=(const Digest& o);
    friend Digest operator+(Digest a, const Digest& b) { return a += b; }
    friend Digest operator-(Digest a, const Digest& b) { return a -= b; }
    friend bool operator==(const Digest&, const Digest&) = default;
};

/// Exact sum in tick space. Accumulates integer ticks and scales once, so the
/// result depends only on the multiset of vectors.
class DigestAccumulator {
public:
    void add(const TxVector& v);
    void remove(const TxVector& v);
    Digest digest() const;

private:
    std::array<std::int64_t, kDims> ticks_{};
};

Digest to_digest(const TxVector& v);
Digest digest_of(std::span<const TxVector> vectors);
Digest digest_of(std::span<const Transaction> txs);

double squared_distance(const Digest& a, const Digest& b);
double distance(const Digest& a, const Digest& b);

struct WeightedDigest {
    Digest digest;
    double weight = 1.0;
};

Digest weighted_mean(std::span<const WeightedDigest> entries);

/// Exact group representation: weighted mean, member count and the weighted
/// mean squared distance of members from the mean. 76 bytes on the wire.
struct GroupSummary {
    Digest mean;
    std::uint32_t count = 0;
    double variance = 0.0;
};

GroupSummary summarize(std::span<const Digest> digests, std::span<const double> weights);
GroupSummary summarize(std::span<const Digest> digests);

/// Count-weighted recombination. Mean and variance equal what summarize would
/// produce over all underlying unit-weight members.
GroupSummary merge_summaries(std::span<const GroupSummary> children);

inline constexpr std::size_t kDigestWireBytes = 64;
inline constexpr std::size_t kSummaryWireBytes = 76;

std::array<std::uint8_t, kDigestWireBytes> encode_digest(const Digest& d);
Digest decode_digest(ByteView bytes);
std::array<std::uint8_t, kSummaryWireBytes> encode_summary(const GroupSummary& s);
GroupSummary decode_summary(ByteView bytes);

class DistanceThreshold {
public:
    explicit DistanceThreshold(double tau);
    double value() const { return tau_; }

private:
    double tau_;
};

inline constexpr double kDefaultTau = 4.9;

} // namespace proxima
