#include "proxima/digest.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace proxima {

TxVector::TxVector(const Ticks& ticks) : ticks_(ticks)
{
    for (auto t : ticks_) {
        if (t >= kQuantum) throw std::invalid_argument("TxVector tick out of range");
    }
}

TxVector tx_to_vector(ByteView tx_bytes)
{
    if (tx_bytes.empty()) throw std::invalid_argument("tx_to_vector: empty transaction");
    const Hash512 h = sha512(tx_bytes);
    TxVector::Ticks ticks{};
    for (std::size_t i = 0; i < kDims; ++i) {
        ticks[i] = static_cast<std::uint16_t>(load_be64(h.data() + 8 * i) % kQuantum);
    }
    return TxVector(ticks);
}

Transaction make_transaction(Bytes payload)
{
    Transaction tx;
    tx.id = sha256(payload);
    tx.vector = tx_to_vector(payload);
    tx.payload = std::move(payload);
    return tx;
}

Digest& Digest::operator+=(const Digest& o)
{
    for (std::size_t i = 0; i < kDims; ++i) coords[i] += o.coords[i];
    return *this;
}

Digest& Digest::operator-=(const Digest& o)
{
    for (std::size_t i = 0; i < kDims; ++i) coords[i] -= o.coords[i];
    return *this;
}

void DigestAccumulator::add(const TxVector& v)
{
    for (std::size_t i = 0; i < kDims; ++i) ticks_[i] += v.ticks()[i];
}

void DigestAccumulator::remove(const TxVector& v)
{
    for (std::size_t i = 0; i < kDims; ++i) ticks_[i] -= v.ticks()[i];
}

Digest DigestAccumulator::digest() const
{
    Digest d;
    for (std::size_t i = 0; i < kDims; ++i) d[i] = static_cast<double>(ticks_[i]) / kQuantum;
    return d;
}

Digest to_digest(const TxVector& v)
{
    DigestAccumulator acc;
    acc.add(v);
    return acc.digest();
}

Digest digest_of(std::span<const TxVector> vectors)
{
    DigestAccumulator acc;
    for (const auto& v : vectors) acc.add(v);
    return acc.digest();
}

Digest digest_of(std::span<const Transaction> txs)
{
    DigestAccumulator acc;
    for (const auto& tx : txs) acc.add(tx.vector);
    return acc.digest();
}

double squared_distance(const Digest& a, const Digest& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < kDims; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(const Digest& a, const Digest& b)
{
    return std::sqrt(squared_distance(a, b));
}

Digest weighted_mean(std::span<const WeightedDigest> entries)
{
    if (entries.empty()) throw std::invalid_argument("weighted_mean: no entries");
    Digest acc;
    double total = 0.0;
    for (const auto& e : entries) {
        if (!(e.weight > 0.0)) throw std::invalid_argument("weighted_mean: weights must be positive");
        for (std::size_t i = 0; i < kDims; ++i) acc[i] += e.digest[i] * e.weight;
        total += e.weight;
    }
    for (auto& c : acc.coords) c /= total;
    return acc;
}

GroupSummary summarize(std::span<const Digest> digests, std::span<const double> weights)
{
    if (digests.size() != weights.size()) throw std::invalid_argument("summarize: length mismatch");
    if (digests.empty()) throw std::invalid_argument("summarize: empty input");

    std::vector<WeightedDigest> entries;
    entries.reserve(digests.size());
    for (std::size_t i = 0; i < digests.size(); ++i) entries.push_back({digests[i], weights[i]});

    GroupSummary s;
    s.mean = weighted_mean(entries);
    s.count = static_cast<std::uint32_t>(digests.size());

    double total = 0.0;
    double acc = 0.0;
    for (const auto& e : entries) {
        acc += e.weight * squared_distance(e.digest, s.mean);
        total += e.weight;
    }
    s.variance = acc / total;
    return s;
}

GroupSummary summarize(std::span<const Digest> digests)
{
    const std::vector<double> ones(digests.size(), 1.0);
    return summarize(digests, ones);
}

GroupSummary merge_summaries(std::span<const GroupSummary> children)
{
    if (children.empty()) throw std::invalid_argument("merge_summaries: empty input");

    std::vector<WeightedDigest> means;
    means.reserve(children.size());
    std::uint64_t total = 0;
    for (const auto& c : children) {
        if (c.count == 0) throw std::invalid_argument("merge_summaries: child count must be >= 1");
        means.push_back({c.mean, static_cast<double>(c.count)});
        total += c.count;
    }

    GroupSummary out;
    out.mean = weighted_mean(means);
    out.count = static_cast<std::uint32_t>(total);

    // Within-group spread plus the spread of the group means around the merged mean.
    double acc = 0.0;
    for (const auto& c : children) {
        acc += c.count * (c.variance + squared_distance(c.mean, out.mean));
    }
    out.variance = acc / static_cast<double>(total);
    return out;
}

namespace {

void put_double(std::uint8_t* p, double v)
{
    store_be64(p, std::bit_cast<std::uint64_t>(v));
}

double get_double(const std::uint8_t* p)
{
    return std::bit_cast<double>(load_be64(p));
}

} // namespace

std::array<std::uint8_t, kDigestWireBytes> encode_digest(const Digest& d)
{
    std::array<std::uint8_t, kDigestWireBytes> out{};
    for (std::size_t i = 0; i < kDims; ++i) put_double(out.data() + 8 * i, d[i]);
    return out;
}

Digest decode_digest(ByteView bytes)
{
    if (bytes.size() != kDigestWireBytes) throw std::invalid_argument("decode_digest: expected 64 bytes");
    Digest d;
    for (std::size_t i = 0; i < kDims; ++i) d[i] = get_double(bytes.data() + 8 * i);
    return d;
}

std::array<std::uint8_t, kSummaryWireBytes> encode_summary(const GroupSummary& s)
{
    std::array<std::uint8_t, kSummaryWireBytes> out{};
    const auto mean = encode_digest(s.mean);
    std::copy(mean.begin(), mean.end(), out.begin());
    out[64] = static_cast<std::uint8_t>(s.count >> 24);
    out[65] = static_cast<std::uint8_t>(s.count >> 16);
    out[66] = static_cast<std::uint8_t>(s.count >> 8);
    out[67] = static_cast<std::uint8_t>(s.count);
    put_double(out.data() + 68, s.variance);
    return out;
}

GroupSummary decode_summary(ByteView bytes)
{
    if (bytes.size() != kSummaryWireBytes) throw std::invalid_argument("decode_summary: expected 76 bytes");
    GroupSummary s;
    s.mean = decode_digest(bytes.first(64));
    s.count = (std::uint32_t{bytes[64]} << 24) | (std::uint32_t{bytes[65]} << 16) |
              (std::uint32_t{bytes[66]} << 8) | std::uint32_t{bytes[67]};
    s.variance = get_double(bytes.data() + 68);
    return s;
}

DistanceThreshold::DistanceThreshold(double tau) : tau_(tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("DistanceThreshold: tau must be > 0");
}

} // namespace proxima
