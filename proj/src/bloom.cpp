#include "proxima/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace proxima {

BloomKey bloom_key(ByteView id)
{
    const Hash256 h = sha256(id);
    return {load_be64(h.data()), load_be64(h.data() + 8)};
}

std::size_t BloomFilter::optimal_bits(std::size_t n, double target_fp)
{
    if (n == 0) throw std::invalid_argument("bloom: need at least one item");
    if (!(target_fp > 0.0 && target_fp < 1.0)) throw std::invalid_argument("bloom: target_fp must be in (0,1)");
    const double ln2 = std::log(2.0);
    const double m = -static_cast<double>(n) * std::log(target_fp) / (ln2 * ln2);
    return static_cast<std::size_t>(std::ceil(m));
}

unsigned BloomFilter::optimal_hashes(std::size_t m, std::size_t n)
{
    const double k = std::round(static_cast<double>(m) / static_cast<double>(n) * std::log(2.0));
    return std::max(1u, static_cast<unsigned>(k));
}

namespace {

// Plain double hashing h1 + i*h2 correlates probes when m is small and
// composite, so each probe index comes from its own splitmix64 output.
std::size_t probe(const BloomKey& key, unsigned i, std::size_t m)
{
    std::uint64_t z = key.h1 ^ (key.h2 + 0x9e3779b97f4a7c15ULL * (i + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<std::size_t>(z % m);
}

} // namespace

BloomFilter::BloomFilter(std::size_t m, unsigned k) : bits_((m + 7) / 8, 0), bits_count_(m), hash_count_(k) {}

void BloomFilter::insert(const BloomKey& key)
{
    for (unsigned i = 0; i < hash_count_; ++i) {
        const std::size_t bit = probe(key, i, bits_count_);
        bits_[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
    ++inserted_;
}

bool BloomFilter::contains(const BloomKey& key) const
{
    for (unsigned i = 0; i < hash_count_; ++i) {
        const std::size_t bit = probe(key, i, bits_count_);
        if (!(bits_[bit / 8] & (1u << (bit % 8)))) return false;
    }
    return true;
}

bool BloomFilter::contains(ByteView id) const
{
    return contains(bloom_key(id));
}

BloomFilter BloomFilter::build(std::span<const BloomKey> keys, double target_fp)
{
    const std::size_t m = optimal_bits(keys.size(), target_fp);
    BloomFilter f(m, optimal_hashes(m, keys.size()));
    for (const auto& k : keys) f.insert(k);
    return f;
}

BloomFilter BloomFilter::empty(std::size_t n, double target_fp)
{
    const std::size_t m = optimal_bits(n, target_fp);
    return BloomFilter(m, optimal_hashes(m, n));
}

BloomFilter BloomFilter::build(std::span<const Bytes> ids, double target_fp)
{
    std::vector<BloomKey> keys;
    keys.reserve(ids.size());
    for (const auto& id : ids) keys.push_back(bloom_key(id));
    return build(std::span<const BloomKey>(keys), target_fp);
}

BloomFilter BloomFilter::build(std::span<const Hash256> ids, double target_fp)
{
    std::vector<BloomKey> keys;
    keys.reserve(ids.size());
    for (const auto& id : ids) keys.push_back(bloom_key(id));
    return build(std::span<const BloomKey>(keys), target_fp);
}

std::size_t BloomFilter::set_bits() const
{
    std::size_t n = 0;
    for (auto b : bits_) n += static_cast<std::size_t>(std::popcount(b));
    return n;
}

Bytes BloomFilter::encode() const
{
    if (bits_count_ > 0xffff) throw std::length_error("bloom: m does not fit the 2-byte wire field");
    Bytes out;
    out.reserve(3 + bits_.size());
    out.push_back(static_cast<std::uint8_t>(bits_count_ >> 8));
    out.push_back(static_cast<std::uint8_t>(bits_count_ & 0xff));
    out.push_back(static_cast<std::uint8_t>(hash_count_));
    out.insert(out.end(), bits_.begin(), bits_.end());
    return out;
}

BloomFilter BloomFilter::decode(ByteView wire)
{
    if (wire.size() < 3) throw std::invalid_argument("bloom: truncated header");
    const std::size_t m = (std::size_t{wire[0]} << 8) | wire[1];
    const unsigned k = wire[2];
    if (m == 0 || k == 0) throw std::invalid_argument("bloom: zero m or k");
    if (wire.size() != 3 + (m + 7) / 8) throw std::invalid_argument("bloom: payload length mismatch");
    BloomFilter f(m, k);
    std::copy(wire.begin() + 3, wire.end(), f.bits_.begin());
    // The item count is not carried on the wire.
    return f;
}

std::vector<std::size_t> missing_from(const BloomFilter& filter, std::span<const Transaction> universe)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (!filter.contains(ByteView(universe[i].id))) out.push_back(i);
    }
    return out;
}

namespace {

using TickVec = std::array<std::int64_t, kDims>;

struct TickVecHash {
    std::size_t operator()(const TickVec& v) const noexcept
    {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h);
    }
};

std::optional<TickVec> to_ticks(const Digest& d)
{
    TickVec t{};
    for (std::size_t i = 0; i < kDims; ++i) {
        const double scaled = d[i] * kQuantum;
        const double r = std::round(scaled);
        if (!std::isfinite(scaled) || std::abs(scaled - r) > 1e-3) return std::nullopt;
        t[i] = static_cast<std::int64_t>(r);
    }
    return t;
}

struct Signed {
    TickVec ticks;
    bool positive;
    std::size_t index;
};

} // namespace

std::optional<ResidualMatch> resolve_residual(const Digest& residual,
                                              std::span<const Transaction> positive_pool,
                                              std::span<const Transaction> negative_pool,
                                              std::size_t max_items)
{
    const auto target = to_ticks(residual);
    if (!target) return std::nullopt;
    if (*target == TickVec{}) return ResidualMatch{};
    if (max_items == 0) return std::nullopt;
    if (max_items > 3) throw std::invalid_argument("resolve_residual: at most 3 hidden items supported");

    std::vector<Signed> cands;
    cands.reserve(positive_pool.size() + negative_pool.size());
    for (std::size_t i = 0; i < positive_pool.size(); ++i) {
        TickVec t{};
        for (std::size_t d = 0; d < kDims; ++d) t[d] = positive_pool[i].vector.ticks()[d];
        cands.push_back({t, true, i});
    }
    for (std::size_t i = 0; i < negative_pool.size(); ++i) {
        TickVec t{};
        for (std::size_t d = 0; d < kDims; ++d) t[d] = -static_cast<std::int64_t>(negative_pool[i].vector.ticks()[d]);
        cands.push_back({t, false, i});
    }

    std::unordered_multimap<TickVec, std::size_t, TickVecHash> lookup;
    lookup.reserve(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) lookup.emplace(cands[c].ticks, c);

    auto to_match = [&](const std::vector<std::size_t>& picks) {
        ResidualMatch m;
        for (auto c : picks) (cands[c].positive ? m.positive : m.negative).push_back(cands[c].index);
        return m;
    };

    // Find the last pick by hash lookup; the first max_items-1 picks are enumerated.
    auto finish = [&](const TickVec& need, const std::vector<std::size_t>& picks) -> std::optional<std::size_t> {
        auto [lo, hi] = lookup.equal_range(need);
        for (auto it = lo; it != hi; ++it) {
            if (picks.empty() || it->second > picks.back()) return it->second;
        }
        return std::nullopt;
    };

    std::vector<std::size_t> picks;
    for (std::size_t size = 1; size <= max_items; ++size) {
        if (size == 1) {
            if (auto c = finish(*target, picks)) return to_match({*c});
            continue;
        }
        for (std::size_t a = 0; a < cands.size(); ++a) {
            TickVec need1{};
            for (std::size_t d = 0; d < kDims; ++d) need1[d] = (*target)[d] - cands[a].ticks[d];
            if (size == 2) {
                if (auto c = finish(need1, {a})) return to_match({a, *c});
                continue;
            }
            for (std::size_t b = a + 1; b < cands.size(); ++b) {
                TickVec need2{};
                for (std::size_t d = 0; d < kDims; ++d) need2[d] = need1[d] - cands[b].ticks[d];
                if (auto c = finish(need2, {a, b})) return to_match({a, b, *c});
            }
        }
    }
    return std::nullopt;
}

std::vector<std::size_t> push_set(const BloomFilter& filter, const Digest& peer_digest,
                                  std::span<const Transaction> universe, std::size_t max_hidden)
{
    std::vector<std::size_t> push = missing_from(filter, universe);

    DigestAccumulator gap;
    for (const auto& tx : universe) gap.add(tx.vector);
    std::vector<bool> flagged(universe.size(), false);
    for (auto i : push) {
        gap.remove(universe[i].vector);
        flagged[i] = true;
    }
    const Digest residual = gap.digest() - peer_digest;

    std::vector<Transaction> present;
    std::vector<std::size_t> present_index;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (!flagged[i]) {
            present.push_back(universe[i]);
            present_index.push_back(i);
        }
    }
    const std::size_t budget = max_hidden > push.size() ? max_hidden - push.size() : 0;
    if (auto m = resolve_residual(residual, present, {}, budget)) {
        for (auto p : m->positive) push.push_back(present_index[p]);
        std::sort(push.begin(), push.end());
    }
    return push;
}

} // namespace proxima
