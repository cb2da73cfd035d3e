#pragma once

#include "proxima/digest.hpp"
#include "proxima/hash.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace proxima {

/// Probe key: the two big-endian 64-bit halves of the first 16
/// bytes of SHA-256(id). Probe i of an item is splitmix64(h1 xor (h2 + (i+1)*golden)) mod m.
struct BloomKey {
    std::uint64_t h1 = 0;
    std::uint64_t h2 = 0;
};

BloomKey bloom_key(ByteView id);

class BloomFilter {
public:
    /// m = ceil(-n ln p / ln^2 2)
    static std::size_t optimal_bits(std::size_t n, double target_fp);
    /// k = max(1, round((m/n) ln 2))
    static unsigned optimal_hashes(std::size_t m, std::size_t n);

    static BloomFilter build(std::span<const Bytes> ids, double target_fp);
    static BloomFilter build(std::span<const Hash256> ids, double target_fp);
    static BloomFilter build(std::span<const BloomKey> keys, double target_fp);
    /// A filter sized for `n` items with nothing inserted.
    static BloomFilter empty(std::size_t n, double target_fp);

    bool contains(ByteView id) const;
    bool contains(const BloomKey& key) const;

    std::size_t bit_count() const { return bits_count_; }
    unsigned hash_count() const { return hash_count_; }
    std::size_t inserted() const { return inserted_; }
    std::size_t payload_bytes() const { return bits_.size(); }
    std::size_t set_bits() const;

    /// 2-byte big-endian m, 1-byte k, then ceil(m/8) bit bytes (bit j of the
    /// filter at bit j%8 of byte j/8).
    Bytes encode() const;
    static BloomFilter decode(ByteView wire);

private:
    BloomFilter(std::size_t m, unsigned k);
    void insert(const BloomKey& key);

    std::vector<std::uint8_t> bits_;
    std::size_t bits_count_ = 0;
    unsigned hash_count_ = 0;
    std::size_t inserted_ = 0;
};

/// Indices into `universe` whose ids the filter reports absent. Always a subset
/// of the true difference: false positives can only hide members.
std::vector<std::size_t> missing_from(const BloomFilter& filter, std::span<const Transaction> universe);

/// Items hidden by bloom false positives, recovered from the digest gap.
/// `residual` must equal sum(positive picks) - sum(negative picks) exactly on
/// the tick grid; at most `max_items` picks in total are searched.
struct ResidualMatch {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
};

std::optional<ResidualMatch> resolve_residual(const Digest& residual,
                                              std::span<const Transaction> positive_pool,
                                              std::span<const Transaction> negative_pool,
                                              std::size_t max_items);

/// What the aggregator pushes to a peer holding `peer_digest` and `filter`:
/// the bloom diff against `universe`, plus any items the bloom hid that close
/// the digest gap exactly. Indices into `universe`.
std::vector<std::size_t> push_set(const BloomFilter& filter, const Digest& peer_digest,
                                  std::span<const Transaction> universe, std::size_t max_hidden);

inline constexpr double kDefaultBloomFp = 0.01;

} // namespace proxima
