#include "proxima/simnet.hpp"

#include "proxima/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace proxima {

const char* behavior_name(Behavior b)
{
    switch (b) {
    case Behavior::Honest: return "honest";
    case Behavior::FabricateDigest: return "fabricate_digest";
    case Behavior::ReplaceOneTx: return "replace_one_tx";
    case Behavior::WithholdSignature: return "withhold_signature";
    case Behavior::SignWrongHash: return "sign_wrong_hash";
    case Behavior::SuppressAsAggregator: return "suppress_as_aggregator";
    }
    return "unknown";
}

const char* message_kind_name(MessageKind k)
{
    switch (k) {
    case MessageKind::Phase1Digest: return "phase1/digest";
    case MessageKind::TxPush: return "phase1/push";
    case MessageKind::ClusterAssign: return "phase1/cluster";
    case MessageKind::Summary: return "phase1/summary";
    case MessageKind::CommitRequest: return "phase2/commit_request";
    case MessageKind::Commit: return "phase2/commit";
    case MessageKind::AggregateUp: return "phase2/aggregate";
    case MessageKind::Finality: return "phase2/finality";
    case MessageKind::ViewChange: return "recovery/view_change";
    }
    return "unknown";
}

bool phase_one(MessageKind k)
{
    return k == MessageKind::Phase1Digest || k == MessageKind::TxPush || k == MessageKind::ClusterAssign ||
           k == MessageKind::Summary;
}

void SimConfig::validate() const
{
    if (n_validators == 0) throw std::invalid_argument("config: need at least one validator");
    if (!(byz_fraction >= 0.0 && byz_fraction < 1.0)) throw std::invalid_argument("config: byz_fraction must be in [0,1)");
    if (!(p_miss >= 0.0 && p_miss <= 1.0)) throw std::invalid_argument("config: p_miss must be in [0,1]");
    if (txs_per_block == 0) throw std::invalid_argument("config: txs_per_block must be positive");
    if (max_missing == 0 || max_missing > txs_per_block) throw std::invalid_argument("config: max_missing must be in [1, txs_per_block]");
    if (max_missing > 3) throw std::invalid_argument("config: max_missing above 3 is not supported by push sync");
    if (!(bloom_fp > 0.0 && bloom_fp < 1.0)) throw std::invalid_argument("config: bloom_fp must be in (0,1)");
    if (!(radius_scale > 0.0)) throw std::invalid_argument("config: radius_scale must be positive");
    if (pinned_behavior == Behavior::Honest) throw std::invalid_argument("config: pinned behavior must be Byzantine");
}

std::size_t SimConfig::byzantine_count() const
{
    // The epsilon keeps products like 0.3 * 100 from rounding down to 29.
    return static_cast<std::size_t>(std::floor(byz_fraction * static_cast<double>(n_validators) + 1e-9));
}

void Metrics::record(MessageKind kind, unsigned level, std::uint64_t count, std::uint64_t bytes_each)
{
    if (static_cast<std::size_t>(kind) >= kMessageKinds) throw std::invalid_argument("metrics: unknown message kind");
    if (count == 0) return;
    auto& c = breakdown[{kind, level}];
    c.messages += count;
    c.bytes += count * bytes_each;
    messages += count;
    bytes += count * bytes_each;
}

Counter Metrics::by_kind(MessageKind kind) const
{
    Counter out;
    for (const auto& [key, c] : breakdown) {
        if (key.first == kind) {
            out.messages += c.messages;
            out.bytes += c.bytes;
        }
    }
    return out;
}

Counter Metrics::by_level(unsigned level) const
{
    Counter out;
    for (const auto& [key, c] : breakdown) {
        if (key.second == level) {
            out.messages += c.messages;
            out.bytes += c.bytes;
        }
    }
    return out;
}

bool Metrics::consistent() const
{
    std::uint64_t m = 0;
    std::uint64_t b = 0;
    for (const auto& [key, c] : breakdown) {
        m += c.messages;
        b += c.bytes;
    }
    return m == messages && b == bytes;
}

std::string metrics_csv_header()
{
    return "protocol,N,byz_frac,p_miss,seed,phase,level,messages,bytes,fast_path,finalized\n";
}

std::string metrics_csv_rows(const Metrics& m, const CsvContext& ctx)
{
    std::ostringstream out;
    for (const auto& [key, c] : m.breakdown) {
        out << ctx.protocol << ',' << ctx.n << ',' << ctx.byz << ',' << ctx.p_miss << ',' << ctx.seed << ','
            << message_kind_name(key.first) << ',' << key.second << ',' << c.messages << ',' << c.bytes << ','
            << (m.fast_path ? 1 : 0) << ',' << (m.finalized ? 1 : 0) << '\n';
    }
    return out.str();
}

Hash256 block_hash(std::uint64_t height, const Hash256& parent, std::span<const Hash256> tx_ids)
{
    Bytes buf;
    buf.reserve(8 + 32 + 32 * tx_ids.size());
    append_be64(buf, height);
    buf.insert(buf.end(), parent.begin(), parent.end());
    for (const auto& id : tx_ids) buf.insert(buf.end(), id.begin(), id.end());
    return sha256(buf);
}

Block make_block(std::uint64_t height, const Hash256& parent, std::vector<Transaction> txs)
{
    Block b;
    b.height = height;
    b.parent_hash = parent;
    b.txs = std::move(txs);
    std::vector<Hash256> ids;
    ids.reserve(b.txs.size());
    for (const auto& tx : b.txs) ids.push_back(tx.id);
    b.hash = block_hash(height, parent, ids);
    return b;
}

World::World(SimConfig config) : config_(std::move(config)), rng_(config_.seed)
{
    config_.validate();
    byzantine_ = config_.byzantine_count();
    validators_.resize(config_.n_validators);
    std::vector<KeyPair> keys;
    keys.reserve(validators_.size());
    for (std::size_t i = 0; i < validators_.size(); ++i) {
        auto& v = validators_[i];
        v.index = i;
        v.key = keygen(derive_seed(config_.seed, i));
        if (i < byzantine_) {
            v.behavior = config_.pinned_behavior.value_or(kByzantineBehaviors[i % std::size(kByzantineBehaviors)]);
        }
        keys.push_back(v.key);
        publics_.push_back(v.key.public_key);
    }
    oracle_ = VerificationOracle(keys);
    // Height 0 is the genesis placeholder; begin_height proposes height 1.
    block_ = make_block(0, Hash256{}, {});
    alt_block_ = block_;
}

void World::begin_height()
{
    const std::uint64_t h = block_.height + 1;
    auto txs = random_transactions(rng_, config_.txs_per_block);
    auto alt = txs;
    alt[static_cast<std::size_t>(rng_() % alt.size())] = random_transaction(rng_);
    const Hash256 parent = block_.hash;
    block_ = make_block(h, parent, std::move(txs));
    alt_block_ = make_block(h, parent, std::move(alt));

    block_keys_.clear();
    for (const auto& tx : block_.txs) block_keys_.push_back(bloom_key(ByteView(tx.id)));
    reference_ = digest_of(std::span<const Transaction>(block_.txs));
    aggregator_ = static_cast<std::size_t>((h - 1) % size());
    metrics_ = Metrics{};

    for (auto& v : validators_) {
        v.fabricated = Digest{};
        v.fresh_tx.reset();
        if (v.behavior == Behavior::FabricateDigest) {
            v.fabricated = fabricated_digest(rng_, config_.txs_per_block, config_.radius_scale);
        } else if (v.behavior == Behavior::ReplaceOneTx) {
            v.replaced_index = static_cast<std::size_t>(rng_() % block_.txs.size());
            v.fresh_tx = random_transaction(rng_);
        }
    }
    assign_observations();
}

void World::assign_observations()
{
    std::uniform_int_distribution<unsigned> count(1, config_.max_missing);
    std::vector<std::size_t> order(block_.txs.size());
    for (auto& v : validators_) {
        v.missing.clear();
        if (v.byzantine() || block_.txs.empty()) continue;
        if (uniform01(rng_) >= config_.p_miss) continue;
        const unsigned k = count(rng_);
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Partial Fisher-Yates: the first k slots are a uniform k-subset.
        for (unsigned j = 0; j < k; ++j) {
            const auto pick = j + static_cast<std::size_t>(rng_() % (order.size() - j));
            std::swap(order[j], order[pick]);
        }
        v.missing.assign(order.begin(), order.begin() + k);
        std::sort(v.missing.begin(), v.missing.end());
    }
}

std::size_t World::message_bytes(MessageKind kind) const
{
    const auto& b = config_.bytes;
    const std::size_t bitmap = config_.bitmap_bytes();
    switch (kind) {
    case MessageKind::Phase1Digest: return b.digest + b.bloom;
    case MessageKind::TxPush: return b.tx;
    case MessageKind::ClusterAssign: return b.digest;
    case MessageKind::Summary: return b.summary;
    case MessageKind::CommitRequest: return b.hash;
    case MessageKind::Commit: return b.signature;
    case MessageKind::AggregateUp: return b.signature + bitmap;
    case MessageKind::Finality: return b.hash + b.signature + bitmap;
    case MessageKind::ViewChange: return b.signature;
    }
    throw std::invalid_argument("send: unknown message kind");
}

void World::send(std::size_t from, std::size_t to, MessageKind kind, unsigned level,
                 std::optional<std::size_t> payload_bytes)
{
    if (from >= size() || to >= size()) throw std::out_of_range("send: validator index out of range");
    send_many(kind, level, 1, payload_bytes);
}

void World::send_many(MessageKind kind, unsigned level, std::uint64_t count, std::optional<std::size_t> payload_bytes)
{
    metrics_.record(kind, level, count, payload_bytes.value_or(message_bytes(kind)));
}

BloomFilter World::bloom_without(std::span<const std::size_t> missing) const
{
    std::vector<BloomKey> keys;
    keys.reserve(block_keys_.size());
    std::size_t m = 0;
    for (std::size_t i = 0; i < block_keys_.size(); ++i) {
        if (m < missing.size() && missing[m] == i) {
            ++m;
            continue;
        }
        keys.push_back(block_keys_[i]);
    }
    if (keys.empty()) return BloomFilter::empty(std::max<std::size_t>(1, block_keys_.size()), config_.bloom_fp);
    return BloomFilter::build(std::span<const BloomKey>(keys), config_.bloom_fp);
}

Digest World::view_digest(std::size_t i) const
{
    const auto& v = validators_.at(i);
    DigestAccumulator acc;
    std::size_t m = 0;
    for (std::size_t t = 0; t < block_.txs.size(); ++t) {
        if (m < v.missing.size() && v.missing[m] == t) {
            ++m;
            continue;
        }
        acc.add(block_.txs[t].vector);
    }
    return acc.digest();
}

Phase1Payload World::honest_payload(std::size_t i) const
{
    const auto& v = validators_.at(i);
    return {view_digest(i), bloom_without(v.missing)};
}

Phase1Payload World::byzantine_phase1_payload(std::size_t i)
{
    const auto& v = validators_.at(i);
    if (!v.byzantine()) throw std::logic_error("byzantine_phase1_payload: validator is honest");
    switch (v.behavior) {
    case Behavior::FabricateDigest:
        return {v.fabricated, bloom_without({})};
    case Behavior::ReplaceOneTx: {
        DigestAccumulator acc;
        std::vector<BloomKey> keys;
        for (std::size_t t = 0; t < block_.txs.size(); ++t) {
            if (t == v.replaced_index) continue;
            acc.add(block_.txs[t].vector);
            keys.push_back(block_keys_[t]);
        }
        acc.add(v.fresh_tx->vector);
        keys.push_back(bloom_key(ByteView(v.fresh_tx->id)));
        return {acc.digest(), BloomFilter::build(std::span<const BloomKey>(keys), config_.bloom_fp)};
    }
    default:
        return honest_payload(i);
    }
}

Phase1Payload World::phase1_payload(std::size_t i)
{
    return validators_.at(i).byzantine() ? byzantine_phase1_payload(i) : honest_payload(i);
}

std::vector<std::size_t> World::push_for(std::size_t i, const Phase1Payload& payload) const
{
    (void)i;
    return push_set(payload.bloom, payload.digest, block_.txs, config_.max_missing);
}

void World::deliver_push(std::size_t i, std::span<const std::size_t> tx_indices)
{
    auto& v = validators_.at(i);
    for (auto t : tx_indices) {
        auto it = std::lower_bound(v.missing.begin(), v.missing.end(), t);
        if (it != v.missing.end() && *it == t) v.missing.erase(it);
    }
}

std::optional<Hash256> World::commit_target(std::size_t i) const
{
    const auto& v = validators_.at(i);
    switch (v.behavior) {
    case Behavior::Honest:
    case Behavior::SuppressAsAggregator:
        if (!v.complete()) return std::nullopt;
        return block_.hash;
    case Behavior::WithholdSignature:
        return std::nullopt;
    case Behavior::FabricateDigest:
    case Behavior::SignWrongHash:
        return alt_block_.hash;
    case Behavior::ReplaceOneTx: {
        std::vector<Hash256> ids;
        for (const auto& tx : block_.txs) ids.push_back(tx.id);
        ids[v.replaced_index] = v.fresh_tx->id;
        return block_hash(block_.height, block_.parent_hash, ids);
    }
    }
    return std::nullopt;
}

std::optional<Signature> World::sign_hash(std::size_t i, const Hash256& hash)
{
    auto& v = validators_.at(i);
    if (v.behavior == Behavior::Honest) {
        if (v.signed_height == block_.height && v.signed_hash != hash) return std::nullopt;
        v.signed_height = block_.height;
        v.signed_hash = hash;
    }
    return sign(v.key, ByteView(hash));
}

std::optional<Signature> World::commit(std::size_t i)
{
    const auto target = commit_target(i);
    if (!target) return std::nullopt;
    return sign_hash(i, *target);
}

Hash256 World::state_hash() const
{
    Bytes buf;
    append_be64(buf, config_.seed);
    append_be64(buf, config_.n_validators);
    append_be64(buf, block_.height);
    buf.insert(buf.end(), block_.hash.begin(), block_.hash.end());
    buf.insert(buf.end(), alt_block_.hash.begin(), alt_block_.hash.end());
    append_be64(buf, aggregator_);
    for (const auto& v : validators_) {
        buf.insert(buf.end(), v.key.public_key.begin(), v.key.public_key.end());
        buf.push_back(static_cast<std::uint8_t>(v.behavior));
        append_be64(buf, v.missing.size());
        for (auto m : v.missing) append_be64(buf, m);
        const auto enc = encode_digest(v.fabricated);
        buf.insert(buf.end(), enc.begin(), enc.end());
    }
    return sha256(buf);
}

} // namespace proxima
