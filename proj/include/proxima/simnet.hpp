#pragma once

#include "proxima/bloom.hpp"
#include "proxima/digest.hpp"
#include "proxima/rng.hpp"
#include "proxima/signature.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace proxima {

enum class Behavior {
    Honest,
    FabricateDigest,
    ReplaceOneTx,
    WithholdSignature,
    SignWrongHash,
    SuppressAsAggregator,
};

const char* behavior_name(Behavior b);

inline constexpr Behavior kByzantineBehaviors[] = {
    Behavior::FabricateDigest, Behavior::ReplaceOneTx, Behavior::WithholdSignature,
    Behavior::SignWrongHash, Behavior::SuppressAsAggregator,
};

enum class MessageKind {
    Phase1Digest,   // digest + bloom to the aggregator / leaf leader
    TxPush,         // missing transactions, one message per recipient
    ClusterAssign,  // reference digest and inclusion decision
    Summary,        // group summary to the parent node
    CommitRequest,  // block hash down the tree or to the cluster
    Commit,         // one signed commitment
    AggregateUp,    // aggregated signature + bitmap to the parent node
    Finality,       // certificate multicast
    ViewChange,     // timeout vote after a suppressing aggregator
};

inline constexpr std::size_t kMessageKinds = 9;

const char* message_kind_name(MessageKind k);

/// Payload sizes in bytes. The bitmap is ceil(N/8) and depends on the world.
struct ByteConstants {
    std::size_t digest = kDigestWireBytes;
    std::size_t bloom = 25;
    std::size_t signature = kSignatureBytes;
    std::size_t summary = kSummaryWireBytes;
    std::size_t hash = 32;
    std::size_t tx = 64;
};

struct SimConfig {
    std::size_t n_validators = 100;
    double byz_fraction = 0.0;
    double p_miss = 0.37;
    unsigned txs_per_block = 20;
    std::uint64_t seed = 0;
    unsigned max_missing = 2;
    unsigned delivery_delay = 1;
    double bloom_fp = kDefaultBloomFp;
    double radius_scale = 14.0;
    /// When set, every Byzantine validator uses this behavior instead of the
    /// round-robin mix.
    std::optional<Behavior> pinned_behavior;
    ByteConstants bytes;

    void validate() const;
    std::size_t byzantine_count() const;
    std::size_t bitmap_bytes() const { return (n_validators + 7) / 8; }
};

struct Counter {
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
};

struct Metrics {
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
    /// (kind, level) -> counter. Flat protocols only use level 0; in the tree,
    /// level l covers edges into nodes at level l (validators feed level 0).
    std::map<std::pair<MessageKind, unsigned>, Counter> breakdown;
    bool fast_path = false;
    bool finalized = false;
    std::size_t excluded_honest = 0;
    std::size_t excluded_byz = 0;
    std::size_t view_changes = 0;

    void record(MessageKind kind, unsigned level, std::uint64_t count, std::uint64_t bytes_each);
    Counter by_kind(MessageKind kind) const;
    Counter by_level(unsigned level) const;
    /// Totals equal the sum of the breakdown.
    bool consistent() const;
};

bool phase_one(MessageKind k);

struct CsvContext {
    std::string protocol;
    std::size_t n = 0;
    double byz = 0.0;
    double p_miss = 0.0;
    std::uint64_t seed = 0;
};

std::string metrics_csv_header();
/// One row per (kind, level) with a nonzero count.
std::string metrics_csv_rows(const Metrics& m, const CsvContext& ctx);

struct Block {
    std::uint64_t height = 0;
    Hash256 parent_hash{};
    std::vector<Transaction> txs;
    Hash256 hash{};
};

/// SHA-256(height_be64 || parent_hash || tx ids in order)
Hash256 block_hash(std::uint64_t height, const Hash256& parent, std::span<const Hash256> tx_ids);
Block make_block(std::uint64_t height, const Hash256& parent, std::vector<Transaction> txs);

struct Validator {
    std::size_t index = 0;
    KeyPair key;
    Behavior behavior = Behavior::Honest;

    // Per-height state.
    std::vector<std::size_t> missing;  // indices into the block's txs
    Digest fabricated;
    std::size_t replaced_index = 0;
    std::optional<Transaction> fresh_tx;

    // Signing guard.
    std::optional<std::uint64_t> signed_height;
    Hash256 signed_hash{};

    bool byzantine() const { return behavior != Behavior::Honest; }
    bool complete() const { return missing.empty(); }
};

struct Phase1Payload {
    Digest digest;
    BloomFilter bloom;
};

/// One simulated chain with N validators. Single-threaded and deterministic
/// per seed; independent Worlds share nothing.
class World {
public:
    explicit World(SimConfig config);

    const SimConfig& config() const { return config_; }
    std::size_t size() const { return validators_.size(); }
    const Validator& validator(std::size_t i) const { return validators_.at(i); }
    std::size_t byzantine_count() const { return byzantine_; }
    std::size_t honest_count() const { return size() - byzantine_; }

    /// Proposes a new block of fresh transactions, resets metrics and draws
    /// observations and Byzantine material for the height.
    void begin_height();
    /// Redraws the per-validator views for the current block.
    void assign_observations();

    std::uint64_t height() const { return block_.height; }
    const Block& block() const { return block_; }
    /// The adversary's competing block for this height (one tx replaced).
    const Block& alternative_block() const { return alt_block_; }
    const Digest& reference_digest() const { return reference_; }

    std::size_t aggregator() const { return aggregator_; }
    void rotate_aggregator() { aggregator_ = (aggregator_ + 1) % size(); }
    bool suppresses(std::size_t i) const { return validators_.at(i).behavior == Behavior::SuppressAsAggregator; }

    void send(std::size_t from, std::size_t to, MessageKind kind, unsigned level = 0,
              std::optional<std::size_t> payload_bytes = std::nullopt);
    void send_many(MessageKind kind, unsigned level, std::uint64_t count,
                   std::optional<std::size_t> payload_bytes = std::nullopt);
    std::size_t message_bytes(MessageKind kind) const;
    Metrics& metrics() { return metrics_; }
    const Metrics& metrics() const { return metrics_; }

    /// What validator i sends in phase 1: its view for honest validators,
    /// the behavior-specific payload for Byzantine ones.
    Phase1Payload phase1_payload(std::size_t i);
    /// Throws for honest validators.
    Phase1Payload byzantine_phase1_payload(std::size_t i);
    /// The digest of validator i's true current view.
    Digest view_digest(std::size_t i) const;
    /// Transactions the aggregator pushes to i given its phase-1 payload.
    std::vector<std::size_t> push_for(std::size_t i, const Phase1Payload& payload) const;
    /// Delivers pushed transactions; honest validators end up with the full set.
    void deliver_push(std::size_t i, std::span<const std::size_t> tx_indices);

    /// The hash validator i signs in phase 2, or nullopt if it withholds or
    /// its signing guard refuses. Honest validators sign the block hash only
    /// once they hold the full set, and at most one hash per height.
    std::optional<Hash256> commit_target(std::size_t i) const;
    std::optional<Signature> commit(std::size_t i);
    /// Signs an arbitrary hash with validator i's key. Honest validators go
    /// through the signing guard; Byzantine ones sign anything.
    std::optional<Signature> sign_hash(std::size_t i, const Hash256& hash);

    const VerificationOracle& oracle() const { return oracle_; }
    const std::vector<PublicKey>& publics() const { return publics_; }
    Rng& rng() { return rng_; }

    /// SHA-256 over the configuration, keys, behaviors, block and views.
    Hash256 state_hash() const;

private:
    Phase1Payload honest_payload(std::size_t i) const;
    BloomFilter bloom_without(std::span<const std::size_t> missing) const;

    SimConfig config_;
    Rng rng_;
    std::vector<Validator> validators_;
    std::vector<PublicKey> publics_;
    VerificationOracle oracle_;
    std::size_t byzantine_ = 0;
    std::size_t aggregator_ = 0;
    Block block_;
    Block alt_block_;
    std::vector<BloomKey> block_keys_;
    Digest reference_;
    Metrics metrics_;
};

} // namespace proxima
