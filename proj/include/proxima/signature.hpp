#pragma once

#include "proxima/hash.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace proxima {

inline constexpr std::size_t kSignatureBytes = 96;

using SecretKey = Hash256;
using PublicKey = Hash256;

struct KeyPair {
    SecretKey secret{};
    PublicKey public_key{};
};

/// secret = SHA-256("proxima/sk" || seed_be64); public = SHA-256("proxima/pk" || secret).
KeyPair keygen(std::uint64_t seed);

/// Hash-based stand-in for a BLS signature: 96 bytes keyed on the secret,
/// aggregated by bytewise XOR.
struct Signature {
    std::array<std::uint8_t, kSignatureBytes> bytes{};

    friend bool operator==(const Signature&, const Signature&) = default;
};

Signature sign(const KeyPair& key, ByteView message);

/// XOR of all inputs. Throws on an empty list.
Signature aggregate(std::span<const Signature> sigs);

/// Bytewise XOR of b into a.
void aggregate_into(Signature& a, const Signature& b);

/// floor(2N/3) + 1
std::size_t quorum(std::size_t n);

/// Validator i sits at bit (i mod 8) of byte i/8.
class SignerBitmap {
public:
    SignerBitmap() = default;
    explicit SignerBitmap(std::size_t n_validators);

    void set(std::size_t i);
    bool test(std::size_t i) const;
    std::size_t count() const;
    std::size_t size() const { return n_; }
    const Bytes& bytes() const { return bits_; }
    static SignerBitmap from_bytes(ByteView bytes, std::size_t n_validators);

    friend bool operator==(const SignerBitmap&, const SignerBitmap&) = default;

private:
    Bytes bits_;
    std::size_t n_ = 0;
};

struct QuorumCertificate {
    Hash256 block_hash{};
    Signature aggregate;
    SignerBitmap signers;
};

/// Holds the public -> secret map the mock scheme needs to check signatures.
/// Built once per world and read-only afterwards.
class VerificationOracle {
public:
    VerificationOracle() = default;
    explicit VerificationOracle(std::span<const KeyPair> keys);

    bool verify(const PublicKey& pk, ByteView message, const Signature& sig) const;
    /// True iff the certificate signs `message`, popcount(signers) reaches
    /// quorum(N) and the aggregate equals the XOR of the flagged signers'
    /// signatures. Throws if the bitmap size differs from publics.size().
    bool verify_aggregate(const QuorumCertificate& cert, std::span<const PublicKey> publics,
                          ByteView message) const;

    /// Aggregate check without the quorum requirement, used by tree nodes on
    /// their children's partial aggregates.
    bool verify_subset(const Signature& agg, const SignerBitmap& signers, std::span<const PublicKey> publics,
                       ByteView message) const;
    bool verify_indices(const Signature& agg, std::span<const std::size_t> signers,
                        std::span<const PublicKey> publics, ByteView message) const;

private:
    std::unordered_map<PublicKey, SecretKey, Hash256Hasher> secrets_;
};

} // namespace proxima
