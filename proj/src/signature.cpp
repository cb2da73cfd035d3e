#include "proxima/signature.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string_view>

namespace proxima {

namespace {

Hash256 tagged_sha256(std::string_view tag, ByteView data)
{
    Bytes buf(tag.begin(), tag.end());
    buf.insert(buf.end(), data.begin(), data.end());
    return sha256(buf);
}

Signature sign_with(const SecretKey& secret, ByteView message)
{
    Bytes buf;
    buf.reserve(1 + secret.size() + message.size());
    buf.push_back(0x00);
    buf.insert(buf.end(), secret.begin(), secret.end());
    buf.insert(buf.end(), message.begin(), message.end());
    const Hash512 first = sha512(buf);
    buf[0] = 0x01;
    const Hash512 second = sha512(buf);

    Signature sig;
    std::copy(first.begin(), first.end(), sig.bytes.begin());
    std::copy(second.begin(), second.begin() + (kSignatureBytes - first.size()), sig.bytes.begin() + first.size());
    return sig;
}

void xor_into(Signature& acc, const Signature& s)
{
    for (std::size_t i = 0; i < kSignatureBytes; ++i) acc.bytes[i] ^= s.bytes[i];
}

} // namespace

KeyPair keygen(std::uint64_t seed)
{
    Bytes be;
    append_be64(be, seed);
    KeyPair kp;
    kp.secret = tagged_sha256("proxima/sk", be);
    kp.public_key = tagged_sha256("proxima/pk", kp.secret);
    return kp;
}

Signature sign(const KeyPair& key, ByteView message)
{
    return sign_with(key.secret, message);
}

Signature aggregate(std::span<const Signature> sigs)
{
    if (sigs.empty()) throw std::invalid_argument("aggregate: no signatures");
    Signature acc = sigs.front();
    for (std::size_t i = 1; i < sigs.size(); ++i) xor_into(acc, sigs[i]);
    return acc;
}

void aggregate_into(Signature& a, const Signature& b)
{
    xor_into(a, b);
}

std::size_t quorum(std::size_t n)
{
    return 2 * n / 3 + 1;
}

SignerBitmap::SignerBitmap(std::size_t n_validators) : bits_((n_validators + 7) / 8, 0), n_(n_validators) {}

void SignerBitmap::set(std::size_t i)
{
    if (i >= n_) throw std::out_of_range("bitmap: validator index out of range");
    bits_[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
}

bool SignerBitmap::test(std::size_t i) const
{
    if (i >= n_) return false;
    return (bits_[i / 8] >> (i % 8)) & 1u;
}

std::size_t SignerBitmap::count() const
{
    std::size_t c = 0;
    for (auto b : bits_) c += static_cast<std::size_t>(std::popcount(b));
    return c;
}

SignerBitmap SignerBitmap::from_bytes(ByteView bytes, std::size_t n_validators)
{
    if (bytes.size() != (n_validators + 7) / 8) throw std::invalid_argument("bitmap: length does not match N");
    SignerBitmap bm(n_validators);
    std::copy(bytes.begin(), bytes.end(), bm.bits_.begin());
    // Padding bits past N must be clear.
    if (n_validators % 8 != 0 && (bm.bits_.back() >> (n_validators % 8)) != 0) {
        throw std::invalid_argument("bitmap: padding bits set");
    }
    return bm;
}

VerificationOracle::VerificationOracle(std::span<const KeyPair> keys)
{
    secrets_.reserve(keys.size());
    for (const auto& k : keys) secrets_.emplace(k.public_key, k.secret);
}

bool VerificationOracle::verify(const PublicKey& pk, ByteView message, const Signature& sig) const
{
    const auto it = secrets_.find(pk);
    if (it == secrets_.end()) return false;
    return sign_with(it->second, message) == sig;
}

bool VerificationOracle::verify_subset(const Signature& agg, const SignerBitmap& signers,
                                       std::span<const PublicKey> publics, ByteView message) const
{
    if (signers.size() != publics.size()) throw std::invalid_argument("verify_subset: bitmap size does not match N");
    Signature expected{};
    for (std::size_t i = 0; i < publics.size(); ++i) {
        if (!signers.test(i)) continue;
        const auto it = secrets_.find(publics[i]);
        if (it == secrets_.end()) return false;
        xor_into(expected, sign_with(it->second, message));
    }
    return expected == agg;
}

bool VerificationOracle::verify_indices(const Signature& agg, std::span<const std::size_t> signers,
                                        std::span<const PublicKey> publics, ByteView message) const
{
    Signature expected{};
    for (auto i : signers) {
        if (i >= publics.size()) return false;
        const auto it = secrets_.find(publics[i]);
        if (it == secrets_.end()) return false;
        xor_into(expected, sign_with(it->second, message));
    }
    return expected == agg;
}

bool VerificationOracle::verify_aggregate(const QuorumCertificate& cert, std::span<const PublicKey> publics,
                                          ByteView message) const
{
    if (cert.signers.size() != publics.size()) throw std::invalid_argument("verify_aggregate: bitmap size does not match N");
    if (!std::equal(message.begin(), message.end(), cert.block_hash.begin(), cert.block_hash.end())) return false;
    if (cert.signers.count() < quorum(publics.size())) return false;
    return verify_subset(cert.aggregate, cert.signers, publics, message);
}

} // namespace proxima
