#include "proxima/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace proxima {

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> evp_digest(const EVP_MD* md, ByteView data)
{
    std::array<std::uint8_t, N> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
        throw std::runtime_error("EVP_Digest failed");
    }
    return out;
}

} // namespace

Hash256 sha256(ByteView data)
{
    return evp_digest<32>(EVP_sha256(), data);
}

Hash512 sha512(ByteView data)
{
    return evp_digest<64>(EVP_sha512(), data);
}

std::string to_hex(ByteView data)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (auto b : data) {
        s.push_back(kDigits[b >> 4]);
        s.push_back(kDigits[b & 0xf]);
    }
    return s;
}

} // namespace proxima
