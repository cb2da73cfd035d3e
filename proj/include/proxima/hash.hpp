#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace proxima {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;
using Hash512 = std::array<std::uint8_t, 64>;

Hash256 sha256(ByteView data);
Hash512 sha512(ByteView data);

inline ByteView as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView data);

inline std::uint64_t load_be64(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    return v;
}

inline void store_be64(std::uint8_t* p, std::uint64_t v)
{
    for (int i = 7; i >= 0; --i) {
        p[i] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
}

inline void append_be64(Bytes& out, std::uint64_t v)
{
    std::uint8_t buf[8];
    store_be64(buf, v);
    out.insert(out.end(), buf, buf + 8);
}

struct Hash256Hasher {
    std::size_t operator()(const Hash256& h) const noexcept
    {
        return static_cast<std::size_t>(load_be64(h.data()));
    }
};

} // namespace proxima
