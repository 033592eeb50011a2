// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ledgersim {

/// SHA-256 digest. Transaction ids and mock signatures are digests.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    std::string hex() const;
    static Digest from_hex(std::string_view hex);

    auto operator<=>(const Digest&) const = default;
};

Digest sha256(const void* data, std::size_t len);
Digest sha256(const std::vector<std::uint8_t>& data);
Digest sha256(std::string_view data);

/// Little-endian canonical byte writer used for content-derived ids.
/// Identical logical content always produces identical bytes.
class ByteWriter {
public:
    void reserve(std::size_t n) { buf_.reserve(n); }
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void str(std::string_view s);
    void raw(const std::uint8_t* data, std::size_t len);

    const std::vector<std::uint8_t>& bytes() const { return buf_; }
    Digest digest() const { return sha256(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t); ++i)
            h |= static_cast<std::size_t>(d.bytes[i]) << (8 * i);
        return h;
    }
};

}  // namespace ledgersim
