#pragma once

#include <array>
#include <string>
#include <vector>

#include "atmas/bytes.hpp"

namespace atmas::crypto {

/// SHA-256 digest acting as an authentication credential.
struct Credential {
    std::array<uint8_t, 32> digest{};

    bool operator==(const Credential&) const = default;
    std::string hex() const;
    Bytes bytes() const { return Bytes(digest.begin(), digest.end()); }
    static Credential from_hex(const std::string& hex);
    static Credential from_bytes(const Bytes& b);
};

Bytes sha256(const Bytes& data);

// Hash of a length-prefixed encoding of the parts, so ["ab","c"] and
// ["a","bc"] cannot collide. Throws std::domain_error on an empty list.
Credential hash_credential(const std::vector<Bytes>& parts);

}  // namespace atmas::crypto
