#include "atmas/crypto/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace atmas::crypto {

std::string Credential::hex() const {
    return to_hex(Bytes(digest.begin(), digest.end()));
}

Credential Credential::from_hex(const std::string& hex) {
    return from_bytes(atmas::from_hex(hex));
}

Credential Credential::from_bytes(const Bytes& b) {
    if (b.size() != 32) throw std::invalid_argument("credential must be 32 bytes");
    Credential c;
    std::copy(b.begin(), b.end(), c.digest.begin());
    return c;
}

namespace {

struct CtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

std::array<uint8_t, 32> sha256_parts(const std::vector<Bytes>& parts, bool length_prefixed) {
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest init failed");
    for (const Bytes& part : parts) {
        if (length_prefixed) {
            uint8_t len[8];
            uint64_t n = part.size();
            for (int i = 0; i < 8; ++i) len[i] = static_cast<uint8_t>(n >> (8 * (7 - i)));
            EVP_DigestUpdate(ctx.get(), len, sizeof(len));
        }
        if (!part.empty()) EVP_DigestUpdate(ctx.get(), part.data(), part.size());
    }
    std::array<uint8_t, 32> out{};
    unsigned int out_len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), out.data(), &out_len) != 1 || out_len != 32)
        throw std::runtime_error("sha256: digest final failed");
    return out;
}

}  // namespace

Bytes sha256(const Bytes& data) {
    auto d = sha256_parts({data}, /*length_prefixed=*/false);
    return Bytes(d.begin(), d.end());
}

Credential hash_credential(const std::vector<Bytes>& parts) {
    if (parts.empty()) throw std::domain_error("hash_credential: no parts");
    Credential c;
    c.digest = sha256_parts(parts, /*length_prefixed=*/true);
    return c;
}

}  // namespace atmas::crypto
