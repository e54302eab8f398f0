#include "atmas/crypto/elgamal.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <sstream>
#include <stdexcept>

namespace atmas::crypto {

using boost::multiprecision::miller_rabin_test;
using boost::multiprecision::powm;

BigInt bigint_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("bigint_from_string: empty");
    return BigInt(s);  // cpp_int understands the 0x prefix
}

std::string bigint_to_string(const BigInt& v) {
    return v.str();
}

Bytes bigint_to_bytes(const BigInt& v) {
    if (v < 0) throw std::invalid_argument("bigint_to_bytes: negative");
    Bytes out;
    export_bits(v, std::back_inserter(out), 8);
    if (v == 0) out.clear();  // export_bits emits a single 0 byte
    return out;
}

BigInt bigint_from_bytes(const Bytes& b) {
    BigInt v = 0;
    if (!b.empty()) import_bits(v, b.begin(), b.end(), 8);
    return v;
}

namespace {

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    return miller_rabin_test(n, 25);
}

// Trial division by odd numbers; good enough for the small composite orders
// the toy groups use. Returns the distinct prime factors, or throws when a
// non-prime cofactor beyond the trial bound remains.
std::vector<BigInt> distinct_prime_factors(BigInt n) {
    std::vector<BigInt> factors;
    auto push = [&](const BigInt& f) {
        if (factors.empty() || factors.back() != f) factors.push_back(f);
    };
    for (BigInt d = 2; d * d <= n && d < 1u << 20; d == 2 ? d = 3 : d += 2) {
        while (n % d == 0) {
            push(d);
            n /= d;
        }
    }
    if (n > 1) {
        if (!is_probable_prime(n))
            throw std::invalid_argument("group order has an unfactorable composite part");
        push(n);
    }
    return factors;
}

}  // namespace

void GroupParams::validate() const {
    if (!is_probable_prime(p)) throw std::invalid_argument("group: p is not prime");
    if (g < 2 || g > p - 2) throw std::invalid_argument("group: g out of range [2, p-2]");
    if (q < 2) throw std::invalid_argument("group: q must be >= 2");
    if ((p - 1) % q != 0) throw std::invalid_argument("group: q does not divide p-1");
    if (powm(g, q, p) != 1) throw std::invalid_argument("group: g^q != 1 mod p");
    for (const BigInt& r : distinct_prime_factors(q)) {
        if (powm(g, q / r, p) == 1)
            throw std::invalid_argument("group: g has order smaller than q");
    }
}

size_t GroupParams::message_chunk_bits() const {
    size_t bits = msb(p);  // p has msb(p)+1 bits; values below 2^msb(p) are < p
    return bits;
}

GroupParams GroupParams::toy() {
    return GroupParams{23, 5, 22};
}

GroupParams GroupParams::sim64() {
    // Safe prime just below 2^63 with p = 7 mod 8, so g=2 generates the
    // prime-order subgroup of size q=(p-1)/2. Big enough for multi-byte
    // plaintext chunks, small enough that simulated handshakes stay cheap.
    return GroupParams{BigInt("9223372036854771239"), 2, BigInt("4611686018427385619")};
}

GroupParams GroupParams::modp2048() {
    // RFC 3526, 2048-bit MODP group (id 14). g=2 generates the prime-order
    // subgroup of size q=(p-1)/2 because p = 7 mod 8.
    static const char* kHex =
        "0xFFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
        "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
        "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
        "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
        "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D"
        "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F"
        "83655D23DCA3AD961C62F356208552BB9ED529077096966D"
        "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
        "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9"
        "DE2BCBF6955817183995497CEA956AE515D2261898FA0510"
        "15728E5A8AACAA68FFFFFFFFFFFFFFFF";
    GroupParams gp;
    gp.p = BigInt(kHex);
    gp.g = 2;
    gp.q = (gp.p - 1) / 2;
    return gp;
}

BigInt uniform_bigint(Rng& rng, const BigInt& lo, const BigInt& hi) {
    if (lo > hi) throw std::invalid_argument("uniform_bigint: empty range");
    BigInt range = hi - lo + 1;
    size_t bits = msb(range) + 1;
    while (true) {
        BigInt v = 0;
        for (size_t consumed = 0; consumed < bits; consumed += 64) {
            v <<= 64;
            v |= rng.next_u64();
        }
        size_t drawn = (bits + 63) / 64 * 64;
        v >>= drawn - bits;
        if (v < range) return lo + v;
    }
}

KeyPair keypair_from_private(const GroupParams& params, const BigInt& private_key) {
    if (private_key < 1 || private_key > params.q - 1)
        throw std::invalid_argument("private key must be in [1, q-1]");
    return KeyPair{private_key, powm(params.g, private_key, params.p)};
}

KeyPair keygen(const GroupParams& params, Rng& rng) {
    params.validate();
    return keypair_from_private(params, uniform_bigint(rng, 1, params.q - 1));
}

Ciphertext encrypt_with_k(const GroupParams& params, const BigInt& recipient_public,
                          const BigInt& message, const BigInt& k) {
    if (message <= 0 || message >= params.p)
        throw std::domain_error("encrypt: message must be in (0, p)");
    if (k < 1 || k > params.q - 1)
        throw std::domain_error("encrypt: ephemeral k must be in [1, q-1]");
    Ciphertext ct;
    ct.c1 = powm(params.g, k, params.p);
    // Materialized: this Boost release rejects powm nested in a larger expression
    BigInt mask = powm(recipient_public, k, params.p);
    ct.c2 = message * mask % params.p;
    return ct;
}

Ciphertext encrypt(const GroupParams& params, const BigInt& recipient_public,
                   const BigInt& message, Rng& rng) {
    return encrypt_with_k(params, recipient_public, message,
                          uniform_bigint(rng, 1, params.q - 1));
}

BigInt decrypt(const GroupParams& params, const BigInt& private_key, const Ciphertext& ct) {
    if (ct.c1 <= 0 || ct.c1 >= params.p || ct.c2 <= 0 || ct.c2 >= params.p)
        throw std::domain_error("decrypt: ciphertext components must be in (0, p)");
    BigInt shared = powm(ct.c1, private_key, params.p);
    BigInt inv = powm(shared, params.p - 2, params.p);  // p prime
    return ct.c2 * inv % params.p;
}

EncryptedBlob encrypt_bytes(const GroupParams& params, const BigInt& recipient_public,
                            const Bytes& message, Rng& rng) {
    const size_t chunk_bits = params.message_chunk_bits();
    EncryptedBlob blob;
    blob.n_bytes = static_cast<uint32_t>(message.size());
    const size_t total_bits = message.size() * 8;
    auto bit_at = [&](size_t i) -> unsigned {
        return (message[i / 8] >> (7 - i % 8)) & 1u;
    };
    for (size_t start = 0; start < total_bits; start += chunk_bits) {
        BigInt v = 0;
        for (size_t i = start; i < std::min(start + chunk_bits, total_bits); ++i)
            v = v << 1 | bit_at(i);
        // +1 keeps the plaintext in (0, p) even for all-zero chunks
        blob.chunks.push_back(encrypt(params, recipient_public, v + 1, rng));
    }
    return blob;
}

Bytes decrypt_bytes(const GroupParams& params, const BigInt& private_key,
                    const EncryptedBlob& blob) {
    const size_t chunk_bits = params.message_chunk_bits();
    const size_t total_bits = blob.n_bytes * 8;
    const size_t expected_chunks = total_bits == 0 ? 0 : (total_bits + chunk_bits - 1) / chunk_bits;
    if (blob.chunks.size() != expected_chunks)
        throw std::domain_error("decrypt_bytes: chunk count does not match length");
    Bytes out(blob.n_bytes, 0);
    size_t bit_pos = 0;
    for (const Ciphertext& ct : blob.chunks) {
        BigInt v = decrypt(params, private_key, ct) - 1;
        size_t n = std::min(chunk_bits, total_bits - bit_pos);
        for (size_t i = 0; i < n; ++i) {
            size_t pos = bit_pos + i;
            unsigned bit = static_cast<unsigned>((v >> (n - 1 - i)) & 1);
            out[pos / 8] |= static_cast<uint8_t>(bit << (7 - pos % 8));
        }
        bit_pos += n;
    }
    return out;
}

}  // namespace atmas::crypto
