#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "atmas/bytes.hpp"
#include "atmas/rng.hpp"

namespace atmas::crypto {

using BigInt = boost::multiprecision::cpp_int;

BigInt bigint_from_string(const std::string& s);  // decimal, or hex with 0x prefix
std::string bigint_to_string(const BigInt& v);
Bytes bigint_to_bytes(const BigInt& v);  // big-endian, minimal length ("0" -> empty)
BigInt bigint_from_bytes(const Bytes& b);

/// Multiplicative group parameters: generator g of order q modulo prime p.
struct GroupParams {
    BigInt p;
    BigInt g;
    BigInt q;

    // Throws std::invalid_argument unless p is prime, q divides p-1 and g has
    // order exactly q. Order verification needs q's factorization; q must be
    // prime or fully factorable by trial division (both default groups are).
    void validate() const;

    size_t message_chunk_bits() const;  // usable plaintext bits per element

    static GroupParams toy();       // p=23, g=5, full group q=22; exhaustive tests
    static GroupParams sim64();     // 64-bit safe prime; fast enough for sim runs
    static GroupParams modp2048();  // RFC 3526 group 14, prime-order subgroup
};

struct KeyPair {
    BigInt private_key;  // in [1, q-1]; never leaves the owning entity
    BigInt public_key;   // g^private mod p
};

struct Ciphertext {
    BigInt c1;
    BigInt c2;
};

// Encrypted byte string: each chunk of message_chunk_bits() bits is carried by
// one ElGamal element, so arbitrary digests fit even in the toy group.
struct EncryptedBlob {
    uint32_t n_bytes = 0;
    std::vector<Ciphertext> chunks;
};

KeyPair keygen(const GroupParams& params, Rng& rng);
KeyPair keypair_from_private(const GroupParams& params, const BigInt& private_key);

Ciphertext encrypt(const GroupParams& params, const BigInt& recipient_public,
                   const BigInt& message, Rng& rng);
Ciphertext encrypt_with_k(const GroupParams& params, const BigInt& recipient_public,
                          const BigInt& message, const BigInt& k);
BigInt decrypt(const GroupParams& params, const BigInt& private_key, const Ciphertext& ct);

EncryptedBlob encrypt_bytes(const GroupParams& params, const BigInt& recipient_public,
                            const Bytes& message, Rng& rng);
Bytes decrypt_bytes(const GroupParams& params, const BigInt& private_key,
                    const EncryptedBlob& blob);

// Uniform in [lo, hi] by rejection sampling over the covering power of two.
BigInt uniform_bigint(Rng& rng, const BigInt& lo, const BigInt& hi);

}  // namespace atmas::crypto
