#include "atmas/crypto/fuzzy.hpp"

#include <stdexcept>

namespace atmas::crypto {

namespace {

void check_shape(size_t n_bits, int repetition) {
    if (repetition < 1 || repetition % 2 == 0)
        throw std::domain_error("fuzzy: repetition factor must be odd");
    if (n_bits == 0 || n_bits % static_cast<size_t>(repetition) != 0)
        throw std::domain_error("fuzzy: template length must be a positive multiple of the repetition factor");
}

Bytes pack_bits(const std::vector<uint8_t>& bits) {
    Bytes out((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i / 8] |= static_cast<uint8_t>(1u << (7 - i % 8));
    return out;
}

}  // namespace

FuzzyEnrollment fuzzy_gen(const BiometricTemplate& bio, int repetition, Rng& rng) {
    check_shape(bio.bits.size(), repetition);
    const size_t n_blocks = bio.bits.size() / static_cast<size_t>(repetition);

    std::vector<uint8_t> key_bits(n_blocks);
    for (auto& b : key_bits) b = static_cast<uint8_t>(rng.next_u64() & 1);

    FuzzyEnrollment out;
    out.helper.resize(bio.bits.size());
    for (size_t i = 0; i < bio.bits.size(); ++i) {
        uint8_t code_bit = key_bits[i / static_cast<size_t>(repetition)];
        out.helper[i] = bio.bits[i] ^ code_bit;
    }
    out.key = pack_bits(key_bits);
    return out;
}

Bytes fuzzy_rep(const BiometricTemplate& reading, const std::vector<uint8_t>& helper,
                int repetition) {
    check_shape(helper.size(), repetition);
    if (reading.bits.size() != helper.size())
        throw std::domain_error("fuzzy: reading length does not match helper length");

    const size_t n_blocks = helper.size() / static_cast<size_t>(repetition);
    std::vector<uint8_t> key_bits(n_blocks);
    for (size_t b = 0; b < n_blocks; ++b) {
        int ones = 0;
        for (int i = 0; i < repetition; ++i) {
            size_t pos = b * static_cast<size_t>(repetition) + static_cast<size_t>(i);
            ones += reading.bits[pos] ^ helper[pos];
        }
        key_bits[b] = ones * 2 > repetition ? 1 : 0;  // majority vote
    }
    return pack_bits(key_bits);
}

int hamming_distance(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    if (a.size() != b.size()) throw std::domain_error("hamming_distance: length mismatch");
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]) != 0;
    return d;
}

}  // namespace atmas::crypto
