#pragma once

#include <vector>

#include "atmas/bytes.hpp"
#include "atmas/rng.hpp"

namespace atmas::crypto {

/// Noisy biometric reading as a bit string (one bit per element, 0/1).
/// `tolerance` is the per-block Hamming bound the extractor corrects.
struct BiometricTemplate {
    std::vector<uint8_t> bits;
    int tolerance = 0;
};

struct FuzzyEnrollment {
    Bytes key;                    // extracted key, packed MSB-first
    std::vector<uint8_t> helper;  // public helper string, one bit per element
};

// Code-offset construction over a block repetition code: the template is
// XOR-masked with the codeword of a random key, one key bit per block of
// `repetition` bits. Majority decoding recovers the key from any reading
// within floor(repetition/2) flips per block. `repetition` must be odd and
// divide the template length.
FuzzyEnrollment fuzzy_gen(const BiometricTemplate& bio, int repetition, Rng& rng);

// Recovers the enrolled key from a fresh reading; a reading beyond the
// correction capacity yields a different key, which surfaces downstream as a
// credential mismatch rather than an error here.
Bytes fuzzy_rep(const BiometricTemplate& reading, const std::vector<uint8_t>& helper,
                int repetition);

int hamming_distance(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b);

// Per-block correction capacity of the repetition code.
inline int fuzzy_capacity(int repetition) {
    return repetition / 2;
}

}  // namespace atmas::crypto
