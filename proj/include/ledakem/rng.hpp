#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ledakem/ring.hpp"
#include "ledakem/sha3.hpp"

namespace ledakem {

// Deterministic random bit generator: SHAKE-256 applied to the seed and
// consumed as a bit stream, little-endian within each squeezed byte. The same
// seed always yields the same stream, byte-order independent, so a private
// key at rest is just its seed.
//
// A Drbg is single-owner while a stream is being consumed; run independent
// instances for concurrent work.
class Drbg {
public:
    // Accepted seed lengths are the per-category ones (24/32/40 bytes).
    explicit Drbg(std::span<const uint8_t> seed);

    // k <= 64 bits, first-drawn bit in the least significant position.
    uint64_t bits(unsigned k);

    void bytes(std::span<uint8_t> out);

    // Uniform value in [0, bound) via fixed-width draws with rejection.
    uint64_t uniform(uint64_t bound);

private:
    void refill();

    Shake256 xof_;
    std::array<uint8_t, 136> buffer_{};
    size_t bit_pos_ = 0;  // consumed bits within buffer_
};

// Exactly w distinct exponents in [0, p), uniform over weight-w patterns:
// indices drawn as ceil(log2 p)-bit integers, rejecting out-of-range values
// and duplicates.
SparseRingElement sample_sparse(Drbg& drbg, uint32_t p, uint32_t w);

// Exactly t distinct positions in [0, n), sorted.
std::vector<uint32_t> sample_error(Drbg& drbg, uint64_t n, uint32_t t);

// SHA-3 digest of the input; out_len selects SHA3-256/384/512.
std::vector<uint8_t> kdf(std::span<const uint8_t> input, size_t out_len);

}  // namespace ledakem
