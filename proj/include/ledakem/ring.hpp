#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ledakem {

// Arithmetic in F2[x]/<x^p + 1>, the ring isomorphic to p x p binary circulant
// matrices. Dense elements are bit packed (coefficient of x^i at logical bit i,
// little-endian within 64-bit words, pad bits above p kept zero); sparse
// elements store the sorted exponents of their nonzero coefficients.

struct RingParams {
    uint32_t p = 0;
    size_t words_per_element = 0;

    static constexpr uint32_t word_bits = 64;

    static RingParams for_modulus(uint32_t p) {
        return RingParams{p, (static_cast<size_t>(p) + word_bits - 1) / word_bits};
    }
};

class RingElement {
public:
    RingElement() = default;
    explicit RingElement(uint32_t p)
        : p_(p), w_((static_cast<size_t>(p) + 63) / 64, 0) {}

    static RingElement zero(uint32_t p) { return RingElement(p); }
    static RingElement one(uint32_t p);
    static RingElement monomial(uint32_t p, uint32_t exponent);
    static RingElement all_ones(uint32_t p);

    uint32_t modulus() const { return p_; }
    size_t word_count() const { return w_.size(); }
    std::span<const uint64_t> words() const { return w_; }
    std::span<uint64_t> words() { return w_; }

    bool bit(uint32_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set_bit(uint32_t i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
    void flip_bit(uint32_t i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

    uint32_t weight() const;
    bool is_zero() const;
    // True when every bit above position p-1 is zero.
    bool padding_clean() const;

    bool operator==(const RingElement&) const = default;

    // ceil(p/64)*8 bytes, word-padded, little-endian bit order.
    std::vector<uint8_t> to_bytes() const;
    // Throws std::invalid_argument on wrong length or nonzero pad bits.
    static RingElement from_bytes(uint32_t p, std::span<const uint8_t> bytes);

private:
    uint32_t p_ = 0;
    std::vector<uint64_t> w_;
};

class SparseRingElement {
public:
    SparseRingElement() = default;
    // Positions must be strictly increasing and < p; throws otherwise.
    SparseRingElement(uint32_t p, std::vector<uint32_t> positions);

    uint32_t modulus() const { return p_; }
    uint32_t weight() const { return static_cast<uint32_t>(pos_.size()); }
    std::span<const uint32_t> positions() const { return pos_; }

    RingElement densify() const;
    static SparseRingElement sparsify(const RingElement& dense);

    bool operator==(const SparseRingElement&) const = default;

private:
    uint32_t p_ = 0;
    std::vector<uint32_t> pos_;
};

RingElement add(const RingElement& a, const RingElement& b);

RingElement mul_dense(const RingElement& a, const RingElement& b);
RingElement mul(const SparseRingElement& a, const RingElement& b);
SparseRingElement mul(const SparseRingElement& a, const SparseRingElement& b);

// Circulant transpose: exponent i -> (p - i) mod p.
RingElement transpose(const RingElement& a);
SparseRingElement transpose(const SparseRingElement& a);

// Extended Euclidean inverse against x^p + 1; nullopt when the element is a
// zero divisor.
std::optional<RingElement> inverse(const RingElement& a);

uint32_t weight(const RingElement& a);
uint32_t weight(const SparseRingElement& a);

}  // namespace ledakem
