#include "ledakem/ring.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ledakem {

namespace {

void require_same_modulus(uint32_t pa, uint32_t pb) {
    if (pa != pb) throw std::invalid_argument("ring: mismatched modulus p");
    if (pa == 0) throw std::invalid_argument("ring: uninitialized element");
}

uint64_t pad_mask(uint32_t p) {
    uint32_t used = p & 63;
    return used == 0 ? ~uint64_t{0} : (uint64_t{1} << used) - 1;
}

// acc ^= src << shift, where acc is long enough to take every produced bit.
void xor_shifted(std::span<uint64_t> acc, std::span<const uint64_t> src, uint32_t shift) {
    size_t word_shift = shift >> 6;
    uint32_t bit_shift = shift & 63;
    if (bit_shift == 0) {
        for (size_t i = 0; i < src.size(); ++i) acc[i + word_shift] ^= src[i];
        return;
    }
    uint64_t carry = 0;
    for (size_t i = 0; i < src.size(); ++i) {
        acc[i + word_shift] ^= (src[i] << bit_shift) | carry;
        carry = src[i] >> (64 - bit_shift);
    }
    if (carry != 0) acc[src.size() + word_shift] ^= carry;
}

// Reduce a 2p-bit product accumulator mod x^p + 1: bit (p+i) folds onto bit i.
RingElement fold_mod(uint32_t p, std::span<const uint64_t> acc) {
    RingElement out(p);
    auto out_words = out.words();
    size_t nw = out_words.size();
    for (size_t i = 0; i < nw && i < acc.size(); ++i) out_words[i] = acc[i];

    size_t word_shift = p >> 6;
    uint32_t bit_shift = p & 63;
    for (size_t i = 0; i < nw; ++i) {
        size_t j = i + word_shift;
        uint64_t hi = 0;
        if (j < acc.size()) hi = acc[j] >> bit_shift;
        if (bit_shift != 0 && j + 1 < acc.size()) hi |= acc[j + 1] << (64 - bit_shift);
        out_words[i] ^= hi;
    }
    out_words[nw - 1] &= pad_mask(p);
    return out;
}

int64_t poly_degree(std::span<const uint64_t> w, int64_t upper_bound) {
    int64_t word = std::min<int64_t>(upper_bound >> 6, static_cast<int64_t>(w.size()) - 1);
    for (; word >= 0; --word) {
        if (w[word] != 0)
            return word * 64 + (63 - std::countl_zero(w[word]));
    }
    return -1;
}

}  // namespace

RingElement RingElement::one(uint32_t p) {
    RingElement e(p);
    e.set_bit(0);
    return e;
}

RingElement RingElement::monomial(uint32_t p, uint32_t exponent) {
    if (exponent >= p) throw std::invalid_argument("ring: exponent out of range");
    RingElement e(p);
    e.set_bit(exponent);
    return e;
}

RingElement RingElement::all_ones(uint32_t p) {
    RingElement e(p);
    auto w = e.words();
    for (auto& word : w) word = ~uint64_t{0};
    w[w.size() - 1] &= pad_mask(p);
    return e;
}

uint32_t RingElement::weight() const {
    uint32_t acc = 0;
    for (uint64_t word : w_) acc += static_cast<uint32_t>(std::popcount(word));
    return acc;
}

bool RingElement::is_zero() const {
    for (uint64_t word : w_)
        if (word != 0) return false;
    return true;
}

bool RingElement::padding_clean() const {
    if (w_.empty()) return true;
    return (w_.back() & ~pad_mask(p_)) == 0;
}

std::vector<uint8_t> RingElement::to_bytes() const {
    std::vector<uint8_t> out(w_.size() * 8);
    for (size_t i = 0; i < w_.size(); ++i)
        for (int b = 0; b < 8; ++b)
            out[i * 8 + b] = static_cast<uint8_t>(w_[i] >> (8 * b));
    return out;
}

RingElement RingElement::from_bytes(uint32_t p, std::span<const uint8_t> bytes) {
    RingElement e(p);
    if (bytes.size() != e.w_.size() * 8)
        throw std::invalid_argument("ring: serialized element has wrong length");
    for (size_t i = 0; i < e.w_.size(); ++i) {
        uint64_t word = 0;
        for (int b = 0; b < 8; ++b)
            word |= static_cast<uint64_t>(bytes[i * 8 + b]) << (8 * b);
        e.w_[i] = word;
    }
    if (!e.padding_clean())
        throw std::invalid_argument("ring: nonzero padding bits in serialized element");
    return e;
}

SparseRingElement::SparseRingElement(uint32_t p, std::vector<uint32_t> positions)
    : p_(p), pos_(std::move(positions)) {
    if (p_ == 0) throw std::invalid_argument("ring: modulus must be positive");
    for (size_t i = 0; i < pos_.size(); ++i) {
        if (pos_[i] >= p_) throw std::invalid_argument("ring: sparse position out of range");
        if (i > 0 && pos_[i] <= pos_[i - 1])
            throw std::invalid_argument("ring: sparse positions must be strictly increasing");
    }
}

RingElement SparseRingElement::densify() const {
    RingElement e(p_);
    for (uint32_t pos : pos_) e.set_bit(pos);
    return e;
}

SparseRingElement SparseRingElement::sparsify(const RingElement& dense) {
    std::vector<uint32_t> pos;
    pos.reserve(dense.weight());
    auto words = dense.words();
    for (size_t i = 0; i < words.size(); ++i) {
        uint64_t word = words[i];
        while (word != 0) {
            pos.push_back(static_cast<uint32_t>(i * 64 + std::countr_zero(word)));
            word &= word - 1;
        }
    }
    return SparseRingElement(dense.modulus(), std::move(pos));
}

RingElement add(const RingElement& a, const RingElement& b) {
    require_same_modulus(a.modulus(), b.modulus());
    RingElement out = a;
    auto ow = out.words();
    auto bw = b.words();
    for (size_t i = 0; i < ow.size(); ++i) ow[i] ^= bw[i];
    return out;
}

RingElement mul_dense(const RingElement& a, const RingElement& b) {
    require_same_modulus(a.modulus(), b.modulus());
    uint32_t p = a.modulus();
    // Walk the set bits of the lighter operand, accumulating shifted copies of
    // the other into a 2p-bit scratch, then fold.
    const RingElement& walk = a.weight() <= b.weight() ? a : b;
    const RingElement& base = &walk == &a ? b : a;
    std::vector<uint64_t> acc((2 * static_cast<size_t>(p) + 63) / 64 + 1, 0);
    auto walk_words = walk.words();
    for (size_t i = 0; i < walk_words.size(); ++i) {
        uint64_t word = walk_words[i];
        while (word != 0) {
            uint32_t k = static_cast<uint32_t>(i * 64 + std::countr_zero(word));
            word &= word - 1;
            xor_shifted(acc, base.words(), k);
        }
    }
    return fold_mod(p, acc);
}

RingElement mul(const SparseRingElement& a, const RingElement& b) {
    require_same_modulus(a.modulus(), b.modulus());
    uint32_t p = b.modulus();
    std::vector<uint64_t> acc((2 * static_cast<size_t>(p) + 63) / 64 + 1, 0);
    for (uint32_t k : a.positions()) xor_shifted(acc, b.words(), k);
    return fold_mod(p, acc);
}

SparseRingElement mul(const SparseRingElement& a, const SparseRingElement& b) {
    require_same_modulus(a.modulus(), b.modulus());
    uint32_t p = a.modulus();
    std::vector<uint32_t> sums;
    sums.reserve(static_cast<size_t>(a.weight()) * b.weight());
    for (uint32_t i : a.positions())
        for (uint32_t j : b.positions()) {
            uint32_t s = i + j;
            sums.push_back(s >= p ? s - p : s);
        }
    std::sort(sums.begin(), sums.end());
    // Pairs cancel in characteristic 2.
    std::vector<uint32_t> kept;
    for (size_t i = 0; i < sums.size();) {
        size_t j = i;
        while (j < sums.size() && sums[j] == sums[i]) ++j;
        if ((j - i) & 1) kept.push_back(sums[i]);
        i = j;
    }
    return SparseRingElement(p, std::move(kept));
}

RingElement transpose(const RingElement& a) {
    uint32_t p = a.modulus();
    RingElement out(p);
    if (a.bit(0)) out.set_bit(0);
    for (uint32_t i = 1; i < p; ++i)
        if (a.bit(i)) out.set_bit(p - i);
    return out;
}

SparseRingElement transpose(const SparseRingElement& a) {
    uint32_t p = a.modulus();
    std::vector<uint32_t> pos;
    pos.reserve(a.weight());
    for (uint32_t i : a.positions()) pos.push_back(i == 0 ? 0 : p - i);
    std::sort(pos.begin(), pos.end());
    return SparseRingElement(p, std::move(pos));
}

std::optional<RingElement> inverse(const RingElement& a) {
    uint32_t p = a.modulus();
    if (p == 0) throw std::invalid_argument("ring: uninitialized element");
    if (a.is_zero()) return std::nullopt;

    // f = x^p + 1, g = a; maintain u*a = f and v*a = g (mod x^p + 1).
    size_t nw = (static_cast<size_t>(p) + 64) / 64;  // p + 1 bits
    std::vector<uint64_t> f(nw, 0), g(nw, 0), u(nw, 0), v(nw, 0);
    f[0] = 1;
    f[p >> 6] |= uint64_t{1} << (p & 63);
    auto aw = a.words();
    std::copy(aw.begin(), aw.end(), g.begin());
    v[0] = 1;

    int64_t df = p;
    int64_t dg = poly_degree(g, p - 1);
    // Degree upper bounds for the cofactors, to size the shifted XORs.
    int64_t du = -1, dv = 0;

    while (true) {
        if (df < dg) {
            f.swap(g);
            u.swap(v);
            std::swap(df, dg);
            std::swap(du, dv);
        }
        if (dg < 0) return std::nullopt;  // g vanished: gcd is f with deg >= 1
        if (dg == 0) break;               // g == 1, v is the inverse
        uint32_t shift = static_cast<uint32_t>(df - dg);
        size_t g_words = static_cast<size_t>(dg >> 6) + 1;
        xor_shifted(std::span(f), std::span(g).first(g_words), shift);
        if (dv >= 0) {
            size_t v_words = static_cast<size_t>(dv >> 6) + 1;
            xor_shifted(std::span(u), std::span(v).first(v_words), shift);
            du = std::max(du, dv + shift);
        }
        df = poly_degree(f, df - 1);
    }

    if ((v[p >> 6] >> (p & 63)) & 1)
        throw std::logic_error("ring: inverse cofactor exceeded modulus degree");
    RingElement out(p);
    auto ow = out.words();
    for (size_t i = 0; i < ow.size(); ++i) ow[i] = v[i];
    return out;
}

uint32_t weight(const RingElement& a) { return a.weight(); }
uint32_t weight(const SparseRingElement& a) { return a.weight(); }

}  // namespace ledakem
