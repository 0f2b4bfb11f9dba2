#include "ledakem/rng.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ledakem {

Drbg::Drbg(std::span<const uint8_t> seed) {
    if (seed.size() != 24 && seed.size() != 32 && seed.size() != 40)
        throw std::invalid_argument("drbg: seed length must be 24, 32 or 40 bytes");
    xof_.absorb(seed);
    xof_.finalize();
    refill();
}

void Drbg::refill() {
    xof_.squeeze(buffer_);
    bit_pos_ = 0;
}

uint64_t Drbg::bits(unsigned k) {
    if (k > 64) throw std::invalid_argument("drbg: at most 64 bits per draw");
    uint64_t value = 0;
    for (unsigned got = 0; got < k;) {
        if (bit_pos_ == buffer_.size() * 8) refill();
        size_t byte = bit_pos_ >> 3;
        unsigned offset = bit_pos_ & 7;
        unsigned take = std::min<unsigned>(8 - offset, k - got);
        uint64_t chunk = (buffer_[byte] >> offset) & ((uint64_t{1} << take) - 1);
        value |= chunk << got;
        got += take;
        bit_pos_ += take;
    }
    return value;
}

void Drbg::bytes(std::span<uint8_t> out) {
    for (auto& b : out) b = static_cast<uint8_t>(bits(8));
}

uint64_t Drbg::uniform(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("drbg: empty range");
    unsigned width = std::bit_width(bound - 1);
    if (width == 0) return 0;
    for (;;) {
        uint64_t v = bits(width);
        if (v < bound) return v;
    }
}

namespace {

std::vector<uint32_t> sample_distinct(Drbg& drbg, uint64_t range, uint32_t count) {
    if (count > range) throw std::invalid_argument("sampling: weight exceeds range");
    std::vector<uint32_t> picked;
    picked.reserve(count);
    while (picked.size() < count) {
        auto v = static_cast<uint32_t>(drbg.uniform(range));
        if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

SparseRingElement sample_sparse(Drbg& drbg, uint32_t p, uint32_t w) {
    return SparseRingElement(p, sample_distinct(drbg, p, w));
}

std::vector<uint32_t> sample_error(Drbg& drbg, uint64_t n, uint32_t t) {
    return sample_distinct(drbg, n, t);
}

std::vector<uint8_t> kdf(std::span<const uint8_t> input, size_t out_len) {
    switch (out_len) {
        case 32: {
            auto d = sha3_256(input);
            return {d.begin(), d.end()};
        }
        case 48: {
            auto d = sha3_384(input);
            return {d.begin(), d.end()};
        }
        case 64: {
            auto d = sha3_512(input);
            return {d.begin(), d.end()};
        }
        default:
            throw std::invalid_argument("kdf: output length must be 32, 48 or 64");
    }
}

}  // namespace ledakem
