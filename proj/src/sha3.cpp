#include "ledakem/sha3.hpp"

#include <stdexcept>

namespace ledakem {

namespace {

constexpr std::array<uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr std::array<int, 25> kRotations = {
    0,  1,  62, 28, 27, 36, 44, 6,  55, 20, 3,  10, 43,
    25, 39, 41, 45, 15, 21, 8,  18, 2,  61, 56, 14,
};

inline uint64_t rotl64(uint64_t x, int s) {
    return s == 0 ? x : (x << s) | (x >> (64 - s));
}

// Lanes are little-endian byte strings per the Keccak convention.
inline uint8_t state_byte(const std::array<uint64_t, 25>& st, size_t i) {
    return static_cast<uint8_t>(st[i >> 3] >> (8 * (i & 7)));
}

inline void state_xor_byte(std::array<uint64_t, 25>& st, size_t i, uint8_t v) {
    st[i >> 3] ^= static_cast<uint64_t>(v) << (8 * (i & 7));
}

}  // namespace

void keccak_f1600(std::array<uint64_t, 25>& a) {
    for (int round = 0; round < 24; ++round) {
        // theta
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) {
            uint64_t d = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
            for (int y = 0; y < 5; ++y) a[x + 5 * y] ^= d;
        }
        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl64(a[x + 5 * y], kRotations[x + 5 * y]);
        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                a[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
        // iota
        a[0] ^= kRoundConstants[round];
    }
}

KeccakSponge::KeccakSponge(size_t rate_bytes, uint8_t domain_suffix)
    : rate_(rate_bytes), suffix_(domain_suffix) {
    if (rate_ == 0 || rate_ >= 200 || rate_ % 8 != 0)
        throw std::invalid_argument("keccak: bad rate");
}

void KeccakSponge::absorb(std::span<const uint8_t> data) {
    if (finalized_) throw std::logic_error("keccak: absorb after finalize");
    for (uint8_t byte : data) {
        state_xor_byte(state_, offset_++, byte);
        if (offset_ == rate_) {
            keccak_f1600(state_);
            offset_ = 0;
        }
    }
}

void KeccakSponge::finalize() {
    if (finalized_) throw std::logic_error("keccak: double finalize");
    state_xor_byte(state_, offset_, suffix_);
    state_xor_byte(state_, rate_ - 1, 0x80);
    keccak_f1600(state_);
    offset_ = 0;
    finalized_ = true;
}

void KeccakSponge::squeeze(std::span<uint8_t> out) {
    if (!finalized_) throw std::logic_error("keccak: squeeze before finalize");
    for (auto& byte : out) {
        if (offset_ == rate_) {
            keccak_f1600(state_);
            offset_ = 0;
        }
        byte = state_byte(state_, offset_++);
    }
}

namespace {

template <size_t N>
std::array<uint8_t, N> sha3_fixed(std::span<const uint8_t> data) {
    KeccakSponge sponge(200 - 2 * N, 0x06);
    sponge.absorb(data);
    sponge.finalize();
    std::array<uint8_t, N> out;
    sponge.squeeze(out);
    return out;
}

}  // namespace

std::array<uint8_t, 32> sha3_256(std::span<const uint8_t> data) { return sha3_fixed<32>(data); }
std::array<uint8_t, 48> sha3_384(std::span<const uint8_t> data) { return sha3_fixed<48>(data); }
std::array<uint8_t, 64> sha3_512(std::span<const uint8_t> data) { return sha3_fixed<64>(data); }

std::vector<uint8_t> shake256(std::span<const uint8_t> data, size_t out_len) {
    Shake256 xof;
    xof.absorb(data);
    xof.finalize();
    std::vector<uint8_t> out(out_len);
    xof.squeeze(out);
    return out;
}

}  // namespace ledakem
