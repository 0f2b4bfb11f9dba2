#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ledakem {

// Keccak-f[1600] sponge: SHA-3 fixed-length digests and the SHAKE-256 XOF.
// Self-contained so the DRBG and the KDF share one primitive family.

void keccak_f1600(std::array<uint64_t, 25>& state);

class KeccakSponge {
public:
    KeccakSponge(size_t rate_bytes, uint8_t domain_suffix);

    void absorb(std::span<const uint8_t> data);
    void finalize();
    void squeeze(std::span<uint8_t> out);

    bool finalized() const { return finalized_; }

private:
    std::array<uint64_t, 25> state_{};
    size_t rate_ = 0;
    uint8_t suffix_ = 0;
    size_t offset_ = 0;  // absorb or squeeze position within the rate block
    bool finalized_ = false;
};

class Shake256 {
public:
    Shake256() : sponge_(136, 0x1f) {}

    void absorb(std::span<const uint8_t> data) { sponge_.absorb(data); }
    void finalize() { sponge_.finalize(); }
    void squeeze(std::span<uint8_t> out) { sponge_.squeeze(out); }

private:
    KeccakSponge sponge_;
};

std::array<uint8_t, 32> sha3_256(std::span<const uint8_t> data);
std::array<uint8_t, 48> sha3_384(std::span<const uint8_t> data);
std::array<uint8_t, 64> sha3_512(std::span<const uint8_t> data);

// One-shot SHAKE-256.
std::vector<uint8_t> shake256(std::span<const uint8_t> data, size_t out_len);

}  // namespace ledakem
