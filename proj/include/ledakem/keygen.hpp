#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ledakem/params.hpp"
#include "ledakem/ring.hpp"

namespace ledakem {

// Secret material expanded from the seed: the sparse parity blocks h[i]
// (weight dv each), the sparse transformation blocks q[i][j] (weights given
// by the circulant weight matrix), and everything decryption needs cached:
// the product blocks l[j] = sum_i h[i]*q[i][j], the dense last block with its
// inverse, the transposed product blocks the decoder updates syndromes with,
// and the failure secret for decapsulation's failure-hiding path.
struct PrivateKey {
    std::vector<uint8_t> seed;
    std::vector<SparseRingElement> h;               // n0 blocks
    std::vector<std::vector<SparseRingElement>> q;  // n0 x n0, row major
    std::vector<SparseRingElement> l;               // n0 blocks of H*Q
    std::vector<SparseRingElement> l_transposed;    // transpose(l[j])
    RingElement l_last_dense;
    RingElement l_last_inverse;
    std::vector<uint8_t> failure_secret;  // ss_bytes, drawn from the seed stream
    uint32_t attempts = 0;                // seed-stream regenerations used
};

struct PublicKey {
    std::vector<RingElement> m;  // n0-1 dense blocks; the implicit last block is 1
};

struct KeyPair {
    PrivateKey sk;
    PublicKey pk;
};

// Deterministic expansion of the full private key from its seed. Draw order
// is h[0..n0), then q row-major, then the failure secret; if the last product
// block comes out singular the stream simply continues into a fresh attempt.
// Throws std::runtime_error after 16 failed attempts and
// std::invalid_argument on a wrong-length seed.
PrivateKey expand_private(const ParamSet& ps, std::span<const uint8_t> seed);

PublicKey derive_public(const ParamSet& ps, const PrivateKey& sk);

KeyPair gen_keypair(const ParamSet& ps, std::span<const uint8_t> seed);

// Concatenated word-padded blocks: (n0-1) * ceil(p/64) * 8 bytes.
std::vector<uint8_t> public_key_bytes(const PublicKey& pk);

PublicKey public_key_from_bytes(const ParamSet& ps, std::span<const uint8_t> bytes);

}  // namespace ledakem
