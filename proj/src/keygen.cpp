#include "ledakem/keygen.hpp"

#include <stdexcept>

#include "ledakem/rng.hpp"

namespace ledakem {

namespace {

constexpr uint32_t kMaxKeygenAttempts = 16;

}  // namespace

PrivateKey expand_private(const ParamSet& ps, std::span<const uint8_t> seed) {
    if (seed.size() != ps.seed_bytes)
        throw std::invalid_argument("keygen: seed length does not match category");

    Drbg drbg(seed);
    auto wq = ps.weight_matrix();

    PrivateKey sk;
    sk.seed.assign(seed.begin(), seed.end());

    for (sk.attempts = 1; sk.attempts <= kMaxKeygenAttempts; ++sk.attempts) {
        sk.h.clear();
        sk.q.clear();
        for (uint32_t i = 0; i < ps.n0; ++i) sk.h.push_back(sample_sparse(drbg, ps.p, ps.dv));
        for (uint32_t i = 0; i < ps.n0; ++i) {
            std::vector<SparseRingElement> row;
            for (uint32_t j = 0; j < ps.n0; ++j) row.push_back(sample_sparse(drbg, ps.p, wq[i][j]));
            sk.q.push_back(std::move(row));
        }
        sk.failure_secret.resize(ps.ss_bytes);
        drbg.bytes(sk.failure_secret);

        sk.l.clear();
        for (uint32_t j = 0; j < ps.n0; ++j) {
            SparseRingElement block = mul(sk.h[0], sk.q[0][j]);
            for (uint32_t i = 1; i < ps.n0; ++i) {
                RingElement acc = block.densify();
                acc = add(acc, mul(sk.h[i], sk.q[i][j]).densify());
                block = SparseRingElement::sparsify(acc);
            }
            sk.l.push_back(std::move(block));
        }

        sk.l_last_dense = sk.l.back().densify();
        auto inv = inverse(sk.l_last_dense);
        if (!inv) continue;  // singular last block: continue the seed stream
        sk.l_last_inverse = std::move(*inv);

        sk.l_transposed.clear();
        for (const auto& block : sk.l) sk.l_transposed.push_back(transpose(block));
        return sk;
    }
    throw std::runtime_error("keygen: no invertible last product block after 16 attempts");
}

PublicKey derive_public(const ParamSet& ps, const PrivateKey& sk) {
    PublicKey pk;
    for (uint32_t j = 0; j + 1 < ps.n0; ++j)
        pk.m.push_back(mul(sk.l[j], sk.l_last_inverse));
    return pk;
}

KeyPair gen_keypair(const ParamSet& ps, std::span<const uint8_t> seed) {
    KeyPair kp;
    kp.sk = expand_private(ps, seed);
    kp.pk = derive_public(ps, kp.sk);
    return kp;
}

std::vector<uint8_t> public_key_bytes(const PublicKey& pk) {
    std::vector<uint8_t> out;
    for (const auto& block : pk.m) {
        auto bytes = block.to_bytes();
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

PublicKey public_key_from_bytes(const ParamSet& ps, std::span<const uint8_t> bytes) {
    if (bytes.size() != ps.public_key_bytes())
        throw std::invalid_argument("keygen: public key payload has wrong length");
    PublicKey pk;
    size_t per_block = ps.block_bytes();
    for (uint32_t j = 0; j + 1 < ps.n0; ++j)
        pk.m.push_back(RingElement::from_bytes(ps.p, bytes.subspan(j * per_block, per_block)));
    return pk;
}

}  // namespace ledakem
