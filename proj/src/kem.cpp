#include "ledakem/kem.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ledakem {

namespace {

// Hash-input domain tags; internal to the KDF input, never emitted.
constexpr uint8_t kTagSuccess = 0x01;
constexpr uint8_t kTagFailure = 0x00;

std::string table_cache_key(const ParamSet& ps) {
    std::ostringstream key;
    key << ps.p << ':' << ps.n0 << ':' << ps.dv << ':' << ps.t << ':' << ps.delta;
    for (uint32_t mi : ps.m_vec) key << ':' << mi;
    return key.str();
}

std::vector<SparseRingElement> split_error(const ParamSet& ps,
                                           std::span<const uint32_t> positions) {
    std::vector<std::vector<uint32_t>> chunks(ps.n0);
    for (uint32_t v : positions) {
        if (v >= ps.n()) throw std::invalid_argument("kem: error position out of range");
        chunks[v / ps.p].push_back(v % ps.p);
    }
    std::vector<SparseRingElement> blocks;
    blocks.reserve(ps.n0);
    for (auto& chunk : chunks) blocks.emplace_back(ps.p, std::move(chunk));
    return blocks;
}

}  // namespace

const ThresholdTable& thresholds_for(const ParamSet& ps) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<const ThresholdTable>> cache;
    std::lock_guard lock(mu);
    auto key = table_cache_key(ps);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<const ThresholdTable>(build_threshold_table(ps)))
                 .first;
    return *it->second;
}

RingElement syndrome_from_error(const PublicKey& pk, const ParamSet& ps,
                                std::span<const uint32_t> error_positions) {
    if (pk.m.size() + 1 != ps.n0)
        throw std::invalid_argument("kem: public key does not match parameter set");
    auto blocks = split_error(ps, error_positions);
    RingElement s(ps.p);
    for (uint32_t j = 0; j + 1 < ps.n0; ++j)
        s = add(s, mul(transpose(blocks[j]), pk.m[j]));
    // The implicit identity block contributes the transposed chunk directly.
    SparseRingElement last = transpose(blocks[ps.n0 - 1]);
    for (uint32_t c : last.positions()) s.flip_bit(c);
    return s;
}

std::vector<uint8_t> error_vector_bytes(const ParamSet& ps,
                                        std::span<const uint32_t> error_positions) {
    std::vector<uint8_t> bytes((ps.n() + 7) / 8, 0);
    for (uint32_t v : error_positions) {
        if (v >= ps.n()) throw std::invalid_argument("kem: error position out of range");
        bytes[v >> 3] |= uint8_t{1} << (v & 7);
    }
    return bytes;
}

std::vector<uint8_t> secret_from_error(const ParamSet& ps,
                                       std::span<const uint32_t> error_positions) {
    std::vector<uint8_t> input;
    auto ebytes = error_vector_bytes(ps, error_positions);
    input.reserve(1 + ebytes.size());
    input.push_back(kTagSuccess);
    input.insert(input.end(), ebytes.begin(), ebytes.end());
    return kdf(input, ps.ss_bytes);
}

EncapResult encap(const PublicKey& pk, const ParamSet& ps, Drbg& entropy) {
    auto error = sample_error(entropy, ps.n(), ps.t);
    EncapResult out;
    out.ct.syndrome = syndrome_from_error(pk, ps, error);
    out.shared_secret = secret_from_error(ps, error);
    return out;
}

DecapDetail decap_detail(const PrivateKey& sk, const ParamSet& ps, const Ciphertext& ct,
                         const ThresholdTable& tbl, DecoderWorkspace& ws,
                         const DecodeOptions* opts) {
    if (ct.syndrome.modulus() != ps.p)
        throw std::invalid_argument("kem: ciphertext does not match parameter set");

    // Private syndrome of the expanded error: multiply by the last product
    // block to strip its inverse from the public map.
    RingElement private_syndrome = mul(sk.l[ps.n0 - 1], ct.syndrome);

    DecodeOptions default_opts;
    auto outcome = decode(sk, ps, private_syndrome, tbl, opts ? *opts : default_opts, ws);

    DecapDetail detail;
    detail.decode_ok = outcome.ok;
    detail.weight_ok = outcome.ok && outcome.error_positions.size() == ps.t;
    detail.failure_path = !detail.weight_ok;
    detail.iterations = outcome.iterations;
    if (!detail.failure_path) {
        detail.shared_secret = secret_from_error(ps, outcome.error_positions);
    } else {
        std::vector<uint8_t> input;
        auto ct_bytes = ct.syndrome.to_bytes();
        input.reserve(1 + sk.failure_secret.size() + ct_bytes.size());
        input.push_back(kTagFailure);
        input.insert(input.end(), sk.failure_secret.begin(), sk.failure_secret.end());
        input.insert(input.end(), ct_bytes.begin(), ct_bytes.end());
        detail.shared_secret = kdf(input, ps.ss_bytes);
    }
    return detail;
}

std::vector<uint8_t> decap(const PrivateKey& sk, const ParamSet& ps, const Ciphertext& ct) {
    thread_local DecoderWorkspace ws;
    return decap_detail(sk, ps, ct, thresholds_for(ps), ws).shared_secret;
}

std::vector<uint8_t> ciphertext_bytes(const Ciphertext& ct) { return ct.syndrome.to_bytes(); }

Ciphertext ciphertext_from_bytes(const ParamSet& ps, std::span<const uint8_t> bytes) {
    return Ciphertext{RingElement::from_bytes(ps.p, bytes)};
}

}  // namespace ledakem
