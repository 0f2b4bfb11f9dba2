#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ledakem/keygen.hpp"
#include "ledakem/params.hpp"
#include "ledakem/qdecoder.hpp"
#include "ledakem/ring.hpp"
#include "ledakem/rng.hpp"

namespace ledakem {

// The encapsulated secret is a p-bit syndrome of the weight-t error vector.
struct Ciphertext {
    RingElement syndrome;
};

struct EncapResult {
    Ciphertext ct;
    std::vector<uint8_t> shared_secret;
};

// Threshold table for a parameter set, built once and cached; safe to share
// across threads.
const ThresholdTable& thresholds_for(const ParamSet& ps);

// Samples a weight-t error from the entropy stream, hides it inside the
// public-code syndrome, and derives the shared secret from the error vector.
EncapResult encap(const PublicKey& pk, const ParamSet& ps, Drbg& entropy);

// Total function: every well-formed ciphertext yields a secret. Decoding
// failures (including a decoded weight different from t) divert to a
// keypair-bound failure secret with no signal in the return value.
std::vector<uint8_t> decap(const PrivateKey& sk, const ParamSet& ps, const Ciphertext& ct);

// Failure statistics for the simulation harness and tests only; the public
// API never exposes them.
struct DecapDetail {
    std::vector<uint8_t> shared_secret;
    bool decode_ok = false;
    bool weight_ok = false;
    bool failure_path = true;
    uint32_t iterations = 0;
};

DecapDetail decap_detail(const PrivateKey& sk, const ParamSet& ps, const Ciphertext& ct,
                         const ThresholdTable& tbl, DecoderWorkspace& ws,
                         const DecodeOptions* opts = nullptr);

// Building blocks shared with tests and the KAT tooling.

// Syndrome of an explicit error-position set under a public key.
RingElement syndrome_from_error(const PublicKey& pk, const ParamSet& ps,
                                std::span<const uint32_t> error_positions);

// Canonical n-bit dense serialization of an error vector: little-endian bit
// order, zero-padded to whole bytes.
std::vector<uint8_t> error_vector_bytes(const ParamSet& ps,
                                        std::span<const uint32_t> error_positions);

// Shared secret derived from an error vector (the success path of the KDF).
std::vector<uint8_t> secret_from_error(const ParamSet& ps,
                                       std::span<const uint32_t> error_positions);

std::vector<uint8_t> ciphertext_bytes(const Ciphertext& ct);
Ciphertext ciphertext_from_bytes(const ParamSet& ps, std::span<const uint8_t> bytes);

}  // namespace ledakem
