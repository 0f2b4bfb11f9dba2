#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledakem/kem.hpp"
#include "ledakem/keygen.hpp"
#include "ledakem/params.hpp"

namespace ledakem {

// Malformed or mismatched on-disk material.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File layouts. Key files: magic(4) | version(1) | category(1) | n0(1),
// then the payload. Ciphertext files: magic(4) | category(1) | n0(1).
// Private keys at rest are just the seed.
inline constexpr char kPublicMagic[4] = {'L', 'K', 'P', 'K'};
inline constexpr char kPrivateMagic[4] = {'L', 'K', 'S', 'K'};
inline constexpr char kCiphertextMagic[4] = {'L', 'K', 'C', 'T'};
inline constexpr uint8_t kFormatVersion = 1;

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const uint8_t> data);

std::string hex_encode(std::span<const uint8_t> data);
std::vector<uint8_t> hex_decode(std::string_view text);  // throws FormatError

void write_private_key_file(const std::filesystem::path& path, const ParamSet& ps,
                            std::span<const uint8_t> seed);
void write_public_key_file(const std::filesystem::path& path, const ParamSet& ps,
                           const PublicKey& pk);
void write_ciphertext_file(const std::filesystem::path& path, const ParamSet& ps,
                           const Ciphertext& ct);

struct PrivateKeyFile {
    const ParamSet* params;
    std::vector<uint8_t> seed;
};
struct PublicKeyFile {
    const ParamSet* params;
    PublicKey pk;
};
struct CiphertextFile {
    const ParamSet* params;
    Ciphertext ct;
};

PrivateKeyFile read_private_key_file(const std::filesystem::path& path);
PublicKeyFile read_public_key_file(const std::filesystem::path& path);
CiphertextFile read_ciphertext_file(const std::filesystem::path& path);

// Known-answer test records: seed-expanded keypair, deterministic
// encapsulation, expected ciphertext and secret, grouped per count in an
// req/rsp-style text file.
std::string generate_kat(const ParamSet& ps, uint64_t count, std::span<const uint8_t> master_seed);

struct KatVerifyResult {
    uint64_t records = 0;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

KatVerifyResult verify_kat(const std::string& text);

}  // namespace ledakem
