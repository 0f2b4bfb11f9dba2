#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ledakem {

// NIST security categories; the scheme defines one instance class per
// category and per number of circulant blocks n0.
enum class Category : uint8_t {
    cat1 = 1,
    cat2_3 = 3,
    cat4_5 = 5,
};

struct ParamSet {
    std::string id;  // e.g. "cat1-n2"
    Category category{};
    uint32_t n0 = 0;  // circulant blocks per row, in {2,3,4}
    uint32_t p = 0;   // circulant size, prime with ord_p(2) = p-1
    uint32_t dv = 0;  // column weight of the secret parity blocks, odd
    std::vector<uint32_t> m_vec;  // block weights of the transformation matrix
    uint32_t t = 0;               // error weight

    // Informational security levels (base-2 log of attack work factors).
    double sl_da_pq = 0, sl_kra_pq = 0, sl_da_cl = 0, sl_kra_cl = 0;
    // Decoding failure rate the instance was designed for.
    double dfr_target = 0;

    // Decoder configuration.
    uint32_t l_max = 5;
    double delta = 0.0;  // threshold margin

    size_t ss_bytes = 0;    // shared secret length: 32/48/64
    size_t seed_bytes = 0;  // private key seed length: 24/32/40

    uint32_t m() const;                 // sum of m_vec
    uint64_t n() const { return static_cast<uint64_t>(n0) * p; }
    size_t words_per_block() const { return (static_cast<size_t>(p) + 63) / 64; }
    size_t block_bytes() const { return words_per_block() * 8; }
    size_t public_key_bytes() const { return (n0 - 1) * block_bytes(); }
    size_t ciphertext_bytes() const { return block_bytes(); }
    // Bits needed to store one sparse exponent.
    uint32_t position_bits() const;

    // Row i is m_vec cyclically shifted right by i.
    std::vector<std::vector<uint32_t>> weight_matrix() const;
};

// The nine standard instances.
const std::vector<ParamSet>& registry();

// Lookup by id ("cat1-n2", "cat2-3-n4", ...; "cat3-*"/"cat5-*" accepted as
// aliases). Returns nullptr when unknown.
const ParamSet* find_params(std::string_view id);

// Permanent by permutation expansion; n0 <= 4 keeps this at 24 terms.
uint64_t permanent(const std::vector<std::vector<uint32_t>>& matrix);

// Structural checks every instance must satisfy. Empty result means valid;
// otherwise one human-readable violation per broken rule.
std::vector<std::string> validate(const ParamSet& ps);

// Builds a non-registry instance (desk-scale parameter sets for tests and
// experiments); throws std::invalid_argument listing the violations if the
// combination is structurally invalid.
ParamSet toy_params(uint32_t p, uint32_t n0, uint32_t dv, std::vector<uint32_t> m_vec,
                    uint32_t t, uint32_t l_max = 8, double delta = 0.0);

// Number-theory helpers shared with the validators.
bool is_prime(uint64_t x);
bool two_is_primitive_root(uint32_t p);

}  // namespace ledakem
