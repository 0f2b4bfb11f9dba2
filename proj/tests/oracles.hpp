#pragma once

// Independent reference implementations the tests check the library against:
// dense circulant-matrix arithmetic, exact-rational threshold evaluation, and
// naive integer-domain decoder counters. Everything here favors obviousness
// over speed and must stay independent of the library's computation paths.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "ledakem/keygen.hpp"
#include "ledakem/params.hpp"
#include "ledakem/ring.hpp"

namespace ledakem::testing {

using BitMatrix = std::vector<std::vector<uint8_t>>;

BitMatrix circulant_image(const RingElement& a);
BitMatrix identity_matrix(size_t n);
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);
BitMatrix mat_add(const BitMatrix& a, const BitMatrix& b);
BitMatrix mat_transpose(const BitMatrix& a);
// Maps a circulant image back to its defining first row.
RingElement element_from_image(const BitMatrix& a, uint32_t p);
size_t mat_rank(BitMatrix a);

// n0*p x n0*p image of the block circulant with blocks[i][j].
BitMatrix block_circulant_image(const std::vector<std::vector<SparseRingElement>>& blocks,
                                uint32_t p);

// Exact-rational counterparts of the threshold-table probabilities.
mpq_class exact_odd_overlap(uint64_t n, uint32_t d, uint64_t t_prime);
mpq_class exact_unsat_given_clean(uint64_t n, uint32_t d, uint64_t tau);
mpq_class exact_sat_given_error(uint64_t n, uint32_t d, uint64_t tau);

// Full exact-rational threshold search (linear scan over the counter range).
int exact_raw_threshold(uint64_t n, uint32_t d, uint32_t max_counter, uint64_t tau, double delta);

// Exact boundary verification of a candidate threshold: the flip condition
// must hold at the candidate and fail just below it (registry-scale rows,
// where the full scan is needlessly expensive).
bool verify_raw_threshold(uint64_t n, uint32_t d, uint32_t max_counter, uint64_t tau, double delta,
                          int candidate);

// Integer-domain decoder counters computed against dense matrix images.
std::vector<int> naive_check_counts(const PrivateKey& sk, const ParamSet& ps,
                                    const RingElement& state);
std::vector<int> naive_correlations(const PrivateKey& sk, const ParamSet& ps,
                                    const std::vector<int>& counts);

// Permanent via Ryser's inclusion-exclusion formula.
uint64_t ryser_permanent(const std::vector<std::vector<uint32_t>>& matrix);

}  // namespace ledakem::testing
