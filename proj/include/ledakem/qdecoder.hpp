#pragma once

#include <cstdint>
#include <vector>

#include "ledakem/keygen.hpp"
#include "ledakem/params.hpp"
#include "ledakem/ring.hpp"

namespace ledakem {

// Decision thresholds driven by the observed syndrome weight. Row j models a
// residual error of weight j (expanded weight j*m): the expected syndrome
// weight at that point and the smallest correlation value that makes a flip
// more likely right than wrong by the configured margin. Rows past the
// minimum threshold (toward light syndromes) are clamped to the minimum.
struct ThresholdRow {
    double expected_syndrome_weight = 0;
    int threshold = 0;      // clamped value used by the decoder
    int raw_threshold = 0;  // pre-clamp value; max_counter+1 when no
                            // correlation value qualifies
};

struct ThresholdTable {
    std::vector<ThresholdRow> rows;  // indices 0..t
    size_t min_index = 0;            // pivot of the post-minimum clamp
    uint32_t max_counter = 0;        // m*dv, the largest possible correlation
};

ThresholdTable build_threshold_table(const ParamSet& ps);

// Threshold of the largest row with expected weight strictly below the
// observed one; the first row's threshold when none qualifies.
int lookup_threshold(const ThresholdTable& tbl, uint64_t observed_weight);

enum class ThresholdPolicy {
    lookup_table,     // syndrome-weight table (production path)
    max_correlation,  // flip only the maximum-correlation positions
    fixed,            // caller-supplied constant (tests)
};

enum class DecodeFailure {
    none,
    stall,             // no position reached the threshold
    iteration_limit,   // nonzero syndrome after l_max iterations
    inconsistent,      // recomputed syndrome disagreed (internal check)
};

struct IterationTrace {
    uint32_t iteration = 0;
    uint64_t syndrome_weight = 0;
    int threshold = 0;
    uint32_t flips = 0;
};

struct DecodeOptions {
    ThresholdPolicy policy = ThresholdPolicy::lookup_table;
    int fixed_threshold = 0;
    // Run exactly l_max iterations with no data-dependent early exit; the
    // returned estimate is bit-identical on successes.
    bool constant_iterations = false;
    // Re-derive the syndrome from scratch after every iteration (tests).
    bool check_consistency = false;
    std::vector<IterationTrace>* trace = nullptr;
};

struct DecodeOutcome {
    bool ok = false;
    DecodeFailure reason = DecodeFailure::none;
    std::vector<uint32_t> error_positions;  // sorted, over [0, n0*p)
    uint32_t iterations = 0;
};

// Scratch buffers for one in-flight decode; reuse across calls, one instance
// per concurrent decode.
class DecoderWorkspace {
public:
    void prepare(uint32_t p, uint32_t n0);

    std::vector<uint8_t> syndrome_bytes;   // 2p, doubled for cyclic indexing
    std::vector<uint8_t> check_counts;     // n0*2p, doubled per block
    std::vector<uint16_t> correlations;    // n0*p
    std::vector<uint64_t> syndrome_words;  // p bits
    std::vector<uint64_t> estimate_words;  // n0*p bits
    std::vector<uint64_t> scratch_words;   // p bits

private:
    uint32_t p_ = 0;
    uint32_t n0_ = 0;
};

// Recovers the original error vector from the private syndrome s' = H*Q*e^T.
// The correlation step folds the unsatisfied-check counts through the
// transformation blocks, so the estimate addresses e directly rather than
// the expanded error seen by the private code.
DecodeOutcome decode(const PrivateKey& sk, const ParamSet& ps, const RingElement& private_syndrome,
                     const ThresholdTable& tbl, const DecodeOptions& opts, DecoderWorkspace& ws);

// Reference bit-flipping decoder over the public code (parity blocks l[j]);
// the threshold is the maximum counter unless a fixed one is supplied.
DecodeOutcome classic_bf_decode(const std::vector<SparseRingElement>& parity_blocks,
                                const ParamSet& ps, const RingElement& syndrome,
                                const DecodeOptions& opts, DecoderWorkspace& ws);

// One-step counter snapshot for a given row-vector iteration state:
// unsatisfied-check counts per expanded position and their correlations per
// original-error position (diagnostics and tests).
struct CounterSnapshot {
    std::vector<int> check_counts;   // length n0*p, entries in [0, dv]
    std::vector<int> correlations;   // length n0*p, entries in [0, m*dv]
};
CounterSnapshot decoder_counters(const PrivateKey& sk, const ParamSet& ps,
                                 const RingElement& state);

}  // namespace ledakem
