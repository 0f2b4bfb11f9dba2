#include "ledakem/qdecoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ledakem {

namespace {

long double ln_binom(uint64_t n, uint64_t k) {
    return lgammal(static_cast<long double>(n) + 1) - lgammal(static_cast<long double>(k) + 1) -
           lgammal(static_cast<long double>(n - k) + 1);
}

// P[an odd share of the t' errors lands inside one weight-d parity row],
// hypergeometric over the n positions; p times this is the expected syndrome
// weight at residual expanded error weight t'.
long double odd_overlap_probability(uint64_t n, uint32_t d, uint64_t t_prime) {
    if (t_prime == 0) return 0;
    long double lden = ln_binom(n, t_prime);
    long double acc = 0;
    uint64_t kmax = std::min<uint64_t>(d, t_prime);
    for (uint64_t k = 1; k <= kmax; k += 2) {
        if (t_prime - k > n - d) continue;
        acc += expl(ln_binom(d, k) + ln_binom(n - d, t_prime - k) - lden);
    }
    return acc;
}

// P[check unsatisfied | its bit error-free] at residual error weight tau.
long double p_unsat_given_clean(uint64_t n, uint32_t d, uint64_t tau) {
    if (tau == 0) return 0;
    long double lden = ln_binom(n - 1, tau);
    long double acc = 0;
    uint64_t kmax = std::min<uint64_t>(d - 1, tau);
    for (uint64_t k = 1; k <= kmax; k += 2) {
        if (tau - k > n - d) continue;
        acc += expl(ln_binom(d - 1, k) + ln_binom(n - d, tau - k) - lden);
    }
    return acc;
}

// P[check satisfied | its bit in error] at residual error weight tau.
long double p_sat_given_error(uint64_t n, uint32_t d, uint64_t tau) {
    if (tau == 0) return 0;
    long double lden = ln_binom(n - 1, tau - 1);
    long double acc = 0;
    uint64_t kmax = std::min<uint64_t>(d - 1, tau - 1);
    for (uint64_t k = 0; k <= kmax; k += 2) {
        if (tau - 1 - k > n - d) continue;
        acc += expl(ln_binom(d - 1, k) + ln_binom(n - d, tau - 1 - k) - lden);
    }
    return acc;
}

// Smallest correlation value whose flip decision clears the
// (1+delta)/(2+delta) posterior bound; max_counter+1 when none does.
int raw_threshold_for(uint64_t n, uint32_t d, uint32_t max_counter, uint64_t tau,
                      long double delta) {
    long double pci = p_unsat_given_clean(n, d, tau);
    long double pic = p_sat_given_error(n, d, tau);
    long double bound = -log1pl(delta);
    long double ln_prior =
        logl(static_cast<long double>(n - tau)) - logl(static_cast<long double>(tau));
    if (pic >= 1.0L) {
        // tau == 1: the even-overlap sum is exactly 1 and 1-pic vanishes, so
        // only the all-ones correlation escapes the diverging factor.
        long double ln_x = ln_prior + static_cast<long double>(max_counter) * logl(pci);
        return ln_x < bound ? static_cast<int>(max_counter) : static_cast<int>(max_counter) + 1;
    }
    long double ln_a = logl(pci) - logl(pic);
    long double ln_b = log1pl(-pci) - log1pl(-pic);
    for (uint32_t rho = 0; rho <= max_counter; ++rho) {
        long double ln_x =
            ln_prior + rho * ln_a + static_cast<long double>(max_counter - rho) * ln_b;
        if (ln_x < bound) return static_cast<int>(rho);
    }
    return static_cast<int>(max_counter) + 1;
}

}  // namespace

ThresholdTable build_threshold_table(const ParamSet& ps) {
    uint64_t n = ps.n();
    uint32_t d = ps.n0 * ps.dv;
    uint32_t max_counter = ps.m() * ps.dv;

    ThresholdTable tbl;
    tbl.max_counter = max_counter;
    tbl.rows.resize(ps.t + 1);
    for (uint64_t j = 0; j <= ps.t; ++j) {
        auto& row = tbl.rows[j];
        row.expected_syndrome_weight = static_cast<double>(
            odd_overlap_probability(n, d, j * ps.m()) * static_cast<long double>(ps.p));
        row.raw_threshold = j == 0 ? static_cast<int>(max_counter) + 1
                                   : raw_threshold_for(n, d, max_counter, j, ps.delta);
    }

    int best = tbl.rows[1].raw_threshold;
    for (uint64_t j = 2; j <= ps.t; ++j) best = std::min(best, tbl.rows[j].raw_threshold);
    size_t pivot = 1;
    for (uint64_t j = ps.t; j >= 1; --j) {
        if (tbl.rows[j].raw_threshold == best) {
            pivot = j;
            break;
        }
    }
    tbl.min_index = pivot;
    for (uint64_t j = 0; j <= ps.t; ++j)
        tbl.rows[j].threshold = j < pivot ? best : tbl.rows[j].raw_threshold;

    if (best < 1 || best > static_cast<int>(max_counter))
        throw std::logic_error("thresholds: degenerate table for this parameter set");
    return tbl;
}

int lookup_threshold(const ThresholdTable& tbl, uint64_t observed_weight) {
    auto w = static_cast<double>(observed_weight);
    auto it = std::lower_bound(
        tbl.rows.begin(), tbl.rows.end(), w,
        [](const ThresholdRow& row, double v) { return row.expected_syndrome_weight < v; });
    if (it == tbl.rows.begin()) return tbl.rows.front().threshold;
    return std::prev(it)->threshold;
}

void DecoderWorkspace::prepare(uint32_t p, uint32_t n0) {
    if (p_ == p && n0_ == n0) return;
    size_t pp = p;
    size_t n = pp * n0;
    syndrome_bytes.assign(2 * pp, 0);
    check_counts.assign(n0 * 2 * pp, 0);
    correlations.assign(n, 0);
    syndrome_words.assign((pp + 63) / 64, 0);
    estimate_words.assign((n + 63) / 64, 0);
    scratch_words.assign((pp + 63) / 64, 0);
    p_ = p;
    n0_ = n0;
}

namespace {

uint64_t words_weight(std::span<const uint64_t> w) {
    uint64_t acc = 0;
    for (uint64_t word : w) acc += std::popcount(word);
    return acc;
}

void xor_rotated_sparse(std::span<uint64_t> words, const SparseRingElement& e, uint32_t rot,
                        uint32_t p) {
    for (uint32_t k : e.positions()) {
        uint32_t pos = k + rot;
        if (pos >= p) pos -= p;
        words[pos >> 6] ^= uint64_t{1} << (pos & 63);
    }
}

void expand_doubled(std::span<const uint64_t> words, uint32_t p, std::span<uint8_t> out) {
    for (uint32_t i = 0; i < p; ++i) out[i] = (words[i >> 6] >> (i & 63)) & 1;
    std::memcpy(out.data() + p, out.data(), p);
}

// counts[c] += src[(c - k) mod p] for all c, via the doubled source buffer.
template <typename Counter>
void add_rotated(Counter* counts, const uint8_t* doubled, uint32_t p, uint32_t k) {
    const uint8_t* src = doubled + (p - k);
    for (uint32_t c = 0; c < p; ++c) counts[c] += src[c];
}

std::vector<uint32_t> collect_positions(std::span<const uint64_t> words, size_t nbits) {
    std::vector<uint32_t> out;
    for (size_t wi = 0; wi < words.size(); ++wi) {
        uint64_t word = words[wi];
        while (word != 0) {
            size_t pos = wi * 64 + std::countr_zero(word);
            word &= word - 1;
            if (pos < nbits) out.push_back(static_cast<uint32_t>(pos));
        }
    }
    return out;
}

// Iteration driver shared by the Q-decoder and the public-code bit flipper;
// they differ only in how the per-position counters are produced.
template <typename FillCounters>
DecodeOutcome run_bit_flipping(const ParamSet& ps,
                               const std::vector<SparseRingElement>& update_blocks,
                               const RingElement& syndrome, const ThresholdTable* tbl,
                               const DecodeOptions& opts, DecoderWorkspace& ws,
                               FillCounters&& fill_counters) {
    uint32_t p = ps.p;
    uint32_t n0 = ps.n0;
    ws.prepare(p, n0);

    // The incoming syndrome is a column; the iteration state is its transpose.
    RingElement state = transpose(syndrome);
    auto state_words = state.words();
    std::copy(state_words.begin(), state_words.end(), ws.syndrome_words.begin());
    std::vector<uint64_t> initial(ws.syndrome_words);
    std::fill(ws.estimate_words.begin(), ws.estimate_words.end(), 0);

    DecodeOutcome out;
    bool early_exit = !opts.constant_iterations;

    for (uint32_t iter = 1; iter <= ps.l_max; ++iter) {
        uint64_t w = words_weight(ws.syndrome_words);
        if (w == 0 && early_exit) break;

        expand_doubled(ws.syndrome_words, p, ws.syndrome_bytes);
        fill_counters();

        int b = 0;
        switch (opts.policy) {
            case ThresholdPolicy::lookup_table:
                b = lookup_threshold(*tbl, w);
                break;
            case ThresholdPolicy::max_correlation: {
                uint16_t top = *std::max_element(ws.correlations.begin(), ws.correlations.end());
                b = std::max<int>(1, top);
                break;
            }
            case ThresholdPolicy::fixed:
                b = opts.fixed_threshold;
                break;
        }
        if (b < 1) throw std::invalid_argument("decode: threshold must be positive");

        uint32_t flips = 0;
        for (uint32_t j = 0; j < n0; ++j) {
            const uint16_t* rho = ws.correlations.data() + static_cast<size_t>(j) * p;
            for (uint32_t c = 0; c < p; ++c) {
                if (rho[c] >= b) {
                    size_t v = static_cast<size_t>(j) * p + c;
                    ws.estimate_words[v >> 6] ^= uint64_t{1} << (v & 63);
                    xor_rotated_sparse(ws.syndrome_words, update_blocks[j], c, p);
                    ++flips;
                }
            }
        }
        out.iterations = iter;
        if (opts.trace) opts.trace->push_back({iter, w, b, flips});

        if (opts.check_consistency) {
            std::vector<uint64_t> fresh(initial);
            auto bits = collect_positions(ws.estimate_words, static_cast<size_t>(n0) * p);
            for (uint32_t v : bits) xor_rotated_sparse(fresh, update_blocks[v / p], v % p, p);
            if (fresh != ws.syndrome_words) {
                out.reason = DecodeFailure::inconsistent;
                return out;
            }
        }

        if (flips == 0 && early_exit) {
            out.reason = DecodeFailure::stall;
            return out;
        }
    }

    if (words_weight(ws.syndrome_words) != 0) {
        out.reason = DecodeFailure::iteration_limit;
        return out;
    }

    // Success claimed: re-derive the residual syndrome from scratch before
    // trusting the incrementally updated one.
    std::vector<uint64_t> fresh(initial);
    auto positions = collect_positions(ws.estimate_words, static_cast<size_t>(n0) * p);
    for (uint32_t v : positions) xor_rotated_sparse(fresh, update_blocks[v / p], v % p, p);
    if (words_weight(fresh) != 0) {
        out.reason = DecodeFailure::inconsistent;
        return out;
    }

    out.ok = true;
    out.reason = DecodeFailure::none;
    out.error_positions = std::move(positions);
    return out;
}

// Unsatisfied-check counts per expanded-code position (one doubled lane per
// parity block), then their correlations with the transformation columns,
// addressed by original-error position. Expects ws.syndrome_bytes populated.
void fill_q_counters(const PrivateKey& sk, const ParamSet& ps, DecoderWorkspace& ws) {
    uint32_t p = ps.p;
    for (uint32_t i = 0; i < ps.n0; ++i) {
        uint8_t* counts = ws.check_counts.data() + static_cast<size_t>(i) * 2 * p;
        std::memset(counts, 0, p);
        for (uint32_t k : sk.h[i].positions()) add_rotated(counts, ws.syndrome_bytes.data(), p, k);
        std::memcpy(counts + p, counts, p);
    }
    std::memset(ws.correlations.data(), 0, ws.correlations.size() * sizeof(uint16_t));
    for (uint32_t j = 0; j < ps.n0; ++j) {
        uint16_t* rho = ws.correlations.data() + static_cast<size_t>(j) * p;
        for (uint32_t i = 0; i < ps.n0; ++i) {
            const uint8_t* counts = ws.check_counts.data() + static_cast<size_t>(i) * 2 * p;
            for (uint32_t k : sk.q[i][j].positions()) add_rotated(rho, counts, p, k);
        }
    }
}

}  // namespace

DecodeOutcome decode(const PrivateKey& sk, const ParamSet& ps, const RingElement& private_syndrome,
                     const ThresholdTable& tbl, const DecodeOptions& opts, DecoderWorkspace& ws) {
    if (private_syndrome.modulus() != ps.p)
        throw std::invalid_argument("decode: syndrome does not match parameter set");
    auto fill = [&] { fill_q_counters(sk, ps, ws); };
    return run_bit_flipping(ps, sk.l_transposed, private_syndrome, &tbl, opts, ws, fill);
}

CounterSnapshot decoder_counters(const PrivateKey& sk, const ParamSet& ps,
                                 const RingElement& state) {
    if (state.modulus() != ps.p)
        throw std::invalid_argument("decode: state does not match parameter set");
    DecoderWorkspace ws;
    ws.prepare(ps.p, ps.n0);
    std::copy(state.words().begin(), state.words().end(), ws.syndrome_words.begin());
    expand_doubled(ws.syndrome_words, ps.p, ws.syndrome_bytes);
    fill_q_counters(sk, ps, ws);
    CounterSnapshot snap;
    snap.check_counts.reserve(ws.correlations.size());
    snap.correlations.reserve(ws.correlations.size());
    for (uint32_t i = 0; i < ps.n0; ++i) {
        const uint8_t* counts = ws.check_counts.data() + static_cast<size_t>(i) * 2 * ps.p;
        for (uint32_t c = 0; c < ps.p; ++c) snap.check_counts.push_back(counts[c]);
    }
    for (uint16_t v : ws.correlations) snap.correlations.push_back(v);
    return snap;
}

DecodeOutcome classic_bf_decode(const std::vector<SparseRingElement>& parity_blocks,
                                const ParamSet& ps, const RingElement& syndrome,
                                const DecodeOptions& opts, DecoderWorkspace& ws) {
    if (opts.policy == ThresholdPolicy::lookup_table)
        throw std::invalid_argument("classic bf: supply a max or fixed threshold policy");
    if (parity_blocks.size() != ps.n0)
        throw std::invalid_argument("classic bf: expected n0 parity blocks");
    uint32_t p = ps.p;
    std::vector<SparseRingElement> transposed;
    transposed.reserve(parity_blocks.size());
    for (const auto& block : parity_blocks) transposed.push_back(transpose(block));
    auto fill = [&] {
        std::memset(ws.correlations.data(), 0, ws.correlations.size() * sizeof(uint16_t));
        for (uint32_t j = 0; j < ps.n0; ++j) {
            uint16_t* counts = ws.correlations.data() + static_cast<size_t>(j) * p;
            for (uint32_t k : parity_blocks[j].positions())
                add_rotated(counts, ws.syndrome_bytes.data(), p, k);
        }
    };
    return run_bit_flipping(ps, transposed, syndrome, nullptr, opts, ws, fill);
}

}  // namespace ledakem
