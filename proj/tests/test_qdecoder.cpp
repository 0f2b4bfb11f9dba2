#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ledakem/qdecoder.hpp"
#include "ledakem/rng.hpp"
#include "oracles.hpp"

using namespace ledakem;
namespace oracle = ledakem::testing;

namespace {

std::vector<uint8_t> seed_of(uint8_t tag) { return std::vector<uint8_t>(24, tag); }

ParamSet toy() { return toy_params(29, 2, 3, {2, 1}, 2); }

// Private syndrome of an error vector: s' = sum_j l_j * transpose(e_j).
RingElement private_syndrome_of(const PrivateKey& sk, const ParamSet& ps,
                                std::span<const uint32_t> error) {
    std::vector<std::vector<uint32_t>> chunks(ps.n0);
    for (uint32_t v : error) chunks[v / ps.p].push_back(v % ps.p);
    RingElement s(ps.p);
    for (uint32_t j = 0; j < ps.n0; ++j) {
        SparseRingElement chunk(ps.p, std::move(chunks[j]));
        s = add(s, mul(transpose(chunk), sk.l[j].densify()));
    }
    return s;
}

}  // namespace

TEST_CASE("toy threshold table matches the exact-rational oracle") {
    for (double delta : {0.0, 1.0}) {
        auto ps = toy_params(29, 2, 3, {2, 1}, 2, 8, delta);
        auto tbl = build_threshold_table(ps);
        REQUIRE(tbl.rows.size() == ps.t + 1);
        CHECK(tbl.max_counter == ps.m() * ps.dv);

        uint32_t d = ps.n0 * ps.dv;
        std::vector<int> oracle_raw(ps.t + 1);
        oracle_raw[0] = static_cast<int>(tbl.max_counter) + 1;
        for (uint64_t j = 0; j <= ps.t; ++j) {
            mpq_class exact_ws = oracle::exact_odd_overlap(ps.n(), d, j * ps.m()) * ps.p;
            double ws = tbl.rows[j].expected_syndrome_weight;
            CHECK(abs(mpq_class(ws) - exact_ws) < mpq_class(1, 1000000));
            if (j >= 1) {
                oracle_raw[j] =
                    oracle::exact_raw_threshold(ps.n(), d, tbl.max_counter, j, delta);
                REQUIRE(tbl.rows[j].raw_threshold == oracle_raw[j]);
            }
        }

        // post-minimum clamp, recomputed from the oracle's raw values
        int best = *std::min_element(oracle_raw.begin() + 1, oracle_raw.end());
        size_t pivot = ps.t;
        while (oracle_raw[pivot] != best) --pivot;
        CHECK(tbl.min_index == pivot);
        for (uint64_t j = 0; j <= ps.t; ++j)
            CHECK(tbl.rows[j].threshold == (j < pivot ? best : oracle_raw[j]));
    }
}

TEST_CASE("toy threshold values are the hand-derived ones") {
    auto tbl = build_threshold_table(toy());
    // t'=0 row: empty sums
    CHECK(tbl.rows[0].expected_syndrome_weight == 0.0);
    CHECK(tbl.rows[1].expected_syndrome_weight == doctest::Approx(7.49641).epsilon(1e-4));
    CHECK(tbl.rows[2].expected_syndrome_weight == doctest::Approx(11.48967).epsilon(1e-4));
    // raw thresholds: tau=1 only satisfiable at the counter cap, tau=2 at 6
    CHECK(tbl.rows[1].raw_threshold == 9);
    CHECK(tbl.rows[2].raw_threshold == 6);
    // clamp pins every earlier row to the minimum
    CHECK(tbl.min_index == 2);
    CHECK(tbl.rows[0].threshold == 6);
    CHECK(tbl.rows[1].threshold == 6);
    CHECK(tbl.rows[2].threshold == 6);
}

TEST_CASE("registry threshold rows verify against exact boundaries") {
    const auto& ps = *find_params("cat1-n2");
    auto tbl = build_threshold_table(ps);
    uint32_t d = ps.n0 * ps.dv;
    // spot rows here; the acceptance suite sweeps all of them
    for (uint64_t j : {1u, 2u, 3u, 9u, 50u, 120u, 224u}) {
        INFO("row ", j);
        CHECK(oracle::verify_raw_threshold(ps.n(), d, tbl.max_counter, j, ps.delta,
                                           tbl.rows[j].raw_threshold));
    }
    // expected syndrome weights grow monotonically before any clamping
    for (size_t j = 1; j < tbl.rows.size(); ++j)
        CHECK(tbl.rows[j].expected_syndrome_weight >
              tbl.rows[j - 1].expected_syndrome_weight);
    for (size_t j = 0; j < tbl.rows.size(); ++j) {
        CHECK(tbl.rows[j].threshold >= 1);
        CHECK(tbl.rows[j].threshold <= static_cast<int>(tbl.max_counter));
    }
}

TEST_CASE("threshold lookup follows the largest-below rule") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    CHECK(lookup_threshold(tbl, 0) == tbl.rows.front().threshold);
    CHECK(lookup_threshold(tbl, 10000) == tbl.rows.back().threshold);

    const auto& cat = *find_params("cat1-n2");
    auto big = build_threshold_table(cat);
    auto scan = [&](uint64_t w) {
        size_t best = 0;
        bool found = false;
        for (size_t j = 0; j < big.rows.size(); ++j) {
            if (big.rows[j].expected_syndrome_weight < static_cast<double>(w)) {
                best = j;
                found = true;
            }
        }
        return found ? big.rows[best].threshold : big.rows.front().threshold;
    };
    Drbg drbg(seed_of(1));
    for (int trial = 0; trial < 500; ++trial) {
        uint64_t w = drbg.uniform(14000);
        REQUIRE(lookup_threshold(big, w) == scan(w));
    }
}

TEST_CASE("zero syndrome decodes to the zero error before any flip") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(2));
    auto tbl = build_threshold_table(ps);
    DecoderWorkspace ws;
    DecodeOptions opts;
    auto outcome = decode(sk, ps, RingElement::zero(ps.p), tbl, opts, ws);
    CHECK(outcome.ok);
    CHECK(outcome.error_positions.empty());
    CHECK(outcome.iterations == 0);
}

TEST_CASE("toy round trips recover the exact error") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(3));
    DecoderWorkspace ws;
    DecodeOptions opts;
    opts.check_consistency = true;

    int successes = 0, exact = 0, failures = 0;
    constexpr int kTrials = 1000;
    for (int trial = 0; trial < kTrials; ++trial) {
        std::vector<uint8_t> seed(24);
        drbg.bytes(seed);
        auto sk = expand_private(ps, seed);
        auto error = sample_error(drbg, ps.n(), ps.t);
        auto syndrome = private_syndrome_of(sk, ps, error);
        auto outcome = decode(sk, ps, syndrome, tbl, opts, ws);
        REQUIRE(outcome.reason != DecodeFailure::inconsistent);
        if (outcome.ok) {
            ++successes;
            if (outcome.error_positions == error) ++exact;
            CHECK(outcome.iterations >= 1);
            CHECK(outcome.iterations <= ps.l_max);
        } else {
            ++failures;
        }
    }
    INFO("successes ", successes, " exact ", exact, " failures ", failures);
    CHECK(successes + failures == kTrials);
    // waterfall-region sanity: the toy set decodes the vast majority of loads
    CHECK(successes >= kTrials * 3 / 4);
    // every success recovered the original error, not merely its syndrome
    CHECK(exact == successes);
}

TEST_CASE("counters match the dense-matrix oracle") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(4));
    Drbg drbg(seed_of(5));
    for (int trial = 0; trial < 50; ++trial) {
        RingElement state(ps.p);
        for (uint32_t i = 0; i < ps.p; ++i)
            if (drbg.bits(1)) state.set_bit(i);
        auto snap = decoder_counters(sk, ps, state);
        auto naive_counts = oracle::naive_check_counts(sk, ps, state);
        auto naive_rho = oracle::naive_correlations(sk, ps, naive_counts);
        REQUIRE(snap.check_counts == naive_counts);
        REQUIRE(snap.correlations == naive_rho);
        for (int v : snap.check_counts) CHECK(v <= static_cast<int>(ps.dv));
        for (int v : snap.correlations) CHECK(v <= static_cast<int>(ps.m() * ps.dv));
    }
}

TEST_CASE("single error produces the maximal correlation at its own position") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(6));
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<uint8_t> seed(24);
        drbg.bytes(seed);
        auto sk = expand_private(ps, seed);
        uint32_t v = static_cast<uint32_t>(drbg.uniform(ps.n()));
        std::vector<uint32_t> error{v};
        auto state = transpose(private_syndrome_of(sk, ps, error));
        auto snap = decoder_counters(sk, ps, state);
        int top = *std::max_element(snap.correlations.begin(), snap.correlations.end());
        REQUIRE(snap.correlations[v] == top);
    }
}

TEST_CASE("syndrome updates stay consistent every iteration") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(7));
    DecoderWorkspace ws;
    DecodeOptions opts;
    opts.check_consistency = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> seed(24);
        drbg.bytes(seed);
        auto sk = expand_private(ps, seed);
        auto error = sample_error(drbg, ps.n(), ps.t);
        auto outcome = decode(sk, ps, private_syndrome_of(sk, ps, error), tbl, opts, ws);
        REQUIRE(outcome.reason != DecodeFailure::inconsistent);
    }
}

TEST_CASE("constant-iteration mode returns bit-identical estimates") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(8));
    DecoderWorkspace ws;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<uint8_t> seed(24);
        drbg.bytes(seed);
        auto sk = expand_private(ps, seed);
        auto error = sample_error(drbg, ps.n(), ps.t);
        auto syndrome = private_syndrome_of(sk, ps, error);

        DecodeOptions early;
        auto a = decode(sk, ps, syndrome, tbl, early, ws);
        DecodeOptions constant;
        constant.constant_iterations = true;
        auto b = decode(sk, ps, syndrome, tbl, constant, ws);

        REQUIRE(a.ok == b.ok);
        if (a.ok) REQUIRE(a.error_positions == b.error_positions);
        CHECK(b.iterations == ps.l_max);
    }
}

TEST_CASE("stalls are reported as failures") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(9));
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(10));
    auto error = sample_error(drbg, ps.n(), ps.t);
    auto syndrome = private_syndrome_of(sk, ps, error);
    DecoderWorkspace ws;
    DecodeOptions opts;
    opts.policy = ThresholdPolicy::fixed;
    opts.fixed_threshold = static_cast<int>(ps.m() * ps.dv) + 1;  // unreachable
    auto outcome = decode(sk, ps, syndrome, tbl, opts, ws);
    CHECK_FALSE(outcome.ok);
    CHECK(outcome.reason == DecodeFailure::stall);
    CHECK(outcome.iterations == 1);
}

TEST_CASE("max-correlation policy decodes the toy set") {
    auto ps = toy();
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(11));
    DecoderWorkspace ws;
    DecodeOptions opts;
    opts.policy = ThresholdPolicy::max_correlation;
    int ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<uint8_t> seed(24);
        drbg.bytes(seed);
        auto sk = expand_private(ps, seed);
        auto error = sample_error(drbg, ps.n(), ps.t);
        auto outcome = decode(sk, ps, private_syndrome_of(sk, ps, error), tbl, opts, ws);
        if (outcome.ok && outcome.error_positions == error) ++ok;
    }
    CHECK(ok >= 150);
}

TEST_CASE("public-code decoder handles the zero syndrome") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(12));
    DecoderWorkspace ws;
    DecodeOptions opts;
    opts.policy = ThresholdPolicy::max_correlation;
    auto outcome = classic_bf_decode(sk.l, ps, RingElement::zero(ps.p), opts, ws);
    CHECK(outcome.ok);
    CHECK(outcome.error_positions.empty());
}

TEST_CASE("public-code decoder requires an explicit threshold policy") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(13));
    DecoderWorkspace ws;
    DecodeOptions opts;  // lookup_table without a table
    CHECK_THROWS_AS(classic_bf_decode(sk.l, ps, RingElement::zero(ps.p), opts, ws),
                    std::invalid_argument);
}

TEST_CASE("collision-free products make both decoders see the same counters") {
    // Hand-built secrets whose block products have disjoint support sums, so
    // the integer product of the sparse factors equals the binary product and
    // the correlation pass reduces to the public-code counters.
    auto ps = toy();
    PrivateKey sk;
    sk.h = {SparseRingElement(29, {0, 1, 2}), SparseRingElement(29, {0, 4, 9})};
    sk.q = {{SparseRingElement(29, {0, 14}), SparseRingElement(29, {24})},
            {SparseRingElement(29, {3}), SparseRingElement(29, {0, 13})}};
    for (uint32_t j = 0; j < 2; ++j) {
        RingElement acc(29);
        for (uint32_t i = 0; i < 2; ++i) acc = add(acc, mul(sk.h[i], sk.q[i][j]).densify());
        sk.l.push_back(SparseRingElement::sparsify(acc));
        sk.l_transposed.push_back(transpose(sk.l[j]));
        REQUIRE(sk.l[j].weight() == 9);  // no cancellations in the crafted pair
    }
    sk.l_last_dense = sk.l.back().densify();
    sk.l_last_inverse = *inverse(sk.l_last_dense);
    sk.failure_secret.assign(32, 0);

    Drbg drbg(seed_of(14));
    for (int trial = 0; trial < 30; ++trial) {
        RingElement state(ps.p);
        for (uint32_t i = 0; i < ps.p; ++i)
            if (drbg.bits(1)) state.set_bit(i);
        auto snap = decoder_counters(sk, ps, state);

        // public-code counters from the dense image of each product block
        for (uint32_t j = 0; j < ps.n0; ++j) {
            auto image = oracle::circulant_image(sk.l[j].densify());
            for (uint32_t c = 0; c < ps.p; ++c) {
                int acc = 0;
                for (uint32_t r = 0; r < ps.p; ++r)
                    if (state.bit(r) && image[r][c]) ++acc;
                REQUIRE(snap.correlations[static_cast<size_t>(j) * ps.p + c] == acc);
            }
        }
    }

    // identical flip decisions at iteration one for a matched fixed threshold
    auto error = sample_error(drbg, ps.n(), ps.t);
    auto syndrome = private_syndrome_of(sk, ps, error);
    DecoderWorkspace ws;
    std::vector<IterationTrace> trace_q, trace_bf;
    DecodeOptions opts;
    opts.policy = ThresholdPolicy::fixed;
    opts.fixed_threshold = 5;
    ParamSet one_iter = ps;
    one_iter.l_max = 1;
    opts.trace = &trace_q;
    auto q_out = decode(sk, one_iter, syndrome, build_threshold_table(ps), opts, ws);
    opts.trace = &trace_bf;
    auto bf_out = classic_bf_decode(sk.l, one_iter, syndrome, opts, ws);
    REQUIRE(trace_q.size() == trace_bf.size());
    for (size_t i = 0; i < trace_q.size(); ++i) {
        CHECK(trace_q[i].syndrome_weight == trace_bf[i].syndrome_weight);
        CHECK(trace_q[i].flips == trace_bf[i].flips);
    }
    CHECK(q_out.ok == bf_out.ok);
}

TEST_CASE("trace rows carry the per-iteration diagnostics") {
    auto ps = toy();
    auto sk = expand_private(ps, seed_of(15));
    auto tbl = build_threshold_table(ps);
    Drbg drbg(seed_of(16));
    auto error = sample_error(drbg, ps.n(), ps.t);
    auto syndrome = private_syndrome_of(sk, ps, error);
    std::vector<IterationTrace> trace;
    DecodeOptions opts;
    opts.trace = &trace;
    DecoderWorkspace ws;
    auto outcome = decode(sk, ps, syndrome, tbl, opts, ws);
    REQUIRE(!trace.empty());
    CHECK(trace.front().iteration == 1);
    CHECK(trace.front().syndrome_weight == syndrome.weight());
    for (const auto& row : trace) CHECK(row.threshold >= 1);
    CHECK(trace.size() == outcome.iterations);
}
