#include "ledakem/dfr.hpp"

#include <atomic>
#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>

#include "ledakem/kem.hpp"
#include "ledakem/sha3.hpp"

#include <json.hpp>

namespace ledakem {

namespace {

// keygen seed followed by encapsulation entropy, both category sized, bound
// to the trial index so schedules cannot reorder the stream.
struct TrialSeeds {
    std::vector<uint8_t> key_seed;
    std::vector<uint8_t> encap_seed;
};

TrialSeeds derive_trial_seeds(std::span<const uint8_t> master, uint64_t index, size_t seed_bytes) {
    Shake256 xof;
    xof.absorb(master);
    std::array<uint8_t, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<uint8_t>(index >> (8 * i));
    xof.absorb(le);
    xof.finalize();
    TrialSeeds seeds;
    seeds.key_seed.resize(seed_bytes);
    seeds.encap_seed.resize(seed_bytes);
    xof.squeeze(seeds.key_seed);
    xof.squeeze(seeds.encap_seed);
    return seeds;
}

std::vector<uint8_t> derive_fixed_key_seed(std::span<const uint8_t> master, size_t seed_bytes) {
    Shake256 xof;
    xof.absorb(master);
    static constexpr uint8_t tag[] = {'f', 'i', 'x', 'e', 'd', '-', 'k', 'e', 'y'};
    xof.absorb(tag);
    xof.finalize();
    std::vector<uint8_t> seed(seed_bytes);
    xof.squeeze(seed);
    return seed;
}

}  // namespace

TrialReport run_trials(const ParamSet& ps, uint64_t n_trials, std::span<const uint8_t> master_seed,
                       uint32_t workers, bool fixed_key) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers > n_trials && n_trials > 0) workers = static_cast<uint32_t>(n_trials);

    TrialReport report;
    report.params_id = ps.id;
    report.trials = n_trials;
    report.workers = workers;
    report.fixed_key = fixed_key;
    report.iteration_histogram.assign(ps.l_max + 1, 0);

    const ThresholdTable& tbl = thresholds_for(ps);

    KeyPair shared_key;
    if (fixed_key) shared_key = gen_keypair(ps, derive_fixed_key_seed(master_seed, ps.seed_bytes));

    struct WorkerTally {
        uint64_t failures = 0;
        uint64_t wrong_secret = 0;
        std::vector<uint64_t> histogram;
    };
    std::vector<WorkerTally> tallies(workers);
    std::atomic<uint64_t> next_trial{0};

    auto body = [&](uint32_t worker_index) {
        WorkerTally& tally = tallies[worker_index];
        tally.histogram.assign(ps.l_max + 1, 0);
        DecoderWorkspace ws;
        for (;;) {
            uint64_t i = next_trial.fetch_add(1);
            if (i >= n_trials) break;
            auto seeds = derive_trial_seeds(master_seed, i, ps.seed_bytes);
            const KeyPair* kp = &shared_key;
            KeyPair own;
            if (!fixed_key) {
                own = gen_keypair(ps, seeds.key_seed);
                kp = &own;
            }
            Drbg entropy(seeds.encap_seed);
            auto enc = encap(kp->pk, ps, entropy);
            auto detail = decap_detail(kp->sk, ps, enc.ct, tbl, ws);
            if (detail.failure_path) {
                ++tally.failures;
            } else if (detail.shared_secret != enc.shared_secret) {
                ++tally.wrong_secret;
            } else {
                ++tally.histogram[std::min<uint32_t>(detail.iterations, ps.l_max)];
            }
        }
    };

    auto start = std::chrono::steady_clock::now();
    if (workers <= 1) {
        body(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (uint32_t w = 0; w < workers; ++w) threads.emplace_back(body, w);
        for (auto& th : threads) th.join();
    }
    auto stop = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(stop - start).count();

    for (const auto& tally : tallies) {
        report.failures += tally.failures;
        report.wrong_secret += tally.wrong_secret;
        if (!tally.histogram.empty())
            for (size_t i = 0; i < report.iteration_histogram.size(); ++i)
                report.iteration_histogram[i] += tally.histogram[i];
    }
    return report;
}

std::string report_json(const TrialReport& report) {
    nlohmann::json j;
    j["params"] = report.params_id;
    j["trials"] = report.trials;
    j["failures"] = report.failures;
    j["wrong_secret"] = report.wrong_secret;
    j["successes"] = report.successes();
    j["iteration_histogram"] = report.iteration_histogram;
    j["wall_seconds"] = report.wall_seconds;
    j["workers"] = report.workers;
    j["fixed_key"] = report.fixed_key;
    return j.dump(2);
}

std::string report_csv(const TrialReport& report) {
    std::ostringstream out;
    out << "params,trials,failures,wrong_secret,wall_seconds,workers,fixed_key";
    for (size_t i = 0; i < report.iteration_histogram.size(); ++i) out << ",iters_" << i;
    out << '\n';
    out << report.params_id << ',' << report.trials << ',' << report.failures << ','
        << report.wrong_secret << ',' << report.wall_seconds << ',' << report.workers << ','
        << (report.fixed_key ? 1 : 0);
    for (uint64_t count : report.iteration_histogram) out << ',' << count;
    out << '\n';
    return out.str();
}

}  // namespace ledakem
