#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ledakem/params.hpp"

namespace ledakem {

struct TrialReport {
    std::string params_id;
    uint64_t trials = 0;
    uint64_t failures = 0;      // decapsulations that took the failure path
    uint64_t wrong_secret = 0;  // success path with a mismatched secret (bug tripwire)
    // Successful decapsulations by decoder iterations used; index 0..l_max.
    std::vector<uint64_t> iteration_histogram;
    double wall_seconds = 0;
    uint32_t workers = 1;
    bool fixed_key = false;

    uint64_t successes() const { return trials - failures - wrong_secret; }
};

// Runs n_trials independent keygen/encap/decap cycles (one keypair per trial,
// or a single shared keypair when fixed_key is set). Per-trial seeds are
// derived from the master seed and the trial index, so the counts are
// reproducible for any worker count. workers == 0 selects the hardware
// concurrency.
TrialReport run_trials(const ParamSet& ps, uint64_t n_trials,
                       std::span<const uint8_t> master_seed, uint32_t workers,
                       bool fixed_key = false);

std::string report_json(const TrialReport& report);
std::string report_csv(const TrialReport& report);

}  // namespace ledakem
