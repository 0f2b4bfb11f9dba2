// Command-line front end: key lifecycle, encapsulation/decapsulation on
// files, known-answer test generation/verification, benchmarks, failure-rate
// simulation and threshold-table inspection.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ledakem/dfr.hpp"
#include "ledakem/io.hpp"
#include "ledakem/kem.hpp"
#include "ledakem/keygen.hpp"
#include "ledakem/params.hpp"
#include "ledakem/qdecoder.hpp"
#include "ledakem/rng.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitCrypto = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const ledakem::ParamSet& resolve_params(std::string id) {
    if (id.empty()) {
        if (const char* env = std::getenv("LEDAKEM_PARAMS")) id = env;
    }
    if (id.empty()) throw UsageError("no parameter set given (use --params or LEDAKEM_PARAMS)");
    const auto* ps = ledakem::find_params(id);
    if (!ps) throw UsageError("unknown parameter set id: " + id);
    return *ps;
}

std::vector<uint8_t> seed_from_options(const std::string& seed_file, bool system_entropy,
                                       size_t seed_bytes) {
    if (!seed_file.empty()) {
        auto seed = ledakem::read_file(seed_file);
        if (seed.size() != seed_bytes)
            throw ledakem::FormatError("seed file must hold exactly " +
                                       std::to_string(seed_bytes) + " bytes");
        return seed;
    }
    if (!system_entropy)
        throw UsageError("provide --seed-file or --system-entropy");
    std::vector<uint8_t> seed(seed_bytes);
    std::random_device rd;
    for (auto& b : seed) b = static_cast<uint8_t>(rd());
    return seed;
}

std::vector<uint8_t> parse_seed_hex(const std::string& hex, size_t seed_bytes) {
    auto seed = ledakem::hex_decode(hex);
    if (seed.size() != seed_bytes)
        throw UsageError("seed must be " + std::to_string(seed_bytes) + " bytes of hex");
    return seed;
}

void refuse_overwrite(const std::filesystem::path& path, bool force) {
    if (!force && std::filesystem::exists(path))
        throw UsageError("refusing to overwrite " + path.string() + " (use --force)");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ledakem::FormatError("cannot open file for writing: " + path.string());
    out << text;
}

struct Timing {
    double mean_ms = 0;
    double stddev_ms = 0;
};

Timing summarize(const std::vector<double>& samples_ms) {
    Timing t;
    if (samples_ms.empty()) return t;
    double sum = 0;
    for (double v : samples_ms) sum += v;
    t.mean_ms = sum / samples_ms.size();
    double var = 0;
    for (double v : samples_ms) var += (v - t.mean_ms) * (v - t.mean_ms);
    t.stddev_ms = samples_ms.size() > 1 ? std::sqrt(var / (samples_ms.size() - 1)) : 0.0;
    return t;
}

int run(int argc, char** argv) {
    CLI::App app{"ledakem: QC-LDPC Niederreiter key encapsulation"};
    app.require_subcommand(1);

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a keypair");
    std::string kg_params, kg_seed_file, kg_prefix;
    bool kg_system = false, kg_force = false, kg_json = false;
    keygen_cmd->add_option("--params", kg_params, "parameter set id, e.g. cat1-n2");
    keygen_cmd->add_option("--seed-file", kg_seed_file, "read the key seed from this file");
    keygen_cmd->add_flag("--system-entropy", kg_system, "draw the key seed from the OS");
    keygen_cmd->add_option("--out-prefix", kg_prefix, "write <prefix>.pub and <prefix>.prv")
        ->required();
    keygen_cmd->add_flag("--force", kg_force, "overwrite existing files");
    keygen_cmd->add_flag("--json", kg_json, "machine-readable output");

    // encap
    auto* encap_cmd = app.add_subcommand("encap", "encapsulate a fresh shared secret");
    std::string en_pub, en_ct, en_ss, en_seed_file;
    bool en_force = false, en_json = false;
    encap_cmd->add_option("--pub", en_pub, "public key file")->required();
    encap_cmd->add_option("--out-ct", en_ct, "ciphertext output file")->required();
    encap_cmd->add_option("--out-ss", en_ss, "shared secret output file")->required();
    encap_cmd->add_option("--seed-file", en_seed_file, "deterministic entropy seed file");
    encap_cmd->add_flag("--force", en_force, "overwrite existing files");
    encap_cmd->add_flag("--json", en_json, "machine-readable output");

    // decap
    auto* decap_cmd = app.add_subcommand("decap", "decapsulate a shared secret");
    std::string de_priv, de_ct, de_ss, de_trace;
    bool de_force = false, de_json = false;
    decap_cmd->add_option("--priv", de_priv, "private key file")->required();
    decap_cmd->add_option("--ct", de_ct, "ciphertext file")->required();
    decap_cmd->add_option("--out-ss", de_ss, "shared secret output file")->required();
    decap_cmd->add_option("--trace", de_trace, "write per-iteration decoder CSV here");
    decap_cmd->add_flag("--force", de_force, "overwrite existing files");
    decap_cmd->add_flag("--json", de_json, "machine-readable output");

    // kat
    auto* kat_cmd = app.add_subcommand("kat", "generate known-answer test records");
    std::string ka_params, ka_seed_hex, ka_out;
    uint64_t ka_count = 10;
    bool ka_force = false;
    kat_cmd->add_option("--params", ka_params, "parameter set id");
    kat_cmd->add_option("--count", ka_count, "number of records");
    kat_cmd->add_option("--seed", ka_seed_hex, "master seed (hex)")->required();
    kat_cmd->add_option("--out", ka_out, "output file (stdout when omitted)");
    kat_cmd->add_flag("--force", ka_force, "overwrite an existing output file");

    // kat-verify
    auto* katv_cmd = app.add_subcommand("kat-verify", "verify known-answer test records");
    std::string kv_file;
    bool kv_json = false;
    katv_cmd->add_option("file", kv_file, "KAT file to verify")->required();
    katv_cmd->add_flag("--json", kv_json, "machine-readable output");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time keygen/encap/decap");
    std::string be_params, be_seed_hex;
    uint32_t be_iterations = 10;
    bool be_json = false;
    bench_cmd->add_option("--params", be_params, "parameter set id");
    bench_cmd->add_option("--iterations", be_iterations, "measurement repetitions");
    bench_cmd->add_option("--seed", be_seed_hex, "hex master seed (default fixed)");
    bench_cmd->add_flag("--json", be_json, "machine-readable output");

    // thresholds
    auto* thr_cmd = app.add_subcommand("thresholds", "dump the decision threshold table");
    std::string th_params;
    bool th_json = false;
    thr_cmd->add_option("--params", th_params, "parameter set id");
    thr_cmd->add_flag("--json", th_json, "machine-readable output");

    // dfr
    auto* dfr_cmd = app.add_subcommand("dfr", "simulate the decoding failure rate");
    std::string df_params, df_seed_hex, df_csv;
    uint64_t df_trials = 1000;
    uint32_t df_workers = 0;
    bool df_fixed = false, df_json = false;
    int64_t df_max_failures = -1;
    dfr_cmd->add_option("--params", df_params, "parameter set id");
    dfr_cmd->add_option("--trials", df_trials, "number of decapsulation trials");
    dfr_cmd->add_option("--seed", df_seed_hex, "hex master seed")->required();
    dfr_cmd->add_option("--workers", df_workers, "worker threads (0 = hardware)");
    dfr_cmd->add_flag("--fixed-key", df_fixed, "reuse one keypair for the whole run");
    dfr_cmd->add_option("--max-failures", df_max_failures,
                        "exit nonzero when failures exceed this bound");
    dfr_cmd->add_option("--csv", df_csv, "also write the report as CSV here");
    dfr_cmd->add_flag("--json", df_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (keygen_cmd->parsed()) {
        const auto& ps = resolve_params(kg_params);
        auto seed = seed_from_options(kg_seed_file, kg_system, ps.seed_bytes);
        std::filesystem::path pub = kg_prefix + ".pub";
        std::filesystem::path prv = kg_prefix + ".prv";
        refuse_overwrite(pub, kg_force);
        refuse_overwrite(prv, kg_force);
        auto kp = ledakem::gen_keypair(ps, seed);
        ledakem::write_private_key_file(prv, ps, seed);
        ledakem::write_public_key_file(pub, ps, kp.pk);
        if (kg_json) {
            json j{{"params", ps.id},
                   {"public_key_file", pub.string()},
                   {"private_key_file", prv.string()},
                   {"public_key_payload_bytes", ps.public_key_bytes()},
                   {"private_key_payload_bytes", ps.seed_bytes}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "wrote " << pub.string() << " (" << ps.public_key_bytes()
                      << " B payload) and " << prv.string() << " (" << ps.seed_bytes
                      << " B payload)\n";
        }
        return kExitOk;
    }

    if (encap_cmd->parsed()) {
        auto pub = ledakem::read_public_key_file(en_pub);
        const auto& ps = *pub.params;
        refuse_overwrite(en_ct, en_force);
        refuse_overwrite(en_ss, en_force);
        auto seed = seed_from_options(en_seed_file, en_seed_file.empty(), ps.seed_bytes);
        ledakem::Drbg entropy(seed);
        auto enc = ledakem::encap(pub.pk, ps, entropy);
        ledakem::write_ciphertext_file(en_ct, ps, enc.ct);
        ledakem::write_file(en_ss, enc.shared_secret);
        if (en_json) {
            json j{{"params", ps.id},
                   {"ciphertext_file", en_ct},
                   {"shared_secret_file", en_ss},
                   {"ciphertext_payload_bytes", ps.ciphertext_bytes()},
                   {"shared_secret_bytes", ps.ss_bytes}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "wrote " << en_ct << " (" << ps.ciphertext_bytes() << " B payload) and "
                      << en_ss << " (" << ps.ss_bytes << " B)\n";
        }
        return kExitOk;
    }

    if (decap_cmd->parsed()) {
        auto prv = ledakem::read_private_key_file(de_priv);
        auto ctf = ledakem::read_ciphertext_file(de_ct);
        if (prv.params != ctf.params)
            throw ledakem::FormatError("private key and ciphertext use different parameter sets");
        const auto& ps = *prv.params;
        refuse_overwrite(de_ss, de_force);
        auto sk = ledakem::expand_private(ps, prv.seed);
        std::vector<uint8_t> ss;
        if (de_trace.empty()) {
            ss = ledakem::decap(sk, ps, ctf.ct);
        } else {
            std::vector<ledakem::IterationTrace> trace;
            ledakem::DecodeOptions opts;
            opts.trace = &trace;
            ledakem::DecoderWorkspace ws;
            ss = ledakem::decap_detail(sk, ps, ctf.ct, ledakem::thresholds_for(ps), ws, &opts)
                     .shared_secret;
            std::ostringstream csv;
            csv << "iteration,syndrome_weight,threshold,flips\n";
            for (const auto& row : trace)
                csv << row.iteration << ',' << row.syndrome_weight << ',' << row.threshold << ','
                    << row.flips << '\n';
            write_text(de_trace, csv.str());
        }
        ledakem::write_file(de_ss, ss);
        if (de_json) {
            json j{{"params", ps.id},
                   {"shared_secret_file", de_ss},
                   {"shared_secret_bytes", ss.size()}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "wrote " << de_ss << " (" << ss.size() << " B)\n";
        }
        return kExitOk;
    }

    if (kat_cmd->parsed()) {
        const auto& ps = resolve_params(ka_params);
        auto seed = ledakem::hex_decode(ka_seed_hex);
        if (seed.empty()) throw UsageError("kat: master seed must be nonempty");
        auto text = ledakem::generate_kat(ps, ka_count, seed);
        if (ka_out.empty()) {
            std::cout << text;
        } else {
            refuse_overwrite(ka_out, ka_force);
            write_text(ka_out, text);
            std::cout << "wrote " << ka_out << " (" << ka_count << " records)\n";
        }
        return kExitOk;
    }

    if (katv_cmd->parsed()) {
        auto data = ledakem::read_file(kv_file);
        std::string text(data.begin(), data.end());
        auto result = ledakem::verify_kat(text);
        if (kv_json) {
            json j{{"records", result.records}, {"ok", result.ok()}, {"errors", result.errors}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << result.records << " records, "
                      << (result.ok() ? "all verified" : "FAILURES:") << '\n';
            for (const auto& err : result.errors) std::cout << "  " << err << '\n';
        }
        return result.ok() ? kExitOk : kExitFormat;
    }

    if (bench_cmd->parsed()) {
        const auto& ps = resolve_params(be_params);
        if (be_iterations == 0) throw UsageError("bench: iterations must be positive");
        std::vector<uint8_t> master =
            be_seed_hex.empty() ? std::vector<uint8_t>(ps.seed_bytes, 0xb5)
                                : parse_seed_hex(be_seed_hex, ps.seed_bytes);
        ledakem::Drbg seeder(master);
        std::vector<double> kg_ms, en_ms, de_ms;
        uint64_t decode_iterations = 0, keygen_attempts = 0;
        ledakem::DecoderWorkspace ws;
        const auto& tbl = ledakem::thresholds_for(ps);
        using clock = std::chrono::steady_clock;
        for (uint32_t i = 0; i < be_iterations; ++i) {
            std::vector<uint8_t> kseed(ps.seed_bytes), eseed(ps.seed_bytes);
            seeder.bytes(kseed);
            seeder.bytes(eseed);

            auto t0 = clock::now();
            auto kp = ledakem::gen_keypair(ps, kseed);
            auto t1 = clock::now();
            ledakem::Drbg entropy(eseed);
            auto enc = ledakem::encap(kp.pk, ps, entropy);
            auto t2 = clock::now();
            auto detail = ledakem::decap_detail(kp.sk, ps, enc.ct, tbl, ws);
            auto t3 = clock::now();

            kg_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            en_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
            de_ms.push_back(std::chrono::duration<double, std::milli>(t3 - t2).count());
            decode_iterations += detail.iterations;
            keygen_attempts += kp.sk.attempts;
        }
        Timing kg = summarize(kg_ms), en = summarize(en_ms), de = summarize(de_ms);
        if (be_json) {
            json j{{"params", ps.id},
                   {"iterations", be_iterations},
                   {"keygen_ms", {{"mean", kg.mean_ms}, {"stddev", kg.stddev_ms}}},
                   {"encap_ms", {{"mean", en.mean_ms}, {"stddev", en.stddev_ms}}},
                   {"decap_ms", {{"mean", de.mean_ms}, {"stddev", de.stddev_ms}}},
                   {"decode_iterations_total", decode_iterations},
                   {"keygen_attempts_total", keygen_attempts}};
            std::cout << j.dump(2) << '\n';
        } else {
            auto line = [](const char* name, const Timing& t) {
                std::printf("%-8s %9.2f ms (+/- %.2f)\n", name, t.mean_ms, t.stddev_ms);
            };
            std::cout << ps.id << ", " << be_iterations << " iterations\n";
            line("keygen", kg);
            line("encap", en);
            line("decap", de);
            std::cout << "decode iterations total " << decode_iterations
                      << ", keygen attempts total " << keygen_attempts << '\n';
        }
        return kExitOk;
    }

    if (thr_cmd->parsed()) {
        const auto& ps = resolve_params(th_params);
        const auto& tbl = ledakem::thresholds_for(ps);
        if (th_json) {
            json rows = json::array();
            for (size_t j = 0; j < tbl.rows.size(); ++j) {
                rows.push_back({{"residual_weight", j},
                                {"expected_syndrome_weight", tbl.rows[j].expected_syndrome_weight},
                                {"threshold", tbl.rows[j].threshold},
                                {"raw_threshold", tbl.rows[j].raw_threshold}});
            }
            json j{{"params", ps.id},
                   {"max_counter", tbl.max_counter},
                   {"clamp_index", tbl.min_index},
                   {"rows", rows}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << ps.id << ": rows 0.." << tbl.rows.size() - 1 << ", counter range [0,"
                      << tbl.max_counter << "], clamp at row " << tbl.min_index << '\n';
            std::cout << "row expected_syndrome_weight threshold raw\n";
            for (size_t j = 0; j < tbl.rows.size(); ++j)
                std::printf("%3zu %24.3f %9d %4d\n", j, tbl.rows[j].expected_syndrome_weight,
                            tbl.rows[j].threshold, tbl.rows[j].raw_threshold);
        }
        return kExitOk;
    }

    if (dfr_cmd->parsed()) {
        const auto& ps = resolve_params(df_params);
        auto seed = ledakem::hex_decode(df_seed_hex);
        if (seed.empty()) throw UsageError("dfr: master seed must be nonempty");
        auto report = ledakem::run_trials(ps, df_trials, seed, df_workers, df_fixed);
        if (!df_csv.empty()) write_text(df_csv, ledakem::report_csv(report));
        if (df_json) {
            std::cout << ledakem::report_json(report) << '\n';
        } else {
            std::cout << report.params_id << ": " << report.failures << " failures / "
                      << report.trials << " trials (" << report.wall_seconds << " s, "
                      << report.workers << " workers)\n";
            std::cout << "iteration histogram:";
            for (size_t i = 0; i < report.iteration_histogram.size(); ++i)
                std::cout << ' ' << i << ':' << report.iteration_histogram[i];
            std::cout << '\n';
            if (report.wrong_secret != 0)
                std::cout << "WARNING: " << report.wrong_secret
                          << " successful decodes yielded a mismatched secret\n";
        }
        if (df_max_failures >= 0 && report.failures > static_cast<uint64_t>(df_max_failures))
            return 1;
        return kExitOk;
    }

    throw UsageError("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ledakem::FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitCrypto;
    }
}
