#include "ledakem/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "ledakem/rng.hpp"
#include "ledakem/sha3.hpp"

namespace ledakem {

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path.string());
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open file for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw FormatError("short write: " + path.string());
}

std::string hex_encode(std::span<const uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

std::vector<uint8_t> hex_decode(std::string_view text) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (text.size() % 2 != 0) throw FormatError("hex string has odd length");
    std::vector<uint8_t> out(text.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(text[2 * i]);
        int lo = nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0) throw FormatError("invalid hex digit");
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

namespace {

const ParamSet* params_for_header(uint8_t category, uint8_t n0) {
    for (const auto& ps : registry())
        if (static_cast<uint8_t>(ps.category) == category && ps.n0 == n0) return &ps;
    return nullptr;
}

void append_header(std::vector<uint8_t>& out, const char (&magic)[4], bool with_version,
                   const ParamSet& ps) {
    out.insert(out.end(), magic, magic + 4);
    if (with_version) out.push_back(kFormatVersion);
    out.push_back(static_cast<uint8_t>(ps.category));
    out.push_back(static_cast<uint8_t>(ps.n0));
}

struct ParsedHeader {
    const ParamSet* params;
    std::span<const uint8_t> payload;
};

ParsedHeader parse_header(std::span<const uint8_t> data, const char (&magic)[4],
                          bool with_version, const char* what) {
    size_t header_len = with_version ? 7 : 6;
    if (data.size() < header_len)
        throw FormatError(std::string(what) + ": file too short for header");
    if (std::memcmp(data.data(), magic, 4) != 0)
        throw FormatError(std::string(what) + ": bad magic");
    size_t at = 4;
    if (with_version) {
        if (data[at] != kFormatVersion)
            throw FormatError(std::string(what) + ": unsupported format version");
        ++at;
    }
    uint8_t category = data[at++];
    uint8_t n0 = data[at++];
    const ParamSet* ps = params_for_header(category, n0);
    if (!ps) throw FormatError(std::string(what) + ": unknown category/n0 combination");
    return {ps, data.subspan(at)};
}

}  // namespace

void write_private_key_file(const std::filesystem::path& path, const ParamSet& ps,
                            std::span<const uint8_t> seed) {
    if (seed.size() != ps.seed_bytes) throw FormatError("private key: wrong seed length");
    std::vector<uint8_t> out;
    append_header(out, kPrivateMagic, true, ps);
    out.insert(out.end(), seed.begin(), seed.end());
    write_file(path, out);
}

void write_public_key_file(const std::filesystem::path& path, const ParamSet& ps,
                           const PublicKey& pk) {
    std::vector<uint8_t> out;
    append_header(out, kPublicMagic, true, ps);
    auto payload = public_key_bytes(pk);
    out.insert(out.end(), payload.begin(), payload.end());
    write_file(path, out);
}

void write_ciphertext_file(const std::filesystem::path& path, const ParamSet& ps,
                           const Ciphertext& ct) {
    std::vector<uint8_t> out;
    append_header(out, kCiphertextMagic, false, ps);
    auto payload = ciphertext_bytes(ct);
    out.insert(out.end(), payload.begin(), payload.end());
    write_file(path, out);
}

PrivateKeyFile read_private_key_file(const std::filesystem::path& path) {
    auto data = read_file(path);
    auto parsed = parse_header(data, kPrivateMagic, true, "private key");
    if (parsed.payload.size() != parsed.params->seed_bytes)
        throw FormatError("private key: wrong payload length for category");
    return {parsed.params, {parsed.payload.begin(), parsed.payload.end()}};
}

PublicKeyFile read_public_key_file(const std::filesystem::path& path) {
    auto data = read_file(path);
    auto parsed = parse_header(data, kPublicMagic, true, "public key");
    if (parsed.payload.size() != parsed.params->public_key_bytes())
        throw FormatError("public key: wrong payload length for category");
    PublicKeyFile out{parsed.params, {}};
    try {
        out.pk = public_key_from_bytes(*parsed.params, parsed.payload);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("public key: ") + e.what());
    }
    return out;
}

CiphertextFile read_ciphertext_file(const std::filesystem::path& path) {
    auto data = read_file(path);
    auto parsed = parse_header(data, kCiphertextMagic, false, "ciphertext");
    if (parsed.payload.size() != parsed.params->ciphertext_bytes())
        throw FormatError("ciphertext: wrong payload length for category");
    CiphertextFile out{parsed.params, {}};
    try {
        out.ct = ciphertext_from_bytes(*parsed.params, parsed.payload);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("ciphertext: ") + e.what());
    }
    return out;
}

namespace {

struct KatSeeds {
    std::vector<uint8_t> seed;
    std::vector<uint8_t> eseed;
};

KatSeeds derive_kat_seeds(std::span<const uint8_t> master, uint64_t index, size_t seed_bytes) {
    Shake256 xof;
    xof.absorb(master);
    std::array<uint8_t, 8> le{};
    for (int i = 0; i < 8; ++i) le[i] = static_cast<uint8_t>(index >> (8 * i));
    xof.absorb(le);
    xof.finalize();
    KatSeeds seeds;
    seeds.seed.resize(seed_bytes);
    seeds.eseed.resize(seed_bytes);
    xof.squeeze(seeds.seed);
    xof.squeeze(seeds.eseed);
    return seeds;
}

}  // namespace

std::string generate_kat(const ParamSet& ps, uint64_t count,
                         std::span<const uint8_t> master_seed) {
    std::ostringstream out;
    out << "# ledakem known-answer tests\n";
    out << "params = " << ps.id << "\n\n";
    for (uint64_t i = 0; i < count; ++i) {
        auto seeds = derive_kat_seeds(master_seed, i, ps.seed_bytes);
        auto kp = gen_keypair(ps, seeds.seed);
        Drbg entropy(seeds.eseed);
        auto enc = encap(kp.pk, ps, entropy);
        auto pk_digest = sha3_256(public_key_bytes(kp.pk));
        out << "count = " << i << '\n';
        out << "seed = " << hex_encode(seeds.seed) << '\n';
        out << "eseed = " << hex_encode(seeds.eseed) << '\n';
        out << "pk = " << hex_encode(pk_digest) << '\n';
        out << "ct = " << hex_encode(ciphertext_bytes(enc.ct)) << '\n';
        out << "ss = " << hex_encode(enc.shared_secret) << '\n';
        out << '\n';
    }
    return out.str();
}

KatVerifyResult verify_kat(const std::string& text) {
    KatVerifyResult result;
    std::istringstream in(text);
    std::string line;
    const ParamSet* ps = nullptr;

    struct Record {
        bool open = false;
        uint64_t count = 0;
        std::vector<uint8_t> seed, eseed, pk, ct, ss;
    } rec;

    auto check_record = [&](const Record& r) {
        ++result.records;
        auto fail = [&](const std::string& msg) {
            result.errors.push_back("count " + std::to_string(r.count) + ": " + msg);
        };
        if (!ps) return fail("params line missing before records");
        try {
            auto kp = gen_keypair(*ps, r.seed);
            auto digest = sha3_256(public_key_bytes(kp.pk));
            if (!std::equal(digest.begin(), digest.end(), r.pk.begin(), r.pk.end()))
                return fail("public key digest mismatch");
            Drbg entropy(r.eseed);
            auto enc = encap(kp.pk, *ps, entropy);
            if (ciphertext_bytes(enc.ct) != r.ct) return fail("ciphertext mismatch");
            if (enc.shared_secret != r.ss) return fail("shared secret mismatch");
            auto decap_ss = decap(kp.sk, *ps, enc.ct);
            if (decap_ss != r.ss) return fail("decapsulated secret mismatch");
        } catch (const std::exception& e) {
            fail(std::string("exception: ") + e.what());
        }
    };

    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };

    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back("malformed line: " + line);
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "params") {
                ps = find_params(value);
                if (!ps) result.errors.push_back("unknown params id: " + value);
            } else if (key == "count") {
                if (rec.open) check_record(rec);
                rec = Record{};
                rec.open = true;
                rec.count = std::stoull(value);
            } else if (key == "seed") {
                rec.seed = hex_decode(value);
            } else if (key == "eseed") {
                rec.eseed = hex_decode(value);
            } else if (key == "pk") {
                rec.pk = hex_decode(value);
            } else if (key == "ct") {
                rec.ct = hex_decode(value);
            } else if (key == "ss") {
                rec.ss = hex_decode(value);
            } else {
                result.errors.push_back("unknown key: " + key);
            }
        } catch (const std::exception& e) {
            result.errors.push_back("line '" + line + "': " + e.what());
        }
    }
    if (rec.open) check_record(rec);
    return result;
}

}  // namespace ledakem
