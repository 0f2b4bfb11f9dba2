#include "ledakem/params.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ledakem {

uint32_t ParamSet::m() const {
    return std::accumulate(m_vec.begin(), m_vec.end(), uint32_t{0});
}

uint32_t ParamSet::position_bits() const {
    uint32_t bits = 0;
    while ((uint64_t{1} << bits) < p) ++bits;
    return bits;
}

std::vector<std::vector<uint32_t>> ParamSet::weight_matrix() const {
    std::vector<std::vector<uint32_t>> w(n0, std::vector<uint32_t>(n0));
    for (uint32_t i = 0; i < n0; ++i)
        for (uint32_t j = 0; j < n0; ++j) w[i][j] = m_vec[(j + n0 - i) % n0];
    return w;
}

namespace {

size_t ss_bytes_for(Category c) {
    switch (c) {
        case Category::cat1: return 32;
        case Category::cat2_3: return 48;
        case Category::cat4_5: return 64;
    }
    throw std::logic_error("params: bad category");
}

size_t seed_bytes_for(Category c) {
    switch (c) {
        case Category::cat1: return 24;
        case Category::cat2_3: return 32;
        case Category::cat4_5: return 40;
    }
    throw std::logic_error("params: bad category");
}

ParamSet make(std::string id, Category c, uint32_t n0, uint32_t p, uint32_t dv,
              std::vector<uint32_t> m_vec, uint32_t t, double sl_da_pq, double sl_kra_pq,
              double sl_da_cl, double sl_kra_cl, double dfr, double delta) {
    ParamSet ps;
    ps.id = std::move(id);
    ps.category = c;
    ps.n0 = n0;
    ps.p = p;
    ps.dv = dv;
    ps.m_vec = std::move(m_vec);
    ps.t = t;
    ps.sl_da_pq = sl_da_pq;
    ps.sl_kra_pq = sl_kra_pq;
    ps.sl_da_cl = sl_da_cl;
    ps.sl_kra_cl = sl_kra_cl;
    ps.dfr_target = dfr;
    ps.l_max = 5;
    ps.delta = delta;
    ps.ss_bytes = ss_bytes_for(c);
    ps.seed_bytes = seed_bytes_for(c);
    return ps;
}

}  // namespace

const std::vector<ParamSet>& registry() {
    static const std::vector<ParamSet> sets = [] {
        std::vector<ParamSet> v;
        using C = Category;
        v.push_back(make("cat1-n2", C::cat1, 2, 27779, 17, {4, 3}, 224,
                         135.43, 134.84, 217.45, 223.66, 8.3e-9, 0.0));
        v.push_back(make("cat1-n3", C::cat1, 3, 18701, 19, {3, 2, 2}, 141,
                         135.63, 133.06, 216.42, 219.84, 1e-9, 0.0));
        v.push_back(make("cat1-n4", C::cat1, 4, 17027, 21, {4, 1, 1, 1}, 112,
                         136.11, 139.29, 216.86, 230.61, 1e-9, 0.0));
        v.push_back(make("cat2-3-n2", C::cat2_3, 2, 57557, 17, {6, 5}, 349,
                         200.47, 204.84, 341.52, 358.16, 1e-8, 0.0));
        v.push_back(make("cat2-3-n3", C::cat2_3, 3, 41507, 19, {3, 4, 4}, 220,
                         200.44, 200.95, 341.61, 351.57, 1e-8, 0.0));
        v.push_back(make("cat2-3-n4", C::cat2_3, 4, 35027, 17, {4, 3, 3, 3}, 175,
                         200.41, 201.40, 343.36, 351.96, 1e-8, 0.0));
        v.push_back(make("cat4-5-n2", C::cat4_5, 2, 99053, 19, {7, 6}, 474,
                         265.38, 267.00, 467.24, 478.67, 1e-8, 0.0));
        v.push_back(make("cat4-5-n3", C::cat4_5, 3, 72019, 19, {7, 4, 4}, 301,
                         265.70, 270.18, 471.67, 484.48, 1e-8, 0.0));
        v.push_back(make("cat4-5-n4", C::cat4_5, 4, 60509, 23, {4, 3, 3, 3}, 239,
                         265.48, 268.03, 473.38, 480.73, 1e-8, 0.0));
        return v;
    }();
    return sets;
}

const ParamSet* find_params(std::string_view id) {
    std::string key(id);
    // "cat3-nX" and "cat5-nX" are aliases of the paired categories.
    if (key.rfind("cat3-", 0) == 0) key = "cat2-3-" + key.substr(5);
    if (key.rfind("cat5-", 0) == 0) key = "cat4-5-" + key.substr(5);
    for (const auto& ps : registry())
        if (ps.id == key) return &ps;
    return nullptr;
}

uint64_t permanent(const std::vector<std::vector<uint32_t>>& matrix) {
    size_t n = matrix.size();
    for (const auto& row : matrix)
        if (row.size() != n) throw std::invalid_argument("permanent: matrix not square");
    if (n > 4) throw std::invalid_argument("permanent: only n <= 4 supported");
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    uint64_t acc = 0;
    do {
        uint64_t term = 1;
        for (size_t i = 0; i < n; ++i) term *= matrix[i][perm[i]];
        acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

bool is_prime(uint64_t x) {
    if (x < 2) return false;
    for (uint64_t d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

namespace {

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t acc = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) acc = (__uint128_t{acc} * base) % mod;
        base = (__uint128_t{base} * base) % mod;
        exp >>= 1;
    }
    return acc;
}

std::vector<uint64_t> prime_factors(uint64_t x) {
    std::vector<uint64_t> factors;
    for (uint64_t d = 2; d * d <= x; ++d) {
        if (x % d == 0) {
            factors.push_back(d);
            while (x % d == 0) x /= d;
        }
    }
    if (x > 1) factors.push_back(x);
    return factors;
}

}  // namespace

bool two_is_primitive_root(uint32_t p) {
    if (!is_prime(p)) return false;
    uint64_t order = p - 1;
    if (pow_mod(2, order, p) != 1) return false;
    for (uint64_t q : prime_factors(order))
        if (pow_mod(2, order / q, p) == 1) return false;
    return true;
}

std::vector<std::string> validate(const ParamSet& ps) {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& rule) { bad.push_back(rule); };

    if (ps.n0 < 2 || ps.n0 > 4) fail("n0: must be in {2,3,4}");
    if (ps.m_vec.size() != ps.n0) fail("m_vec: must have n0 entries");
    if (ps.p <= 2) fail("p: must exceed 2");
    if (!is_prime(ps.p)) fail("primality: p must be prime");
    else if (!two_is_primitive_root(ps.p)) fail("order: ord_p(2) must equal p-1");
    if (ps.dv % 2 == 0 || ps.dv == 0) fail("dv: must be odd");

    if (ps.m_vec.size() == ps.n0 && ps.n0 >= 2 && ps.n0 <= 4) {
        uint32_t m = ps.m();
        if (m % 2 == 0) fail("m: sum of m_vec must be odd");
        uint64_t mdv = static_cast<uint64_t>(m) * ps.dv;
        if (mdv % 2 == 0) fail("m*dv: must be odd");
        if (mdv >= ps.p) fail("m*dv: must be smaller than p");
        uint64_t perm = permanent(ps.weight_matrix());
        if (perm % 2 == 0) fail("permanent: permanent of weight matrix must be odd");
        if (perm >= ps.p) fail("permanent: permanent of weight matrix must be smaller than p");
    }

    if (ps.t == 0 || ps.t >= ps.n()) fail("t: must satisfy 0 < t < n0*p");
    if (ps.ss_bytes != 32 && ps.ss_bytes != 48 && ps.ss_bytes != 64)
        fail("ss_bytes: must be 32, 48 or 64");
    else if (ps.ss_bytes != ss_bytes_for(ps.category))
        fail("ss_bytes: must match category");
    if (ps.seed_bytes != seed_bytes_for(ps.category)) fail("seed_bytes: must match category");
    if (ps.l_max == 0) fail("l_max: must be positive");
    if (ps.delta < 0) fail("delta: must be nonnegative");
    return bad;
}

ParamSet toy_params(uint32_t p, uint32_t n0, uint32_t dv, std::vector<uint32_t> m_vec,
                    uint32_t t, uint32_t l_max, double delta) {
    ParamSet ps;
    std::ostringstream id;
    id << "toy-p" << p << "-n" << n0;
    ps.id = id.str();
    ps.category = Category::cat1;
    ps.n0 = n0;
    ps.p = p;
    ps.dv = dv;
    ps.m_vec = std::move(m_vec);
    ps.t = t;
    ps.dfr_target = 1.0;  // desk-scale sets make no failure-rate promise
    ps.l_max = l_max;
    ps.delta = delta;
    ps.ss_bytes = ss_bytes_for(ps.category);
    ps.seed_bytes = seed_bytes_for(ps.category);
    auto bad = validate(ps);
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "toy_params: invalid parameter set:";
        for (const auto& rule : bad) msg << " [" << rule << "]";
        throw std::invalid_argument(msg.str());
    }
    return ps;
}

}  // namespace ledakem
