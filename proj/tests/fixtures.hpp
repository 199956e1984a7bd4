#pragma once

// Shared test fixtures: an independent all-subsets ideal enumeration to
// check the library's Green-relation code against, small stored Cayley
// tables, every group of order at most 8, and a seeded random
// single-generator suite whose true projector is known by construction.

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jdlg/jdlg.hpp"

namespace fixtures {

using table = std::vector<std::vector<int>>;

// ---------------------------------------------------------------------
// Brute-force ideal structure: enumerate every nonempty subset and test
// the ideal property directly. Quadratic in 2^order, fine through order 8.

struct brute_ideals {
    std::vector<std::vector<int>> minimal_right;
    std::vector<std::vector<int>> minimal_left;
    std::vector<int> kernel;
    bool kernel_is_group = false;
};

inline brute_ideals brute_force_ideals(const jdlg::finite_semigroup& s) {
    const int n = s.order;
    if (n > 16) throw jdlg::malformed_parameters("brute_force_ideals: order too large");
    std::vector<unsigned> rights, lefts, twosided;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        bool right = true, left = true;
        for (int a = 0; a < n && (right || left); ++a) {
            if (!(mask >> a & 1u)) continue;
            for (int x = 0; x < n; ++x) {
                if (!(mask >> s.mul(a, x) & 1u)) right = false;
                if (!(mask >> s.mul(x, a) & 1u)) left = false;
            }
        }
        if (right) rights.push_back(mask);
        if (left) lefts.push_back(mask);
        if (right && left) twosided.push_back(mask);
    }
    auto minimal_of = [&](const std::vector<unsigned>& ideals) {
        std::vector<std::vector<int>> out;
        for (unsigned m : ideals) {
            bool minimal = true;
            for (unsigned other : ideals)
                if (other != m && (other & m) == other) minimal = false;
            if (!minimal) continue;
            std::vector<int> set;
            for (int i = 0; i < n; ++i)
                if (m >> i & 1u) set.push_back(i);
            out.push_back(std::move(set));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    brute_ideals out;
    out.minimal_right = minimal_of(rights);
    out.minimal_left = minimal_of(lefts);
    // the kernel is the unique minimal two-sided ideal; verify it really
    // sits inside every other two-sided ideal
    unsigned kmask = twosided.front();
    for (unsigned m : twosided)
        if (__builtin_popcount(m) < __builtin_popcount(kmask)) kmask = m;
    for (unsigned m : twosided)
        if ((m & kmask) != kmask)
            throw jdlg::error("brute_force_ideals: minimal two-sided ideal is not unique");
    for (int i = 0; i < n; ++i)
        if (kmask >> i & 1u) out.kernel.push_back(i);
    // group test on the kernel subtable: a two-sided identity with inverses
    for (int e : out.kernel) {
        bool identity = true;
        for (int k : out.kernel)
            if (s.mul(e, k) != k || s.mul(k, e) != k) identity = false;
        if (!identity) continue;
        bool inverses = true;
        for (int k : out.kernel) {
            bool found = false;
            for (int j : out.kernel)
                if (s.mul(k, j) == e && s.mul(j, k) == e) found = true;
            if (!found) inverses = false;
        }
        out.kernel_is_group = inverses;
        break;
    }
    return out;
}

// ---------------------------------------------------------------------
// Exhaustive table enumeration for tiny orders. There are 1, 8 and 113
// associative tables on 1, 2 and 3 labeled elements.

inline bool associative(const table& t) {
    const int n = static_cast<int>(t.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
    return true;
}

inline std::vector<table> all_associative_tables(int n) {
    if (n < 1 || n > 3)
        throw jdlg::malformed_parameters("all_associative_tables: order must be 1..3");
    const int cells = n * n;
    std::int64_t total = 1;
    for (int i = 0; i < cells; ++i) total *= n;
    std::vector<table> out;
    for (std::int64_t code = 0; code < total; ++code) {
        table t(n, std::vector<int>(n, 0));
        std::int64_t rest = code;
        for (int i = 0; i < cells; ++i) {
            t[i / n][i % n] = static_cast<int>(rest % n);
            rest /= n;
        }
        if (associative(t)) out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------
// Stored small tables with varied ideal structure.

inline table left_zero(int n) {
    table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = a;
    return t;
}

inline table right_zero(int n) {
    table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = b;
    return t;
}

inline table null_semigroup(int n) {
    // every product collapses to element 0
    return table(n, std::vector<int>(n, 0));
}

inline table cyclic(int n) {
    table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return t;
}

inline table chain_semilattice(int n) {
    // meet on the chain 0 < 1 < ... < n-1
    table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = std::min(a, b);
    return t;
}

// x, x^2, x^3, x^4 with x^5 = x^3: index 3, period 2
inline table monogenic_4() {
    table t(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            int e = a + b + 2; // exponent of x, 0-based element i is x^(i+1)
            while (e > 4) e -= 2;
            t[a][b] = e - 1;
        }
    return t;
}

// pairs (i, j) with (i, j)(k, l) = (i, l); elements numbered 2i + j
inline table rectangular_band_2x2() {
    table t(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) t[a][b] = (a / 2) * 2 + b % 2;
    return t;
}

inline std::vector<std::pair<std::string, table>> stored_small_tables() {
    return {
        {"left_zero_2", left_zero(2)},
        {"right_zero_2", right_zero(2)},
        {"null_2", null_semigroup(2)},
        {"z2", cyclic(2)},
        {"semilattice_2", chain_semilattice(2)},
        {"left_zero_3", left_zero(3)},
        {"z3", cyclic(3)},
        {"null_3", null_semigroup(3)},
        {"left_zero_4", left_zero(4)},
        {"right_zero_4", right_zero(4)},
        {"null_4", null_semigroup(4)},
        {"z4", cyclic(4)},
        {"semilattice_4", chain_semilattice(4)},
        {"monogenic_4", monogenic_4()},
        {"rectangular_band_2x2", rectangular_band_2x2()},
    };
}

// ---------------------------------------------------------------------
// Every group of order at most 8, up to isomorphism: cyclic groups,
// direct products of them, the dihedral and quaternion groups of order 8,
// and the symmetric group on three letters.

inline table direct_product(const table& a, const table& b) {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    table t(na * nb, std::vector<int>(na * nb));
    for (int x = 0; x < na * nb; ++x)
        for (int y = 0; y < na * nb; ++y)
            t[x][y] = a[x / nb][y / nb] * nb + b[x % nb][y % nb];
    return t;
}

// multiplication table of the permutation group generated by `gens`
inline table permutation_group(std::vector<std::vector<int>> gens) {
    const int n = static_cast<int>(gens.front().size());
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    std::vector<std::vector<int>> elems{id};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
            std::vector<int> prod(n);
            for (int x = 0; x < n; ++x) prod[x] = g[elems[i][x]];
            if (std::find(elems.begin(), elems.end(), prod) == elems.end())
                elems.push_back(prod);
        }
    const int m = static_cast<int>(elems.size());
    table t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<int> prod(n);
            for (int x = 0; x < n; ++x) prod[x] = elems[a][elems[b][x]];
            t[a][b] = static_cast<int>(
                std::find(elems.begin(), elems.end(), prod) - elems.begin());
        }
    return t;
}

// unit quaternions {1, -1, i, -i, j, -j, k, -k} as (axis, sign) pairs
inline table quaternion_8() {
    // axis 0 is the scalar; i*j = k and cyclically, squares of i, j, k are -1
    auto mul = [](int a, int b) { // elements coded axis * 2 + (sign < 0)
        int ax = a / 2, bx = b / 2, sign = (a % 2) ^ (b % 2);
        int cx;
        if (ax == 0)
            cx = bx;
        else if (bx == 0)
            cx = ax;
        else if (ax == bx) {
            cx = 0;
            sign ^= 1;
        } else {
            cx = 6 - ax - bx; // the remaining axis among {1, 2, 3}
            const bool cyclic_order = (bx - ax + 3) % 3 == 1; // i->j->k->i
            if (!cyclic_order) sign ^= 1;
        }
        return cx * 2 + sign;
    };
    table t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) t[a][b] = mul(a, b);
    return t;
}

inline std::vector<std::pair<std::string, table>> group_tables_up_to_8() {
    return {
        {"z1", cyclic(1)},
        {"z2", cyclic(2)},
        {"z3", cyclic(3)},
        {"z4", cyclic(4)},
        {"z2xz2", direct_product(cyclic(2), cyclic(2))},
        {"z5", cyclic(5)},
        {"z6", cyclic(6)},
        {"s3", permutation_group({{1, 2, 0}, {1, 0, 2}})},
        {"z7", cyclic(7)},
        {"z8", cyclic(8)},
        {"z2xz4", direct_product(cyclic(2), cyclic(4))},
        {"z2xz2xz2", direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))},
        {"d4", permutation_group({{1, 2, 3, 0}, {3, 2, 1, 0}})},
        {"q8", quaternion_8()},
    };
}

// ---------------------------------------------------------------------
// Seeded random single-generator representations T = V D V^{-1} with
// k unimodular eigenvalues and the rest of modulus in [0.2, 0.89], so
// both spectral clusters stay clear of the 0.99 splitting circle. The
// true projector V (I_k + 0) V^{-1} comes with each case.

struct random_case {
    jdlg::matrix_representation rep;
    jdlg::cmat q_true;
    int dim = 0;
    int reversible_dim = 0;
};

inline std::vector<random_case> random_single_generator_suite(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<random_case> out;
    while (static_cast<int>(out.size()) < count) {
        const int d = 2 + static_cast<int>(unif(rng) * 7.0) % 7;
        const int k = static_cast<int>(unif(rng) * (d + 1)) % (d + 1);
        jdlg::cmat dm = jdlg::cmat::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            if (i < k)
                dm(i, i) = std::polar(1.0, 2 * 3.14159265358979323846 * unif(rng));
            else
                dm(i, i) =
                    std::polar(0.2 + 0.69 * unif(rng), 2 * 3.14159265358979323846 * unif(rng));
        }
        jdlg::cmat v = jdlg::cmat::Identity(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                v(r, c) += jdlg::complexd(0.3 * gauss(rng), 0.3 * gauss(rng));
        Eigen::JacobiSVD<jdlg::cmat> svd(v);
        if (svd.singularValues()(0) / svd.singularValues()(d - 1) > 20) continue;
        jdlg::cmat vinv = v.inverse();
        jdlg::cmat pz = jdlg::cmat::Zero(d, d);
        for (int i = 0; i < k; ++i) pz(i, i) = 1;
        random_case rc;
        rc.rep = jdlg::make_matrix_representation({"t"}, {v * dm * vinv}, true,
                                                  jdlg::naturals_model(1));
        rc.q_true = v * pz * vinv;
        rc.dim = d;
        rc.reversible_dim = k;
        out.push_back(std::move(rc));
    }
    return out;
}

} // namespace fixtures
