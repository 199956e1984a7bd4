#pragma once

// The Klawe semidirect product: a left-amenable semigroup whose Folner
// averages of a bounded orbit converge to a limit that is not invariant,
// so no splitting theory applies on the function-space side. Elements are
// pairs (m, n) with m >= 0 and n >= 1 under
//   (m1, n1) * (m2, n2) = (2^(n2) m1 + m2, n1 + n2),
// the observable is f = indicator of the right ideal S * (0, 1), and the
// windows are F_N = {(m, n) : 0 <= m < 4^N, 1 <= n <= N}.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/serialization.hpp"

namespace jdlg {

using bigint = boost::multiprecision::cpp_int;

struct klawe_element {
    bigint m;
    long long n = 1;
};

inline void klawe_require(const klawe_element& x) {
    if (x.m < 0 || x.n < 1)
        throw malformed_parameters("klawe element needs m >= 0 and n >= 1");
}

inline klawe_element klawe_mul(const klawe_element& a, const klawe_element& b) {
    klawe_require(a);
    klawe_require(b);
    klawe_element out;
    out.m = (bigint(1) << static_cast<unsigned>(b.n)) * a.m + b.m;
    out.n = a.n + b.n;
    return out;
}

// f(m, n) = [m even and n >= 2], the closed form of 1_{S * (0,1)}: every
// product u * (0, 1) has first coordinate 2 u.m and height u.n + 1 >= 2,
// and conversely such a pair factors as (m/2, n-1) * (0, 1).
inline int klawe_f(const klawe_element& x) {
    klawe_require(x);
    return (x.m % 2 == 0 && x.n >= 2) ? 1 : 0;
}

// (R_s f)(x) = f(x * s), the translate of the observable by s.
inline int klawe_translate_f(const klawe_element& s, const klawe_element& x) {
    return klawe_f(klawe_mul(x, s));
}

// F_N in row order: n = 1..N, m = 0..4^N - 1.
inline std::vector<klawe_element> klawe_folner(int n) {
    if (n < 1) throw malformed_parameters("klawe_folner: N must be positive");
    if (n > 10) throw malformed_parameters("klawe_folner: N > 10 enumerates over 10^7 elements");
    std::vector<klawe_element> out;
    const bigint width = bigint(1) << static_cast<unsigned>(2 * n);
    out.reserve(static_cast<std::size_t>(n) << (2 * n));
    for (long long h = 1; h <= n; ++h)
        for (bigint m = 0; m < width; ++m) out.push_back({m, h});
    return out;
}

// Distinct translates R_s f restricted to a finite evaluation window.
// Inside the semigroup (s has height at least one) every translate is a
// constant: x * s has first coordinate 2^(s.n) x.m + s.m whose parity is
// that of s.m alone, and height at least two. Allowing height-zero
// translations (the monoid extension (m, 0) acting by m-shift) produces
// the four-function orbit {f, 1_A - f, 0, 1} with A = {n >= 2}.
struct klawe_orbit_report {
    std::vector<std::string> semigroup_orbit;    // distinct translates, s.n >= 1
    std::vector<std::string> monoid_orbit;       // translates including height zero
    bool monoid_orbit_is_reference_four = false; // exactly {f, 1_A - f, 0, 1}
    int window_m = 0;
    int window_n = 0;
};

inline klawe_orbit_report klawe_orbit(int shift_max = 6, int height_max = 4, int window_m = 32,
                                      int window_n = 8) {
    auto table_of = [&](auto&& fn) {
        std::vector<int> t;
        for (int m = 0; m <= window_m; ++m)
            for (int n = 1; n <= window_n; ++n) t.push_back(fn(klawe_element{m, n}));
        return t;
    };
    const auto t_f = table_of([](const klawe_element& x) { return klawe_f(x); });
    const auto t_zero = table_of([](const klawe_element&) { return 0; });
    const auto t_one = table_of([](const klawe_element&) { return 1; });
    const auto t_flip =
        table_of([](const klawe_element& x) { return (x.m % 2 == 1 && x.n >= 2) ? 1 : 0; });
    auto classify = [&](const std::vector<int>& t) -> std::string {
        if (t == t_f) return "f";
        if (t == t_zero) return "0";
        if (t == t_one) return "1";
        if (t == t_flip) return "1_A - f";
        return "other";
    };
    klawe_orbit_report rep;
    rep.window_m = window_m;
    rep.window_n = window_n;
    std::map<std::vector<int>, std::string> seen_semi, seen_monoid;
    for (int a = 0; a <= shift_max; ++a)
        for (int b = 0; b <= height_max; ++b) {
            std::vector<int> t;
            for (int m = 0; m <= window_m; ++m)
                for (int n = 1; n <= window_n; ++n) {
                    // direct product formula so height zero is expressible
                    bigint first = (bigint(1) << static_cast<unsigned>(b)) * m + a;
                    long long height = n + b;
                    t.push_back((first % 2 == 0 && height >= 2) ? 1 : 0);
                }
            const std::string label = classify(t);
            if (b >= 1) seen_semi.emplace(t, label);
            seen_monoid.emplace(t, label);
        }
    for (const auto& [t, label] : seen_semi) rep.semigroup_orbit.push_back(label);
    for (const auto& [t, label] : seen_monoid) rep.monoid_orbit.push_back(label);
    std::sort(rep.semigroup_orbit.begin(), rep.semigroup_orbit.end());
    std::sort(rep.monoid_orbit.begin(), rep.monoid_orbit.end());
    rep.monoid_orbit_is_reference_four =
        rep.monoid_orbit == std::vector<std::string>{"0", "1", "1_A - f", "f"};
    return rep;
}

// The failure of splitting made quantitative: averaging the translated
// observable over F_N * (0, 1) at any base point gives exactly one (every
// translate evaluates to one there), while the single translate R_(1,1) f
// is identically zero, so the limit of averages is not in the closed
// convex hull of the orbit tail and no mean-splitting can reproduce it.
struct klawe_counterexample_report {
    bool translate_vanishes = false;         // R_(1,1) f == 0 on the whole window checked
    long long vanishing_checked = 0;         // points checked for the line above
    std::vector<long long> average_numerators;   // per N: count of ones over F_N * (0,1)
    std::vector<long long> average_denominators; // per N: |F_N|
    bool averages_exactly_one = false;       // numerator == denominator for every N
    std::vector<std::pair<std::string, double>> base_points; // label, average value
    klawe_orbit_report orbit;
};

inline klawe_counterexample_report klawe_counterexample(int n_max = 8, int vanish_window = 20) {
    if (n_max < 1 || n_max > 9)
        throw malformed_parameters("klawe_counterexample: n_max must be in 1..9");
    klawe_counterexample_report rep;
    rep.translate_vanishes = true;
    for (int m = 0; m <= vanish_window; ++m)
        for (int n = 1; n <= vanish_window; ++n) {
            if (klawe_translate_f({1, 1}, {m, n}) != 0) rep.translate_vanishes = false;
            ++rep.vanishing_checked;
        }
    const std::vector<klawe_element> bases{{0, 1}, {1, 1}, {3, 2}};
    const std::vector<std::string> base_labels{"(0,1)", "(1,1)", "(3,2)"};
    rep.averages_exactly_one = true;
    for (int n = 1; n <= n_max; ++n) {
        const auto window = klawe_folner(n);
        long long count = 0;
        for (const auto& u : window) {
            const klawe_element s = klawe_mul(u, {0, 1});
            count += klawe_translate_f(s, bases[0]);
        }
        rep.average_numerators.push_back(count);
        rep.average_denominators.push_back(static_cast<long long>(window.size()));
        if (count != static_cast<long long>(window.size())) rep.averages_exactly_one = false;
    }
    {
        const auto window = klawe_folner(std::min(n_max, 6));
        for (std::size_t b = 0; b < bases.size(); ++b) {
            long long count = 0;
            for (const auto& u : window)
                count += klawe_translate_f(klawe_mul(u, {0, 1}), bases[b]);
            rep.base_points.emplace_back(base_labels[b],
                                         static_cast<double>(count) /
                                             static_cast<double>(window.size()));
        }
    }
    rep.orbit = klawe_orbit();
    return rep;
}

// Machine-word model of the same semigroup, for translation-defect
// arithmetic through the generic Folner operations. Heights stay small
// there, so int64 components suffice under explicit overflow guards.
inline discrete_semigroup_model klawe_model() {
    discrete_semigroup_model m;
    m.name = "klawe";
    m.arity = 2;
    m.kind = discrete_semigroup_model::kind_t::custom;
    m.custom_mul = [](const element& a, const element& b) -> element {
        if (a.size() != 2 || b.size() != 2)
            throw dimension_mismatch("klawe model: elements are pairs");
        if (a[0] < 0 || b[0] < 0 || a[1] < 1 || b[1] < 1)
            throw malformed_parameters("klawe model: need m >= 0 and n >= 1");
        if (b[1] >= 62) throw malformed_parameters("klawe model: height too large for int64");
        std::int64_t shifted;
        if (__builtin_mul_overflow(a[0], std::int64_t{1} << b[1], &shifted))
            throw malformed_parameters("klawe model: overflow");
        element out(2);
        if (__builtin_add_overflow(shifted, b[0], &out[0]))
            throw malformed_parameters("klawe model: overflow");
        out[1] = a[1] + b[1];
        return out;
    };
    return m;
}

inline folner_sequence klawe_folner_sequence() {
    folner_sequence f;
    f.name = "klawe_boxes";
    f.model = klawe_model();
    f.window = [](int n) {
        if (n < 1) return std::vector<element>{};
        if (n > 10) throw malformed_parameters("klawe windows beyond N = 10 are too large");
        std::vector<element> out;
        const std::int64_t width = std::int64_t{1} << (2 * n);
        for (std::int64_t h = 1; h <= n; ++h)
            for (std::int64_t m = 0; m < width; ++m) out.push_back({m, h});
        return out;
    };
    f.shell = [](int n) {
        if (n < 1) return std::vector<element>{};
        if (n > 10) throw malformed_parameters("klawe windows beyond N = 10 are too large");
        std::vector<element> out;
        const std::int64_t width = std::int64_t{1} << (2 * n);
        const std::int64_t prev_width = n == 1 ? 0 : std::int64_t{1} << (2 * (n - 1));
        for (std::int64_t h = 1; h <= n; ++h) {
            const std::int64_t from = h <= n - 1 ? prev_width : 0;
            for (std::int64_t m = from; m < width; ++m) out.push_back({m, h});
        }
        return out;
    };
    return f;
}

inline json klawe_report_to_json(const klawe_counterexample_report& r) {
    json averages = json::array();
    for (std::size_t i = 0; i < r.average_numerators.size(); ++i)
        averages.push_back({{"N", i + 1},
                            {"numerator", r.average_numerators[i]},
                            {"denominator", r.average_denominators[i]}});
    json base = json::array();
    for (const auto& [label, value] : r.base_points)
        base.push_back({{"base_point", label}, {"average", value}});
    return json{
        {"translate_vanishes", r.translate_vanishes},
        {"vanishing_checked", r.vanishing_checked},
        {"averages", std::move(averages)},
        {"averages_exactly_one", r.averages_exactly_one},
        {"base_points", std::move(base)},
        {"orbit",
         {{"semigroup_orbit", r.orbit.semigroup_orbit},
          {"monoid_orbit", r.orbit.monoid_orbit},
          {"monoid_orbit_is_reference_four", r.orbit.monoid_orbit_is_reference_four},
          {"note", "translates inside the semigroup are constants; the four-function "
                   "orbit appears over the height-zero monoid extension"}}}};
}

} // namespace jdlg
