#pragma once

// Averaging along a Folner sequence: translation defects, Cesaro averages
// with Cauchy-window convergence, upper and lower densities, density-one
// convergence, and the battery of almost-weak-stability characterizations
// evaluated against a representation vector.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"
#include "jdlg/serialization.hpp"

namespace jdlg {

struct defect_result {
    std::int64_t sym_diff = 0;   // |sF_n (+) F_n| as an exact count
    std::int64_t window_size = 0;
    double value = 0;            // sym_diff / window_size
};

// |s F_n symmetric-difference F_n| / |F_n| for the left translate by s.
inline defect_result folner_defect(const folner_sequence& f, const element& s, int n) {
    if (n < 1) throw malformed_parameters("folner_defect: n must be positive");
    const auto window = f.window(n);
    if (window.empty()) throw malformed_parameters("folner_defect: empty window");
    std::unordered_set<element, element_hash> base(window.begin(), window.end());
    std::unordered_set<element, element_hash> translated;
    for (const auto& e : window) translated.insert(f.model.mul(s, e));
    std::int64_t diff = 0;
    for (const auto& e : translated)
        if (!base.count(e)) ++diff;
    for (const auto& e : base)
        if (!translated.count(e)) ++diff;
    defect_result r;
    r.sym_diff = diff;
    r.window_size = static_cast<std::int64_t>(base.size());
    r.value = static_cast<double>(r.sym_diff) / static_cast<double>(r.window_size);
    return r;
}

namespace detail {

// Walks n = 1..n_max keeping running sums; uses shells when the sequence
// provides them and falls back to full re-enumeration per step otherwise.
// visit(n, count, sum) sees the accumulated state after window n; return
// false to stop the walk.
inline void walk_partials(const folner_sequence& f, const std::function<complexd(const element&)>& fn,
                          int n_max,
                          const std::function<bool(int, std::int64_t, complexd)>& visit) {
    if (f.shell) {
        complexd sum = 0;
        std::int64_t count = 0;
        for (int n = 1; n <= n_max; ++n) {
            for (const auto& e : f.shell(n)) {
                sum += fn(e);
                ++count;
            }
            if (count > 0 && !visit(n, count, sum)) return;
        }
    } else {
        for (int n = 1; n <= n_max; ++n) {
            complexd sum = 0;
            std::int64_t count = 0;
            for (const auto& e : f.window(n)) {
                sum += fn(e);
                ++count;
            }
            if (count > 0 && !visit(n, count, sum)) return;
        }
    }
}

} // namespace detail

// Cesaro average of fn over F_n, declared converged at the first n where
// the last `window` partial averages have diameter below convergence_tol.
inline convergence_report average(const folner_sequence& f,
                                  const std::function<complexd(const element&)>& fn, int n_max,
                                  const tolerances& tol = {}, int window = 10,
                                  bool stop_on_convergence = true) {
    if (n_max < 1) throw malformed_parameters("average: n_max must be positive");
    convergence_report rep;
    rep.cauchy_window = window;
    rep.tol = tol.convergence_tol;
    std::deque<complexd> recent;
    detail::walk_partials(f, fn, n_max, [&](int n, std::int64_t count, complexd sum) {
        const complexd p = sum / static_cast<double>(count);
        rep.partials.emplace_back(count, p);
        rep.limit = p;
        recent.push_back(p);
        if (static_cast<int>(recent.size()) > window) recent.pop_front();
        if (static_cast<int>(recent.size()) == window && !rep.converged) {
            double diam = 0;
            for (const auto& a : recent)
                for (const auto& b : recent) diam = std::max(diam, std::abs(a - b));
            if (diam < tol.convergence_tol) {
                rep.converged = true;
                rep.converged_at = n;
            }
        }
        return !(rep.converged && stop_on_convergence);
    });
    return rep;
}

struct density_result {
    double upper = 0; // max of the partial densities over the tail n > n_max/2
    double lower = 0; // min over the same tail
    std::vector<std::pair<std::int64_t, double>> partials;
};

// Upper and lower density of a predicate along the window sequence.
inline density_result density(const folner_sequence& f,
                              const std::function<bool(const element&)>& pred, int n_max) {
    if (n_max < 1) throw malformed_parameters("density: n_max must be positive");
    density_result r;
    detail::walk_partials(
        f, [&](const element& e) { return complexd(pred(e) ? 1.0 : 0.0, 0.0); }, n_max,
        [&](int, std::int64_t count, complexd sum) {
            r.partials.emplace_back(count, sum.real() / static_cast<double>(count));
            return true;
        });
    if (r.partials.empty()) throw malformed_parameters("density: no nonempty window");
    std::size_t tail = r.partials.size() / 2;
    r.upper = 0;
    r.lower = 1;
    for (std::size_t i = tail; i < r.partials.size(); ++i) {
        r.upper = std::max(r.upper, r.partials[i].second);
        r.lower = std::min(r.lower, r.partials[i].second);
    }
    return r;
}

struct d_lim_result {
    bool density_one = false;
    std::vector<double> increments; // densities over F_{2^k} \ F_{2^(k-1)}
};

// Whether pred holds along a set of density one, judged on increment
// densities over geometrically growing shells F_{2^k} \ F_{2^(k-1)}.
// Partial densities themselves approach one only at boundary rate 1/n, so
// testing them directly against a tight tolerance misclassifies; by
// Cesaro-Stolz the increments converge to the same limit and reach it at
// the interior rate. The verdict needs the last three increments within
// slack of one.
inline d_lim_result d_lim_density(const folner_sequence& f,
                                  const std::function<bool(const element&)>& pred, int n_max,
                                  double slack) {
    if (n_max < 4) throw malformed_parameters("d_lim_density: n_max must be at least 4");
    std::vector<std::int64_t> counts{0}, sizes{0}; // cumulative at n = 2^k
    std::int64_t count = 0, size = 0;
    int next = 1;
    detail::walk_partials(
        f, [&](const element& e) { return complexd(pred(e) ? 1.0 : 0.0, 0.0); }, n_max,
        [&](int n, std::int64_t cnt, complexd sum) {
            if (n == next) {
                counts.push_back(static_cast<std::int64_t>(sum.real() + 0.5));
                sizes.push_back(cnt);
                next *= 2;
            }
            count = static_cast<std::int64_t>(sum.real() + 0.5);
            size = cnt;
            return true;
        });
    d_lim_result r;
    for (std::size_t k = 1; k + 1 < counts.size(); ++k) {
        const std::int64_t dc = counts[k + 1] - counts[k];
        const std::int64_t ds = sizes[k + 1] - sizes[k];
        if (ds > 0) r.increments.push_back(static_cast<double>(dc) / static_cast<double>(ds));
    }
    if (r.increments.size() < 3) {
        // too few shells to judge (constant windows): use the final density
        r.density_one = size > 0 && count == size;
        return r;
    }
    r.density_one = true;
    for (std::size_t k = r.increments.size() - 3; k < r.increments.size(); ++k)
        if (r.increments[k] < 1.0 - slack) r.density_one = false;
    return r;
}

// Orbit norms small along a set of density one: the d-lim form of almost
// weak stability for a single vector.
inline d_lim_result d_lim_check(const matrix_representation& rep, const folner_sequence& f,
                                const cvec& xi, double radius, int n_max, double slack = 1e-3) {
    if (radius <= 0) throw malformed_parameters("d_lim_check: radius must be positive");
    return d_lim_density(
        f, [&](const element& e) { return (apply(rep, e) * xi).norm() < radius; }, n_max, slack);
}

// ---------------------------------------------------------------------------
// Characterization battery

struct battery_options {
    int n_max_one = 4096;   // additive models, one generator
    int n_max_multi = 512;  // additive models, two or more generators
    int n_max_table = 4;    // constant table windows
    double battery_tol = 1e-3;    // verdict threshold on averaged statistics
    double d_lim_radius_rel = 0.1; // radius for the density item, relative to |xi|
    int cauchy_window = 10;
};

struct battery_item {
    std::string item; // invariant_mean, folner_average, density_limit, uniform_average
    int p = 1;
    bool decided = false;
    bool member = false; // consistent with xi in the decaying part
    double value = 0;
    double threshold = 0;
    int depth = 0;
    std::string note;
};

struct battery_report {
    std::vector<battery_item> items;
    bool agreement = false;   // every item decided and all verdicts equal
    std::vector<std::string> not_evaluated; // out-of-scope characterizations with reasons
};

namespace detail {

inline double curve_window_span(const std::vector<double>& curve, int window) {
    if (curve.empty()) return 0.0;
    const int w = std::min<int>(window, static_cast<int>(curve.size()));
    double lo = curve.back(), hi = curve.back();
    for (int i = 0; i < w; ++i) {
        lo = std::min(lo, curve[curve.size() - 1 - i]);
        hi = std::max(hi, curve[curve.size() - 1 - i]);
    }
    return hi - lo;
}

inline bool curve_converged(const std::vector<double>& curve, int window, double tol) {
    return curve.size() >= 2 && curve_window_span(curve, window) < tol;
}

} // namespace detail

// Evaluates the realizable almost-weak-stability characterizations of a
// single vector against one sweep of the orbit. Functionals sampled for
// the p = 1 statistics: the coordinates, the normalized vector itself,
// and the flat vector; the p = 2 suprema are exact through the largest
// eigenvalue of the averaged outer-product matrix, which also bounds the
// p = 1 supremum by Cauchy-Schwarz.
inline battery_report characterization_battery(const matrix_representation& rep,
                                               const folner_sequence& f, const cvec& xi,
                                               const battery_options& opts = {},
                                               [[maybe_unused]] const tolerances& tol = {}) {
    if (xi.size() != rep.dim) throw dimension_mismatch("battery: vector size");
    battery_report report;
    report.not_evaluated = {
        "neighborhood_mean: quantifies over all invariant means, not realizable from one sequence",
        "lower_banach_density: needs the infimum over all translates of all windows",
        "lower_folner_density: needs every Folner sequence, only one is given",
        "along_density_one_set: subsumed by density_limit on the given sequence"};

    const int d = rep.dim;
    const double nxi = xi.norm();
    int n_max = opts.n_max_table;
    if (f.model.kind == discrete_semigroup_model::kind_t::additive)
        n_max = rep.generators.size() == 1 ? opts.n_max_one : opts.n_max_multi;

    auto push = [&](const std::string& item, int p, bool decided, bool member, double value,
                    int depth, const std::string& note) {
        battery_item it;
        it.item = item;
        it.p = p;
        it.decided = decided;
        it.member = member;
        it.value = value;
        it.threshold = opts.battery_tol;
        it.depth = depth;
        it.note = note;
        report.items.push_back(it);
    };

    if (nxi == 0) {
        for (const char* item : {"invariant_mean", "folner_average", "density_limit", "uniform_average"})
            for (int p : {1, 2})
                push(item, p, true, true, 0.0, 0, "zero vector");
        report.agreement = true;
        return report;
    }

    // functionals for the p = 1 sample
    std::vector<cvec> funcs;
    for (int j = 0; j < d; ++j) funcs.push_back(cvec::Unit(d, j));
    funcs.push_back(xi / nxi);
    funcs.push_back(cvec::Constant(d, complexd(1.0 / std::sqrt(static_cast<double>(d)), 0.0)));
    const int nf = static_cast<int>(funcs.size());

    // one sweep, bucketed by window index so every partial is recoverable
    struct bucket {
        std::vector<double> p1, p2; // per functional
        cmat outer;
        double norm1 = 0;        // sum of orbit norms, bounds the p = 1 supremum
        std::int64_t inside = 0; // orbit norm below the density radius
        std::int64_t count = 0;
    };
    std::vector<bucket> buckets(static_cast<std::size_t>(n_max) + 1);
    for (auto& b : buckets) {
        b.p1.assign(nf, 0.0);
        b.p2.assign(nf, 0.0);
        b.outer = cmat::Zero(d, d);
    }
    const double radius = opts.d_lim_radius_rel * nxi;
    const bool shells = static_cast<bool>(f.shell);
    for (int n = 1; n <= n_max; ++n) {
        auto elems = shells ? f.shell(n) : f.window(n);
        if (!shells && n < n_max) continue; // without shells only the full window is used
        for (const auto& e : elems) {
            cvec v = apply(rep, e) * xi;
            auto& b = buckets[n];
            for (int j = 0; j < nf; ++j) {
                const double a = std::abs(funcs[j].dot(v));
                b.p1[j] += a;
                b.p2[j] += a * a;
            }
            b.outer += v * v.adjoint();
            b.norm1 += v.norm();
            if (v.norm() < radius) ++b.inside;
            ++b.count;
        }
    }

    // prefix curves per window
    std::vector<std::vector<double>> avg1(nf), avg2(nf);
    std::vector<double> lam_curve, sample_curve, norm_curve;
    std::vector<std::int64_t> cum_inside, cum_count;
    {
        std::vector<double> s1(nf, 0.0), s2(nf, 0.0);
        cmat so = cmat::Zero(d, d);
        double sn = 0;
        std::int64_t ci = 0, cc = 0;
        for (int n = 1; n <= n_max; ++n) {
            const auto& b = buckets[n];
            for (int j = 0; j < nf; ++j) {
                s1[j] += b.p1[j];
                s2[j] += b.p2[j];
            }
            so += b.outer;
            sn += b.norm1;
            ci += b.inside;
            cc += b.count;
            if (cc == 0) continue;
            const double inv = 1.0 / static_cast<double>(cc);
            double smax = 0;
            for (int j = 0; j < nf; ++j) {
                avg1[j].push_back(s1[j] * inv);
                avg2[j].push_back(s2[j] * inv);
                smax = std::max(smax, s1[j] * inv);
            }
            Eigen::SelfAdjointEigenSolver<cmat> eig(cmat(0.5 * (so + cmat(so.adjoint())) * inv));
            lam_curve.push_back(std::max(0.0, eig.eigenvalues().maxCoeff()));
            sample_curve.push_back(smax);
            norm_curve.push_back(sn * inv);
            cum_inside.push_back(ci);
            cum_count.push_back(cc);
        }
    }
    if (lam_curve.empty()) throw malformed_parameters("battery: no nonempty window");
    const int depth = static_cast<int>(lam_curve.size());

    // curves are settled when their Cauchy window is a decade below the
    // verdict threshold; demanding convergence_tol here would starve box
    // windows of higher arity, whose partials move like 1/n^3 per step
    const double settle = 0.1 * opts.battery_tol;

    // invariant_mean and folner_average, p = 1 and 2: the mean is realized
    // as the Folner limit, so both items read the same curves; the mean
    // item additionally demands that every functional curve has settled.
    for (int p : {1, 2}) {
        const auto& curves = p == 1 ? avg1 : avg2;
        bool all_conv = true;
        double final_max = 0, move = 0;
        for (int j = 0; j < nf; ++j) {
            all_conv = all_conv && detail::curve_converged(curves[j], opts.cauchy_window, settle);
            move = std::max(move, detail::curve_window_span(curves[j], opts.cauchy_window));
            final_max = std::max(final_max, curves[j].back());
        }
        // a curve that has not settled still yields a verdict when its
        // distance to the threshold dwarfs the recent movement; permutation
        // orbits need this, their averages drift like 1/n around 1/3
        const bool decided = all_conv || final_max > opts.battery_tol + move ||
                             final_max + move < opts.battery_tol;
        push("invariant_mean", p, decided, final_max < opts.battery_tol, final_max, depth,
             all_conv    ? "mean realized as the settled Folner limit"
             : decided   ? "verdict margin exceeds the residual curve movement"
                         : "functional averages not settled");
        push("folner_average", p, decided, final_max < opts.battery_tol, final_max, depth,
             "largest averaged functional of the orbit");
    }

    // density_limit: p-independent, judged on shell increments
    {
        std::vector<double> incs;
        std::size_t prev = 0;
        for (std::size_t k = 1; k < cum_count.size(); k *= 2) {
            const std::int64_t dc = cum_inside[k] - cum_inside[prev];
            const std::int64_t ds = cum_count[k] - cum_count[prev];
            if (ds > 0) incs.push_back(static_cast<double>(dc) / static_cast<double>(ds));
            prev = k;
        }
        bool decided = incs.size() >= 3;
        bool member = false;
        double value = 0;
        if (decided) {
            member = true;
            for (std::size_t k = incs.size() - 3; k < incs.size(); ++k) {
                value = incs[k];
                if (incs[k] < 1.0 - opts.battery_tol) member = false;
            }
        } else if (!cum_count.empty()) {
            // constant windows: the density is exact already
            decided = true;
            value = static_cast<double>(cum_inside.back()) / static_cast<double>(cum_count.back());
            member = value >= 1.0 - opts.battery_tol;
        }
        for (int p : {1, 2})
            push("density_limit", p, decided, member, value, depth,
                 "orbit inside radius " + std::to_string(radius) + " along shell increments");
    }

    // uniform_average: p = 2 exact via the top eigenvalue; p = 1 squeezed
    // between the sampled functionals and the averaged orbit norm, which
    // dominates the supremum since |<v, x'>| <= |v| for unit functionals
    {
        const bool conv2 = detail::curve_converged(lam_curve, opts.cauchy_window, settle);
        const double lam = lam_curve.back();
        const double move2 = detail::curve_window_span(lam_curve, opts.cauchy_window);
        const bool dec2 =
            conv2 || lam > opts.battery_tol + move2 || lam + move2 < opts.battery_tol;
        push("uniform_average", 2, dec2, lam < opts.battery_tol, lam, depth,
             "largest eigenvalue of the averaged orbit outer product");
        const double lower = sample_curve.back();
        const double upper = norm_curve.back();
        if (upper < opts.battery_tol)
            push("uniform_average", 1, true, true, upper, depth,
                 "averaged orbit norm bounds the supremum below threshold");
        else if (lower >= opts.battery_tol)
            push("uniform_average", 1, true, false, lower, depth,
                 "sampled functional already above threshold");
        else
            push("uniform_average", 1, false, false, lower, depth,
                 "sample below threshold but norm bound above: undecided");
    }

    report.agreement = true;
    for (const auto& it : report.items)
        if (!it.decided || it.member != report.items.front().member) report.agreement = false;
    return report;
}

inline json battery_report_to_json(const battery_report& r) {
    json items = json::array();
    for (const auto& it : r.items)
        items.push_back({{"item", it.item},
                         {"p", it.p},
                         {"decided", it.decided},
                         {"member", it.member},
                         {"value", it.value},
                         {"threshold", it.threshold},
                         {"depth", it.depth},
                         {"note", it.note}});
    return json{{"items", items}, {"agreement", r.agreement}, {"not_evaluated", r.not_evaluated}};
}

inline std::string battery_report_to_csv(const battery_report& r) {
    std::string out = "item,p,decided,member,value,threshold,depth,note\n";
    char buf[64];
    for (const auto& it : r.items) {
        out += it.item;
        out += ',';
        out += std::to_string(it.p);
        out += ',';
        out += it.decided ? "true" : "false";
        out += ',';
        out += it.member ? "true" : "false";
        out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", it.value);
        out += buf;
        out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", it.threshold);
        out += buf;
        out += ',';
        out += std::to_string(it.depth);
        out += ",\"";
        out += it.note;
        out += "\"\n";
    }
    return out;
}

inline json convergence_report_to_json(const convergence_report& r) {
    json partials = json::array();
    for (const auto& [count, value] : r.partials)
        partials.push_back({{"count", count}, {"value", complex_to_json(value)}});
    return json{{"converged", r.converged},
                {"limit", complex_to_json(r.limit)},
                {"converged_at", r.converged_at},
                {"cauchy_window", r.cauchy_window},
                {"tol", r.tol},
                {"partials", partials}};
}

inline std::string convergence_report_to_csv(const convergence_report& r) {
    std::string out = "n,count,re,im\n";
    char buf[64];
    for (std::size_t i = 0; i < r.partials.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(r.partials[i].first);
        out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.partials[i].second.real());
        out += buf;
        out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.partials[i].second.imag());
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace jdlg
