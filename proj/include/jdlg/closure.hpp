#pragma once

// Approximate closure of a matrix semigroup under the entrywise topology,
// and extraction of the minimal idempotent that projects onto the
// reversible part.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "jdlg/errors.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"

namespace jdlg {

struct closure_net {
    std::vector<cmat> elements;
    std::vector<std::vector<int>> words; // generator indices, insertion order
    double dedup_eps = 0;
    bool saturated = false;  // false: element budget or pass cap hit first
    double norm_bound = 0;   // largest Frobenius norm seen
    int passes = 0;
};

struct closure_options {
    int max_elements = 512;
    double norm_cap_factor = 1e3;
};

namespace detail {

inline std::string word_key(const std::vector<int>& w) {
    std::string k;
    for (int g : w) {
        k += std::to_string(g);
        k += ',';
    }
    return k;
}

} // namespace detail

// Pass-based product closure: each pass multiplies all pairs from the
// previous snapshot, dedups new matrices against the net at closure_eps
// (norm and trace prefilter before the Frobenius compare), and records
// the generator word that produced each element. Duplicate words are
// skipped outright, so a single generator costs one product per power.
// Hitting max_elements returns a partial net with saturated = false.
inline closure_net approximate_closure(const matrix_representation& rep,
                                       const tolerances& tol = {},
                                       const closure_options& opts = {}) {
    require_power_bounded_sample(rep);
    const int d = rep.dim;
    closure_net net;
    net.dedup_eps = tol.closure_eps;
    const double sqrt_d = std::sqrt(static_cast<double>(d));

    double gen_scale = 1.0;
    for (const auto& g : rep.generators) gen_scale = std::max(gen_scale, g.norm());
    const double cap = opts.norm_cap_factor * gen_scale;

    std::vector<double> norms;
    std::vector<complexd> traces;
    std::unordered_set<std::string> seen_words;

    auto try_insert = [&](cmat m, std::vector<int> w) {
        const double nm = m.norm();
        if (!std::isfinite(nm) || nm > cap)
            throw not_power_bounded("closure: element norm " + std::to_string(nm) +
                                    " exceeds cap " + std::to_string(cap));
        const complexd tr = m.trace();
        for (std::size_t i = 0; i < net.elements.size(); ++i) {
            if (std::abs(norms[i] - nm) >= net.dedup_eps) continue;
            if (std::abs(traces[i] - tr) >= sqrt_d * net.dedup_eps) continue;
            if (frobenius_distance(net.elements[i], m) < net.dedup_eps) return false;
        }
        net.norm_bound = std::max(net.norm_bound, nm);
        norms.push_back(nm);
        traces.push_back(tr);
        net.elements.push_back(std::move(m));
        net.words.push_back(std::move(w));
        return true;
    };

    if (rep.monoid) {
        seen_words.insert(detail::word_key({}));
        try_insert(cmat::Identity(d, d), {});
    }
    for (std::size_t i = 0; i < rep.generators.size(); ++i) {
        std::vector<int> w{static_cast<int>(i)};
        seen_words.insert(detail::word_key(w));
        try_insert(rep.generators[i], std::move(w));
        if (static_cast<int>(net.elements.size()) >= opts.max_elements) return net;
    }

    for (net.passes = 1; net.passes <= tol.max_iterations; ++net.passes) {
        const std::size_t snapshot = net.elements.size();
        bool inserted = false;
        for (std::size_t i = 0; i < snapshot; ++i) {
            for (std::size_t j = 0; j < snapshot; ++j) {
                if (net.words[i].empty() || net.words[j].empty()) continue; // identity products repeat
                std::vector<int> w = net.words[i];
                w.insert(w.end(), net.words[j].begin(), net.words[j].end());
                if (!seen_words.insert(detail::word_key(w)).second) continue;
                if (try_insert(net.elements[i] * net.elements[j], std::move(w)))
                    inserted = true;
                if (static_cast<int>(net.elements.size()) >= opts.max_elements) return net;
            }
        }
        if (!inserted) {
            net.saturated = true;
            return net;
        }
    }
    return net;
}

namespace detail {

// Oblique projector with the same range and kernel as m, from its singular
// value decomposition truncated at rank r: Q = U1 (V1* U1)^{-1} V1*. For a
// kernel element of the enveloping semigroup this recovers exactly the
// projector onto the reversible part along the decaying part. ready stays
// false while any singular value sits between dead (rank_tol * scale) and
// alive (sqrt(rank_tol) * scale), meaning a contracting direction has not
// finished dying and the caller should square further.
struct completion {
    bool ready = false;
    int rank = 0;
    cmat projector;
};

inline completion complete_projector(const cmat& m, double scale, const tolerances& tol) {
    const int d = static_cast<int>(m.rows());
    completion out;
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol.rank_tol * scale;
    int r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    out.rank = r;
    if (r == 0) {
        out.ready = true;
        out.projector = cmat::Zero(d, d);
        return out;
    }
    const double live_floor = std::sqrt(tol.rank_tol) * scale;
    if (sv(r - 1) < live_floor) return out;
    cmat u1 = svd.matrixU().leftCols(r);
    cmat v1 = svd.matrixV().leftCols(r);
    cmat core = v1.adjoint() * u1;
    Eigen::JacobiSVD<cmat> core_svd(core);
    if (core_svd.singularValues()(r - 1) < 1e-8)
        throw no_convergence("projector completion: range and kernel nearly intersect");
    out.ready = true;
    out.projector = u1 * core.inverse() * v1.adjoint();
    return out;
}

// Squares a seed until its singular spectrum splits cleanly and the split
// rank has held for stability_window consecutive squarings. The window
// outlasts any contracting direction's crossing of the live band (a
// modulus at the 0.99 spectral boundary spends about ten squarings there)
// while directions of the reversible part stay alive forever. Shortcuts:
// an iterate that is already idempotent, a rank-zero iterate, or a
// revisit of an earlier iterate, whose cycle product is completed
// directly.
inline cmat squash_to_idempotent(const cmat& seed, double scale, const tolerances& tol) {
    const double cap = 1e6 * (1.0 + scale);
    const double cycle_eps = 0.05 * scale;
    const int stability_window = 12;
    std::vector<cmat> history;
    cmat u = seed;
    int stable_rank = -1;
    int stable_count = 0;
    for (int iter = 0; iter < 60; ++iter) {
        cmat u2 = u * u;
        if (frobenius_distance(u2, u) < tol.idempotent_tol) {
            auto c = complete_projector(u, scale, tol);
            if (c.ready) return c.projector;
        }
        auto c = complete_projector(u, scale, tol);
        if (c.ready) {
            if (c.rank == 0) return c.projector;
            if (c.rank == stable_rank) {
                if (++stable_count >= stability_window) return c.projector;
            } else {
                stable_rank = c.rank;
                stable_count = 1;
            }
        } else {
            stable_rank = -1;
            stable_count = 0;
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            if (frobenius_distance(history[h], u) < cycle_eps) {
                cmat prod = history[h];
                for (std::size_t k = h + 1; k < history.size(); ++k) prod = prod * history[k];
                prod = prod * u;
                auto cc = complete_projector(prod, scale, tol);
                if (cc.ready) return cc.projector;
                break;
            }
        }
        history.push_back(u);
        if (u2.norm() > cap)
            throw not_power_bounded("idempotent search: norms diverge under squaring");
        u = std::move(u2);
    }
    throw no_convergence("idempotent search: no stable projector within 60 squarings");
}

} // namespace detail

// The projector onto the reversible part, found as the common idempotent
// completion of the minimal-rank elements of the closure net. Minimal rank
// locates the kernel of the enveloping semigroup; among equal ranks the
// seeds with the smallest live singular value are the furthest along the
// decay and are tried first. If different seeds complete to visibly
// different projectors the kernel carries more than one minimal
// idempotent and the semigroup is not admissible.
inline cmat find_minimal_idempotent(const closure_net& net, const tolerances& tol = {}) {
    if (net.elements.empty())
        throw malformed_parameters("find_minimal_idempotent: empty net");
    const double scale = std::max(1.0, net.norm_bound);
    const double cut = tol.rank_tol * scale;
    const std::size_t n = net.elements.size();
    std::vector<int> ranks(n);
    std::vector<double> tail(n); // smallest singular value above the cut
    int min_rank = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < n; ++i) {
        auto sv = singular_values(net.elements[i]);
        std::size_t r = 0;
        while (r < sv.size() && sv[r] > cut) ++r;
        ranks[i] = static_cast<int>(r);
        tail[i] = r == 0 ? 0.0 : sv[r - 1];
        min_rank = std::min(min_rank, static_cast<int>(r));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tail[a] != tail[b]) return tail[a] < tail[b];
        return a < b;
    });
    std::vector<cmat> candidates;
    for (std::size_t k = 0; k < n && candidates.size() < 5; ++k) {
        const std::size_t i = order[k];
        if (ranks[i] != min_rank) continue;
        candidates.push_back(detail::squash_to_idempotent(net.elements[i], scale, tol));
    }
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double dist = frobenius_distance(candidates[0], candidates[i]);
        if (dist > 10 * tol.idempotent_tol)
            throw multiple_idempotents("minimal-rank seeds complete to projectors " +
                                       std::to_string(dist) + " apart");
    }
    return candidates.front();
}

// Scan of n = 1..limit for the power closest to idempotency, a finite
// stand-in for picking the power along an idempotent ultrafilter.
struct shadow_result {
    int n = 0;
    double defect = 0; // |T^{2n} - T^n|_F at the best n
    cmat candidate;
    bool accepted = false; // defect below idempotent_tol
};

inline shadow_result ultrafilter_shadow_idempotent(const matrix_representation& rep, int limit,
                                                   const tolerances& tol = {}) {
    if (rep.generators.size() != 1)
        throw malformed_parameters("ultrafilter_shadow_idempotent: needs one generator");
    if (limit < 1) throw malformed_parameters("ultrafilter_shadow_idempotent: limit must be positive");
    const cmat& t = rep.generators.front();
    shadow_result best;
    best.defect = std::numeric_limits<double>::infinity();
    cmat tn = cmat::Identity(rep.dim, rep.dim);
    for (int n = 1; n <= limit; ++n) {
        tn = tn * t;
        if (!tn.allFinite())
            throw not_power_bounded("ultrafilter_shadow_idempotent: powers diverge");
        const double defect = frobenius_distance(tn * tn, tn);
        if (defect < best.defect) {
            best.n = n;
            best.defect = defect;
            best.candidate = tn;
        }
    }
    best.accepted = best.defect < tol.idempotent_tol;
    return best;
}

} // namespace jdlg
