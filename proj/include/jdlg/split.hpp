#pragma once

// The splitting E = E_r (+) E_aws by three routes: spectral (Schur form of
// a single generator), idempotent (minimal idempotent of the closure net),
// and gram (null space of the limiting averaged Gram matrix), plus
// reconciliation between any two results.

#include <string>
#include <vector>

#include "jdlg/closure.hpp"
#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"
#include "jdlg/serialization.hpp"

namespace jdlg {

// A split is considered sound when its idempotency residual stays within
// idempotency_residual_factor * idempotent_tol and the action residuals
// (commutation, both invariances) within action_residual_factor *
// idempotent_tol. The larger factor absorbs the conditioning of the
// similarity hiding in the generators.
inline constexpr double idempotency_residual_factor = 1e2;
inline constexpr double action_residual_factor = 1e3;

struct split_residuals {
    double idempotency = 0;       // |Q^2 - Q|_F
    double commutation = 0;       // max_g |Q pi_g - pi_g Q|_F
    double invariance_r = 0;      // max_g |(I - P_r) pi_g B_r|_F, P_r orthogonal onto span B_r
    double invariance_aws = 0;
    double gram_kernel_angle = 0; // gram method: angle between ker Q and the gram null space
};

struct jdlg_split {
    std::string method;
    int dim = 0;
    cmat basis_r;   // orthonormal columns spanning the reversible part
    cmat basis_aws; // orthonormal columns spanning the decaying part
    cmat projector_q;
    split_residuals residuals;
};

namespace detail {

inline void fill_residuals(jdlg_split& s, const matrix_representation& rep) {
    s.residuals.idempotency = frobenius_distance(s.projector_q * s.projector_q, s.projector_q);
    double comm = 0, inv_r = 0, inv_aws = 0;
    for (const auto& g : rep.generators) {
        comm = std::max(comm, frobenius_distance(s.projector_q * g, g * s.projector_q));
        if (s.basis_r.cols() > 0) {
            cmat img = g * s.basis_r;
            inv_r = std::max(inv_r, (img - s.basis_r * (s.basis_r.adjoint() * img)).norm());
        }
        if (s.basis_aws.cols() > 0) {
            cmat img = g * s.basis_aws;
            inv_aws = std::max(inv_aws, (img - s.basis_aws * (s.basis_aws.adjoint() * img)).norm());
        }
    }
    s.residuals.commutation = comm;
    s.residuals.invariance_r = inv_r;
    s.residuals.invariance_aws = inv_aws;
}

} // namespace detail

// Schur route, single generator only: reorder the Schur form so the
// eigenvalues of modulus above spectral_boundary lead, solve the
// triangular Sylvester equation for the coupling, and read off the
// projector onto the leading block along the trailing one.
inline jdlg_split decompose_spectral(const matrix_representation& rep, const tolerances& tol = {}) {
    if (rep.generators.size() != 1)
        throw malformed_parameters("decompose_spectral: needs exactly one generator");
    const auto sp = schur_spectral_split(rep.generators.front(), tol);
    jdlg_split s;
    s.method = "spectral";
    s.dim = rep.dim;
    s.basis_r = sp.outer_basis;
    s.basis_aws = sp.inner_basis;
    s.projector_q = sp.projector;
    detail::fill_residuals(s, rep);
    return s;
}

inline jdlg_split decompose_idempotent(const matrix_representation& rep, const tolerances& tol = {},
                                       const closure_options& opts = {}) {
    closure_net net = approximate_closure(rep, tol, opts);
    cmat q = find_minimal_idempotent(net, tol);
    jdlg_split s;
    s.method = "idempotent";
    s.dim = rep.dim;
    s.projector_q = q;
    // a projector's nonzero singular values are at least one, so unit scale
    // separates range from noise
    s.basis_r = column_space(q, 1.0, tol);
    s.basis_aws = null_space(q, 1.0, tol);
    detail::fill_residuals(s, rep);
    return s;
}

namespace detail {

// Average of T^{s*} M T^s over s = 1..2^depth by dyadic doubling:
// A_{2n} = (A_n + T^{n*} A_n T^n) / 2 with T^n maintained by squaring.
inline cmat dyadic_conjugate_average(const cmat& t, cmat m, int depth) {
    cmat avg = t.adjoint() * m * t;
    cmat tn = t;
    for (int j = 0; j < depth; ++j) {
        avg = 0.5 * (avg + tn.adjoint() * avg * tn);
        tn = tn * tn;
        if (!tn.allFinite() || !avg.allFinite())
            throw not_power_bounded("gram averaging: powers diverge");
    }
    return avg;
}

struct gram_limit {
    cmat gram;
    cmat null_basis;
    int depth = 0; // dyadic: window size 2^depth; literal: final n = 2^depth
    bool dyadic = false;
};

// Limiting Gram matrix (1/|F_n|) sum over F_n of pi_s^* pi_s. Additive
// models use nested per-axis dyadic windows {1..2^depth}^k, which reach
// astronomically large n at linear cost; table windows are enumerated
// literally at doubling checkpoints. The null space cut is taken against
// a fixed absolute scale (eigenvalues of the reversible part stay bounded
// below, decaying ones go to zero absolutely). Convergence needs five
// consecutive checkpoints with the same null space and with the smallest
// surviving eigenvalue no longer shrinking, since an eigenvalue on its
// way down moves like 1/n and would otherwise fake a stable empty null
// space at small depth.
inline gram_limit limiting_gram(const matrix_representation& rep, const folner_sequence& folner,
                                const tolerances& tol) {
    const int d = rep.dim;
    gram_limit out;
    const bool dyadic = rep.index_model &&
                        rep.index_model->kind == discrete_semigroup_model::kind_t::additive &&
                        folner.model.kind == discrete_semigroup_model::kind_t::additive;
    if (dyadic && folner.model.arity != rep.index_model->arity)
        throw malformed_parameters("gram: window arity does not match the representation");
    int stable = 0;
    cmat prev_null;
    double prev_min = -1;
    bool have_prev = false;
    double scale = 1.0;
    const int max_depth = dyadic ? 48 : 13;
    for (int depth = 1; depth <= max_depth; ++depth) {
        cmat g;
        if (dyadic) {
            g = cmat::Identity(d, d);
            for (const auto& gen : rep.generators)
                g = dyadic_conjugate_average(gen, g, depth);
        } else {
            const int n = 1 << depth;
            cmat sum = cmat::Zero(d, d);
            std::int64_t count = 0;
            for (const auto& e : folner.window(n)) {
                cmat pi = apply(rep, e);
                sum += pi.adjoint() * pi;
                ++count;
            }
            if (count == 0) throw malformed_parameters("gram: empty window");
            g = sum / static_cast<double>(count);
        }
        Eigen::SelfAdjointEigenSolver<cmat> eig(0.5 * (g + cmat(g.adjoint())));
        scale = std::max(scale, eig.eigenvalues().maxCoeff());
        const double cut = tol.rank_tol * scale;
        double live_min = -1; // smallest eigenvalue above the cut, -1 if none
        int null_dim = 0;
        for (int i = 0; i < d; ++i) {
            if (eig.eigenvalues()(i) <= cut)
                ++null_dim;
            else if (live_min < 0)
                live_min = eig.eigenvalues()(i); // ascending order
        }
        cmat nb = eig.eigenvectors().leftCols(null_dim);
        const bool min_settled =
            (live_min < 0 && prev_min < 0) ||
            (live_min > 0 && prev_min > 0 && live_min > 0.7 * prev_min && live_min < 1.43 * prev_min);
        if (have_prev && min_settled && nb.cols() == prev_null.cols() &&
            (nb.cols() == 0 || max_principal_angle(nb, prev_null) < tol.convergence_tol)) {
            if (++stable >= 4) {
                out.gram = g;
                out.null_basis = nb;
                out.depth = depth;
                out.dyadic = dyadic;
                return out;
            }
        } else {
            stable = 0;
        }
        prev_null = nb;
        prev_min = live_min;
        have_prev = true;
    }
    throw no_convergence("gram: null space did not stabilize");
}

} // namespace detail

// Gram route: the decaying part is the null space of the limiting
// averaged Gram matrix; the projector and reversible basis come from the
// closure-net idempotent, and the angle between its kernel and the gram
// null space is reported as a residual.
inline jdlg_split decompose_by_gram(const matrix_representation& rep, const folner_sequence& folner,
                                    const tolerances& tol = {}, const closure_options& opts = {}) {
    if (!rep.index_model)
        throw malformed_parameters("decompose_by_gram: representation needs an index model");
    require_power_bounded_sample(rep);
    auto lim = detail::limiting_gram(rep, folner, tol);
    closure_net net = approximate_closure(rep, tol, opts);
    cmat q = find_minimal_idempotent(net, tol);
    jdlg_split s;
    s.method = "gram";
    s.dim = rep.dim;
    s.projector_q = q;
    s.basis_r = column_space(q, 1.0, tol);
    s.basis_aws = lim.null_basis;
    detail::fill_residuals(s, rep);
    cmat qker = null_space(q, 1.0, tol);
    if (qker.cols() == 0 && lim.null_basis.cols() == 0)
        s.residuals.gram_kernel_angle = 0;
    else if (qker.cols() != lim.null_basis.cols())
        s.residuals.gram_kernel_angle = 1.5707963267948966; // right angle: dimensions disagree
    else
        s.residuals.gram_kernel_angle = max_principal_angle(qker, lim.null_basis);
    return s;
}

// On a group the decaying part must vanish: every generator is checked for
// invertibility and bounded inverse powers (otherwise the input is not a
// group and the question is ill-posed), then the verdict is simply whether
// basis_aws is empty.
struct reversibility_result {
    bool reversible = false;
    std::string diagnostics;
};

inline reversibility_result verify_group_reversibility(const matrix_representation& rep,
                                                       const jdlg_split& split,
                                                       const tolerances& tol = {}) {
    for (std::size_t i = 0; i < rep.generators.size(); ++i) {
        const cmat& g = rep.generators[i];
        auto sv = singular_values(g);
        if (sv.empty() || sv.back() < tol.rank_tol * std::max(1.0, sv.front()))
            throw not_a_group("generator " + rep.names[i] + " is singular");
        cmat inv = g.inverse();
        cmat m = inv;
        const double cap = 1e6 * (1.0 + inv.norm());
        for (int k = 0; k < 16; ++k) {
            if (!m.allFinite() || m.norm() > cap)
                throw not_a_group("inverse powers of " + rep.names[i] + " are unbounded");
            m = m * m;
        }
    }
    reversibility_result r;
    r.reversible = split.basis_aws.cols() == 0;
    r.diagnostics = r.reversible
                        ? "all generators invertible with power-bounded inverses; decaying part is zero"
                        : "decaying part has dimension " + std::to_string(split.basis_aws.cols());
    return r;
}

struct reconciliation {
    double projector_distance = 0;
    std::vector<double> angles_r;   // principal angles between the two reversible bases
    std::vector<double> angles_aws;
    bool dims_agree = false;
};

inline reconciliation reconcile(const jdlg_split& a, const jdlg_split& b) {
    if (a.dim != b.dim) throw dimension_mismatch("reconcile: ambient dimensions differ");
    reconciliation r;
    r.projector_distance = frobenius_distance(a.projector_q, b.projector_q);
    r.dims_agree = a.basis_r.cols() == b.basis_r.cols() && a.basis_aws.cols() == b.basis_aws.cols();
    if (a.basis_r.cols() > 0 && b.basis_r.cols() > 0) {
        auto ang = principal_angles(a.basis_r, b.basis_r);
        r.angles_r.assign(ang.begin(), ang.end());
    }
    if (a.basis_aws.cols() > 0 && b.basis_aws.cols() > 0) {
        auto ang = principal_angles(a.basis_aws, b.basis_aws);
        r.angles_aws.assign(ang.begin(), ang.end());
    }
    return r;
}

inline json split_to_json(const jdlg_split& s) {
    return json{{"method", s.method},
                {"dim", s.dim},
                {"dim_r", s.basis_r.cols()},
                {"dim_aws", s.basis_aws.cols()},
                {"basis_r", basis_to_json(s.basis_r)},
                {"basis_aws", basis_to_json(s.basis_aws)},
                {"projector", matrix_to_json(s.projector_q)},
                {"residuals",
                 {{"idempotency", s.residuals.idempotency},
                  {"commutation", s.residuals.commutation},
                  {"invariance_r", s.residuals.invariance_r},
                  {"invariance_aws", s.residuals.invariance_aws},
                  {"gram_kernel_angle", s.residuals.gram_kernel_angle}}}};
}

inline json reconciliation_to_json(const reconciliation& r) {
    return json{{"projector_distance", r.projector_distance},
                {"angles_r", r.angles_r},
                {"angles_aws", r.angles_aws},
                {"dims_agree", r.dims_agree}};
}

} // namespace jdlg
