#pragma once

// Dense complex linear algebra kernel: tolerance profile, numerical rank,
// orthonormal bases, and the boundary spectral split (triangular
// factorization with eigenvalue reordering plus a block-decoupling solve).
// Eigen supplies the factorizations; the reordering and the triangular
// Sylvester solve are implemented here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "jdlg/errors.hpp"

namespace jdlg {

using complexd = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

// One knob set shared by every module. All defaults are pinned here.
struct tolerances {
    double rank_tol = 1e-8;          // singular value cut, relative
    double closure_eps = 1e-3;       // epsilon-net dedup distance
    double idempotent_tol = 1e-8;    // ||Q^2 - Q||_F acceptance
    double convergence_tol = 1e-6;   // Cauchy window width for limits
    int max_iterations = 64;         // generic iteration budget
    double spectral_boundary = 0.99; // |lambda| split circle

    static tolerances defaults() { return {}; }
    static tolerances strict() {
        tolerances t;
        t.rank_tol = 1e-10;
        t.closure_eps = 1e-4;
        t.idempotent_tol = 1e-10;
        t.convergence_tol = 1e-8;
        t.max_iterations = 128;
        return t;
    }
    static tolerances loose() {
        tolerances t;
        t.rank_tol = 1e-6;
        t.closure_eps = 1e-2;
        t.idempotent_tol = 1e-6;
        t.convergence_tol = 1e-4;
        t.max_iterations = 32;
        return t;
    }
};

inline void require_finite(const cmat& m, const std::string& what) {
    if (!m.allFinite()) throw malformed_parameters(what + ": non-finite entries");
}

inline void require_square(const cmat& m, const std::string& what) {
    if (m.rows() != m.cols())
        throw dimension_mismatch(what + ": matrix is not square");
}

inline double frobenius_distance(const cmat& a, const cmat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_mismatch("frobenius_distance: shape mismatch");
    return (a - b).norm();
}

inline std::vector<double> singular_values(const cmat& m) {
    if (m.size() == 0) return {};
    Eigen::JacobiSVD<cmat> svd(m);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

// Rank as the number of singular values above rank_tol relative to the
// largest one. The zero matrix has rank 0.
inline int numerical_rank(const cmat& m, const tolerances& tol = {}) {
    require_finite(m, "numerical_rank");
    if (m.size() == 0) return 0;
    auto sv = singular_values(m);
    if (sv.empty() || sv.front() == 0.0) return 0;
    const double cut = tol.rank_tol * sv.front();
    return static_cast<int>(std::count_if(sv.begin(), sv.end(),
                                          [&](double s) { return s > cut; }));
}

// Rank against an absolute scale. Needed when a matrix that is tiny in
// norm must count as (a perturbation of) zero, e.g. deep powers of a
// strict contraction inside a closure net.
inline int numerical_rank_abs(const cmat& m, double scale, const tolerances& tol = {}) {
    require_finite(m, "numerical_rank_abs");
    if (m.size() == 0) return 0;
    auto sv = singular_values(m);
    const double cut = tol.rank_tol * std::max(scale, 0.0);
    return static_cast<int>(std::count_if(sv.begin(), sv.end(),
                                          [&](double s) { return s > cut; }));
}

// Orthonormal basis for the span of the input columns. Near-dependent
// columns are dropped at the relative threshold; the result has
// orthonormal columns spanning the same subspace.
inline cmat orthonormal_basis(const cmat& columns, const tolerances& tol = {}) {
    require_finite(columns, "orthonormal_basis");
    const Eigen::Index d = columns.rows();
    if (columns.cols() == 0) return cmat(d, 0);
    Eigen::ColPivHouseholderQR<cmat> qr(columns);
    qr.setThreshold(tol.rank_tol);
    const Eigen::Index r = qr.rank();
    if (r == 0) return cmat(d, 0);
    cmat q = qr.householderQ() * cmat::Identity(d, r);
    return q;
}

// Orthonormal basis of the column space of m, singular directions cut at
// an absolute scale (pass scale <= 0 to use sigma_max).
inline cmat column_space(const cmat& m, double scale, const tolerances& tol = {}) {
    require_finite(m, "column_space");
    if (m.size() == 0) return cmat(m.rows(), 0);
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double ref = scale > 0.0 ? scale : (s.size() ? s(0) : 0.0);
    const double cut = tol.rank_tol * ref;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return cmat(svd.matrixU().leftCols(r));
}

// Orthonormal basis of the (numerical) null space of m at an absolute scale.
inline cmat null_space(const cmat& m, double scale, const tolerances& tol = {}) {
    require_finite(m, "null_space");
    if (m.size() == 0) return cmat(m.cols(), 0);
    Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double ref = scale > 0.0 ? scale : (s.size() ? s(0) : 0.0);
    const double cut = tol.rank_tol * ref;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > cut) ++r;
    return cmat(svd.matrixV().rightCols(m.cols() - r));
}

// Principal angles between the spans of two orthonormal column families,
// ascending, length min(k1, k2). Angles below pi/4 are recovered from the
// sines (singular values of the residual of the smaller family against
// the larger), since acos of an inner product cannot resolve an angle
// finer than the square root of machine precision.
inline std::vector<double> principal_angles(const cmat& b1, const cmat& b2) {
    if (b1.rows() != b2.rows())
        throw dimension_mismatch("principal_angles: ambient dimensions differ");
    const cmat& big = b1.cols() >= b2.cols() ? b1 : b2;
    const cmat& small = b1.cols() >= b2.cols() ? b2 : b1;
    const Eigen::Index k = small.cols();
    if (k == 0) return {};
    Eigen::JacobiSVD<cmat> csvd(cmat(big.adjoint() * small));
    Eigen::JacobiSVD<cmat> ssvd(cmat(small - big * (big.adjoint() * small)));
    std::vector<double> cosv(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sinv(static_cast<std::size_t>(k), 1.0);
    for (Eigen::Index i = 0; i < csvd.singularValues().size() && i < k; ++i)
        cosv[static_cast<std::size_t>(i)] = std::clamp(csvd.singularValues()(i), 0.0, 1.0);
    for (Eigen::Index i = 0; i < ssvd.singularValues().size() && i < k; ++i)
        sinv[static_cast<std::size_t>(i)] = std::clamp(ssvd.singularValues()(i), 0.0, 1.0);
    // cosines descending and sines descending both order the angles, the
    // former ascending and the latter descending; align them
    std::sort(sinv.begin(), sinv.end());
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        const double from_cos = std::acos(cosv[i]);
        angles.push_back(from_cos > 0.7853981633974483 ? from_cos : std::asin(sinv[i]));
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

inline double max_principal_angle(const cmat& b1, const cmat& b2) {
    auto a = principal_angles(b1, b2);
    return a.empty() ? 0.0 : a.back();
}

// m^e by binary powering, e >= 0 (e = 0 gives the identity).
inline cmat matrix_power(const cmat& m, std::uint64_t e) {
    require_square(m, "matrix_power");
    cmat result = cmat::Identity(m.rows(), m.cols());
    cmat base = m;
    while (e > 0) {
        if (e & 1u) result = result * base;
        base = base * base;
        e >>= 1u;
    }
    return result;
}

namespace detail {

// Swap the adjacent diagonal entries (j, j+1) of the upper triangular t by
// a unitary similarity, accumulating the transform into u. Uses the
// eigenvector [t12; t22 - t11] of the trailing eigenvalue.
inline void swap_schur_entries(cmat& t, cmat& u, Eigen::Index j) {
    const complexd t11 = t(j, j), t12 = t(j, j + 1), t22 = t(j + 1, j + 1);
    complexd v0 = t12;
    complexd v1 = t22 - t11;
    const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
    if (nv < 1e-300) return; // equal eigenvalues, nothing to move
    v0 /= nv;
    v1 /= nv;
    Eigen::Matrix2cd g;
    g << v0, -std::conj(v1), v1, std::conj(v0);
    t.middleRows(j, 2) = g.adjoint() * t.middleRows(j, 2);
    t.middleCols(j, 2) = t.middleCols(j, 2) * g;
    u.middleCols(j, 2) = u.middleCols(j, 2) * g;
    t(j + 1, j) = 0.0;
}

// Reorder a complex Schur pair so entries with select=true lead, by
// bubbling non-selected entries downward with adjacent swaps.
inline void reorder_schur(cmat& t, cmat& u, std::vector<bool>& select) {
    const Eigen::Index d = t.rows();
    bool moved = true;
    while (moved) {
        moved = false;
        for (Eigen::Index j = 0; j + 1 < d; ++j) {
            if (!select[j] && select[j + 1]) {
                swap_schur_entries(t, u, j);
                std::swap(select[j], select[j + 1]);
                moved = true;
            }
        }
    }
}

// Solve a11 x - x a22 = c with both coefficient blocks upper triangular,
// column by column with back substitution.
inline cmat solve_triangular_sylvester(const cmat& a11, const cmat& a22, const cmat& c) {
    const Eigen::Index k = a11.rows(), m = a22.rows();
    cmat x(k, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        cvec rhs = c.col(j);
        for (Eigen::Index i = 0; i < j; ++i) rhs += x.col(i) * a22(i, j);
        // (a11 - a22_jj I) x_j = rhs, upper triangular back substitution
        const complexd shift = a22(j, j);
        for (Eigen::Index r = k - 1; r >= 0; --r) {
            complexd acc = rhs(r);
            for (Eigen::Index cidx = r + 1; cidx < k; ++cidx) acc -= a11(r, cidx) * x(cidx, j);
            const complexd diag = a11(r, r) - shift;
            if (std::abs(diag) < 1e-300)
                throw boundary_collision("spectral split: coincident eigenvalues across the boundary");
            x(r, j) = acc / diag;
        }
    }
    return x;
}

} // namespace detail

// Result of the boundary spectral split. projector is the (generally
// oblique) projector onto the invariant subspace for |lambda| >= boundary
// along the complementary invariant subspace.
struct spectral_split {
    int dim_outer = 0;
    cmat projector;
    cmat outer_basis; // orthonormal columns, ran(projector)
    cmat inner_basis; // orthonormal columns, ker(projector)
    std::vector<complexd> outer_eigenvalues;
    std::vector<complexd> inner_eigenvalues;
};

// Split C^d into the invariant subspace for eigenvalues with
// |lambda| >= boundary and its complementary invariant subspace.
// Refuses when an eigenvalue sits within rank_tol of the boundary circle,
// and when the outer restriction is not power-bounded (defective or
// growing unimodular part).
inline spectral_split schur_spectral_split(const cmat& t, const tolerances& tol = {}) {
    require_square(t, "schur_spectral_split");
    require_finite(t, "schur_spectral_split");
    const Eigen::Index d = t.rows();
    spectral_split out;
    if (d == 0) {
        out.projector = cmat(0, 0);
        out.outer_basis = cmat(0, 0);
        out.inner_basis = cmat(0, 0);
        return out;
    }

    Eigen::ComplexSchur<cmat> schur(t, true);
    if (schur.info() != Eigen::Success)
        throw no_convergence("schur_spectral_split: Schur iteration failed");
    cmat z = schur.matrixT();
    cmat u = schur.matrixU();

    const double boundary = tol.spectral_boundary;
    std::vector<bool> select(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double mod = std::abs(z(i, i));
        if (std::abs(mod - boundary) < tol.rank_tol)
            throw boundary_collision("schur_spectral_split: eigenvalue on the boundary circle");
        select[i] = mod >= boundary;
    }

    detail::reorder_schur(z, u, select);
    const Eigen::Index k =
        std::count(select.begin(), select.end(), true);

    for (Eigen::Index i = 0; i < d; ++i) {
        if (i < k) out.outer_eigenvalues.push_back(z(i, i));
        else out.inner_eigenvalues.push_back(z(i, i));
    }
    out.dim_outer = static_cast<int>(k);

    if (k > 0) {
        // the outer restriction must have bounded powers; repeated
        // squaring exposes defective or growing unimodular spectrum
        cmat a11 = z.topLeftCorner(k, k);
        const double cap = 1e6 * (1.0 + a11.norm());
        cmat p = a11;
        for (int j = 0; j < 24; ++j) {
            p = p * p;
            if (!p.allFinite() || p.norm() > cap)
                throw not_power_bounded(
                    "schur_spectral_split: outer part has unbounded powers");
        }
    }

    cmat pz = cmat::Zero(d, d);
    if (k == d) {
        pz = cmat::Identity(d, d);
    } else if (k > 0) {
        cmat x = detail::solve_triangular_sylvester(
            z.topLeftCorner(k, k), z.bottomRightCorner(d - k, d - k),
            z.topRightCorner(k, d - k));
        pz.topLeftCorner(k, k) = cmat::Identity(k, k);
        pz.topRightCorner(k, d - k) = x;
    }
    out.projector = u * pz * u.adjoint();
    out.outer_basis = u.leftCols(k);
    if (k == d) {
        out.inner_basis = cmat(d, 0);
    } else if (k == 0) {
        out.inner_basis = u;
    } else {
        // complementary invariant subspace is spanned by u * [-x; I]
        cmat x = pz.topRightCorner(k, d - k);
        cmat y(d, d - k);
        y.topRows(k) = -x;
        y.bottomRows(d - k) = cmat::Identity(d - k, d - k);
        out.inner_basis = orthonormal_basis(u * y, tol);
    }
    return out;
}

} // namespace jdlg
