#pragma once

// Unitary structure of the reversible part: an invariant inner product,
// the splitting into irreducible unitary systems through the commutant,
// and checks that the original action is weakly equivalent to the direct
// sum of those systems.

#include <string>
#include <vector>

#include "jdlg/errors.hpp"
#include "jdlg/finite_semigroup.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"
#include "jdlg/split.hpp"

namespace jdlg {

struct invariant_inner_product {
    cmat gram; // on coordinates of basis_r, Hermitian positive definite
    double invariance_defect = 0; // max_g |R_g^* G R_g - G|_F / |G|_F
    std::string source;           // "haar" or "folner"
};

namespace detail {

inline std::vector<cmat> restricted_generators(const matrix_representation& rep,
                                               const cmat& basis_r) {
    std::vector<cmat> out;
    for (const auto& g : rep.generators) out.push_back(basis_r.adjoint() * g * basis_r);
    return out;
}

inline void finish_inner_product(invariant_inner_product& ip, const std::vector<cmat>& rg,
                                 const tolerances& tol) {
    ip.gram = 0.5 * (ip.gram + cmat(ip.gram.adjoint()));
    Eigen::SelfAdjointEigenSolver<cmat> eig(ip.gram);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmax <= 0 || lmin < tol.rank_tol * lmax)
        throw not_positive_definite("invariant inner product: gram matrix is singular");
    double defect = 0;
    for (const auto& r : rg)
        defect = std::max(defect, (r.adjoint() * ip.gram * r - ip.gram).norm());
    ip.invariance_defect = defect / ip.gram.norm();
}

} // namespace detail

// Invariant inner product on the reversible part. A representation indexed
// by an admissible Cayley table averages exactly over the kernel group
// (the Haar mean); otherwise the Gram matrix is the dyadic Folner average
// of R_s^* R_s over each generator axis in turn.
inline invariant_inner_product
invariant_inner_product_on(const matrix_representation& rep, const cmat& basis_r,
                           const tolerances& tol = {}) {
    const int k = static_cast<int>(basis_r.cols());
    invariant_inner_product ip;
    auto rg = detail::restricted_generators(rep, basis_r);
    if (k == 0) {
        ip.gram = cmat::Zero(0, 0);
        ip.source = "empty";
        return ip;
    }
    if (rep.index_model && rep.index_model->kind == discrete_semigroup_model::kind_t::table) {
        const auto& table = *rep.index_model->cayley;
        auto structure = ideal_structure(table);
        if (!structure.kernel_is_group)
            throw kernel_not_group("invariant inner product: kernel is not a group, no Haar mean");
        cmat sum = cmat::Zero(k, k);
        for (int idx : structure.kernel) sum += rg[idx].adjoint() * rg[idx];
        ip.gram = sum / static_cast<double>(structure.kernel.size());
        ip.source = "haar";
    } else {
        cmat g = cmat::Identity(k, k);
        for (const auto& r : rg) g = detail::dyadic_conjugate_average(r, g, 48);
        ip.gram = g;
        ip.source = "folner";
    }
    detail::finish_inner_product(ip, rg, tol);
    return ip;
}

// One irreducible unitary block: basis columns live in the ambient space
// and are orthonormal for the invariant inner product, chi holds one
// unitary matrix per generator, and functionals recovers a vector's
// coordinates in this block (functionals * w for w in the reversible part).
struct unitary_system {
    cmat basis;
    std::vector<cmat> chi;
    cmat functionals;
    double unitarity_defect = 0; // max_g |chi_g^* chi_g - I|_F
};

namespace detail {

// Orthonormal basis of {M : A_g M = M A_g for all g} via the singular
// value decomposition of the stacked commutator operator.
inline std::vector<cmat> commutant_basis(const std::vector<cmat>& mats, double null_tol) {
    const int m = static_cast<int>(mats.front().rows());
    cmat stacked(static_cast<int>(mats.size()) * m * m, m * m);
    const cmat id = cmat::Identity(m, m);
    for (std::size_t g = 0; g < mats.size(); ++g) {
        // vec(AM - MA) = (I (x) A - A^T (x) I) vec(M), columns stacked
        cmat op(m * m, m * m);
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < m; ++r)
                for (int cc = 0; cc < m; ++cc)
                    for (int rr = 0; rr < m; ++rr)
                        op(c * m + r, cc * m + rr) = id(c, cc) * mats[g](r, rr) -
                                                     mats[g](cc, c) * id(r, rr);
        stacked.middleRows(static_cast<int>(g) * m * m, m * m) = op;
    }
    Eigen::JacobiSVD<cmat> svd(stacked, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = null_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    std::vector<cmat> out;
    for (int i = static_cast<int>(sv.size()) - 1; i >= 0; --i) {
        if (sv(i) > cut) break;
        cmat mmat(m, m);
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < m; ++r) mmat(r, c) = svd.matrixV()(c * m + r, i);
        out.push_back(mmat);
    }
    return out;
}

inline void split_invariant_subspaces(const std::vector<cmat>& unitary_gens, const cmat& subspace,
                                      std::vector<cmat>& leaves) {
    const int m = static_cast<int>(subspace.cols());
    if (m == 0) return;
    if (m == 1) {
        leaves.push_back(subspace);
        return;
    }
    std::vector<cmat> restricted;
    for (const auto& a : unitary_gens) restricted.push_back(subspace.adjoint() * a * subspace);
    auto comm = commutant_basis(restricted, 1e-10);
    if (comm.size() <= 1) {
        leaves.push_back(subspace);
        return;
    }
    // deterministic non-scalar Hermitian commutant element: the candidate
    // with the widest eigenvalue spread
    cmat best;
    double best_spread = 0;
    for (const auto& mmat : comm) {
        cmat m0 = mmat - (mmat.trace() / static_cast<double>(m)) * cmat::Identity(m, m);
        for (int variant = 0; variant < 2; ++variant) {
            cmat h = variant == 0 ? cmat(0.5 * (m0 + cmat(m0.adjoint())))
                                  : cmat((m0 - cmat(m0.adjoint())) / complexd(0, 2));
            Eigen::SelfAdjointEigenSolver<cmat> eig(h);
            const double spread = eig.eigenvalues().maxCoeff() - eig.eigenvalues().minCoeff();
            if (spread > best_spread) {
                best_spread = spread;
                best = h;
            }
        }
    }
    if (best_spread < 1e-8)
        throw commutant_solve_failure("commutant is nontrivial but has no separating Hermitian element");
    Eigen::SelfAdjointEigenSolver<cmat> eig(best);
    const auto& lam = eig.eigenvalues();
    const double gap_floor = best_spread / (2.0 * m);
    int start = 0;
    for (int i = 1; i <= m; ++i) {
        if (i == m || lam(i) - lam(i - 1) > gap_floor) {
            cmat cluster = subspace * eig.eigenvectors().middleCols(start, i - start);
            split_invariant_subspaces(unitary_gens, cluster, leaves);
            start = i;
        }
    }
}

} // namespace detail

// Splits the reversible part into irreducible unitary systems. The
// restricted generators are conjugated by the square root of the
// invariant Gram matrix, where they act unitarily; invariant subspaces
// are then separated recursively by eigenspaces of Hermitian commutant
// elements until each commutant is trivial.
inline std::vector<unitary_system> decompose_irreducibles(const matrix_representation& rep,
                                                          const cmat& basis_r,
                                                          const invariant_inner_product& ip,
                                                          const tolerances& tol = {}) {
    const int k = static_cast<int>(basis_r.cols());
    if (k == 0) return {};
    auto rg = detail::restricted_generators(rep, basis_r);
    Eigen::SelfAdjointEigenSolver<cmat> eig(ip.gram);
    if (eig.eigenvalues().minCoeff() < tol.rank_tol * eig.eigenvalues().maxCoeff())
        throw not_positive_definite("decompose_irreducibles: gram matrix is singular");
    cvec sqrt_lam = eig.eigenvalues().array().sqrt().matrix().cast<complexd>();
    cmat g_half = eig.eigenvectors() * sqrt_lam.asDiagonal() * eig.eigenvectors().adjoint();
    cmat g_half_inv = eig.eigenvectors() * sqrt_lam.cwiseInverse().asDiagonal() *
                      eig.eigenvectors().adjoint();
    std::vector<cmat> unitary_gens;
    for (const auto& r : rg) unitary_gens.push_back(g_half * r * g_half_inv);

    std::vector<cmat> leaves;
    detail::split_invariant_subspaces(unitary_gens, cmat(cmat::Identity(k, k)), leaves);
    int total = 0;
    for (const auto& s : leaves) total += static_cast<int>(s.cols());
    if (total != k)
        throw span_deficiency("irreducible systems span " + std::to_string(total) +
                              " of " + std::to_string(k) + " reversible dimensions");

    std::vector<unitary_system> systems;
    for (auto& s : leaves) {
        // canonical column phases: the largest entry of each column is
        // made real positive so reruns produce identical output
        for (int c = 0; c < s.cols(); ++c) {
            int arg_max = 0;
            for (int r = 1; r < s.rows(); ++r)
                if (std::abs(s(r, c)) > std::abs(s(arg_max, c)) + 1e-12) arg_max = r;
            const complexd v = s(arg_max, c);
            if (std::abs(v) > 0) s.col(c) *= std::conj(v) / std::abs(v);
        }
        unitary_system sys;
        sys.basis = basis_r * (g_half_inv * s);
        sys.functionals = s.adjoint() * g_half * basis_r.adjoint();
        double defect = 0;
        for (const auto& a : unitary_gens) {
            cmat chi = s.adjoint() * a * s;
            defect = std::max(defect,
                              (chi.adjoint() * chi - cmat::Identity(s.cols(), s.cols())).norm());
            sys.chi.push_back(std::move(chi));
        }
        sys.unitarity_defect = defect;
        systems.push_back(std::move(sys));
    }
    return systems;
}

struct equivalence_result {
    double max_discrepancy = 0; // entrywise, restricted word action vs the direct sum
    int words_checked = 0;
};

// Default word sample: generator powers up to `power_limit` and all words
// of length two and three over the generator alphabet.
inline std::vector<std::vector<int>> default_word_sample(int generator_count,
                                                         int power_limit = 50) {
    std::vector<std::vector<int>> words;
    for (int g = 0; g < generator_count; ++g)
        for (int p = 1; p <= power_limit; ++p)
            words.push_back(std::vector<int>(static_cast<std::size_t>(p), g));
    for (int a = 0; a < generator_count; ++a)
        for (int b = 0; b < generator_count; ++b) {
            if (generator_count > 1) words.push_back({a, b});
            for (int c = 0; c < generator_count; ++c)
                if (generator_count > 1) words.push_back({a, b, c});
        }
    return words;
}

// Compares the restricted action of each sampled word with the direct sum
// of the irreducible systems, conjugated back by the change of basis. The
// discrepancy is the largest entry difference over the sample.
inline equivalence_result verify_weak_equivalence(const matrix_representation& rep,
                                                  const cmat& basis_r,
                                                  const std::vector<unitary_system>& systems,
                                                  const invariant_inner_product& ip,
                                                  const std::vector<std::vector<int>>& words,
                                                  const tolerances& tol = {}) {
    (void)tol;
    const int k = static_cast<int>(basis_r.cols());
    equivalence_result out;
    if (k == 0) {
        out.words_checked = static_cast<int>(words.size());
        return out;
    }
    int total = 0;
    for (const auto& s : systems) total += static_cast<int>(s.basis.cols());
    if (total != k)
        throw span_deficiency("weak equivalence: systems do not span the reversible part");
    auto rg = detail::restricted_generators(rep, basis_r);
    Eigen::SelfAdjointEigenSolver<cmat> eig(ip.gram);
    cvec sqrt_lam = eig.eigenvalues().array().sqrt().matrix().cast<complexd>();
    cmat g_half = eig.eigenvectors() * sqrt_lam.asDiagonal() * eig.eigenvectors().adjoint();
    cmat g_half_inv = eig.eigenvectors() * sqrt_lam.cwiseInverse().asDiagonal() *
                      eig.eigenvectors().adjoint();
    // W carries direct-sum coordinates to reversible coordinates; its
    // inverse is exact because the blocks are G-orthonormal
    cmat w(k, k), winv(k, k);
    int col = 0;
    for (const auto& s : systems) {
        const int m = static_cast<int>(s.basis.cols());
        cmat s_block = g_half * (basis_r.adjoint() * s.basis); // recover the chi-coordinate block
        w.middleCols(col, m) = g_half_inv * s_block;
        winv.middleRows(col, m) = s_block.adjoint() * g_half;
        col += m;
    }
    for (const auto& word : words) {
        cmat rw = cmat::Identity(k, k);
        for (int g : word) {
            if (g < 0 || g >= static_cast<int>(rg.size()))
                throw malformed_parameters("weak equivalence: word uses an unknown generator");
            rw = rw * rg[static_cast<std::size_t>(g)];
        }
        cmat direct = cmat::Zero(k, k);
        col = 0;
        for (const auto& s : systems) {
            const int m = static_cast<int>(s.basis.cols());
            cmat block = cmat::Identity(m, m);
            for (int g : word) block = block * s.chi[static_cast<std::size_t>(g)];
            direct.block(col, col, m, m) = block;
            col += m;
        }
        const double disc = (rw - w * direct * winv).cwiseAbs().maxCoeff();
        out.max_discrepancy = std::max(out.max_discrepancy, disc);
        ++out.words_checked;
    }
    return out;
}

struct norm_constancy_result {
    bool constant = false;
    double max_deviation = 0;
};

// The invariant-norm functional: for vectors in one system's span, the sum
// of squared block coordinates of the orbit must not move.
inline norm_constancy_result norm_constancy_check(const matrix_representation& rep,
                                                  const unitary_system& sys,
                                                  const std::vector<std::vector<int>>& words,
                                                  const tolerances& tol = {}) {
    norm_constancy_result out;
    std::vector<cvec> samples;
    for (int c = 0; c < sys.basis.cols(); ++c) samples.push_back(sys.basis.col(c));
    if (sys.basis.cols() > 1) {
        cvec s = sys.basis.rowwise().sum();
        samples.push_back(s / s.norm());
    }
    double dev = 0;
    for (const auto& v : samples) {
        const double base = (sys.functionals * v).squaredNorm();
        for (const auto& word : words) {
            cvec moved = v;
            for (int g : word) moved = rep.generators[static_cast<std::size_t>(g)] * moved;
            const double c = (sys.functionals * moved).squaredNorm();
            dev = std::max(dev, std::abs(c - base) / std::max(1.0, base));
        }
    }
    out.max_deviation = dev;
    out.constant = dev < 100 * tol.convergence_tol;
    return out;
}

inline json unitary_system_to_json(const unitary_system& s,
                                   const std::vector<std::string>& names) {
    json chi = json::object();
    for (std::size_t g = 0; g < s.chi.size(); ++g) chi[names[g]] = matrix_to_json(s.chi[g]);
    return json{{"dim", s.basis.cols()},
                {"basis", basis_to_json(s.basis)},
                {"chi", std::move(chi)},
                {"unitarity_defect", s.unitarity_defect}};
}

} // namespace jdlg
