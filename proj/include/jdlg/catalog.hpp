#pragma once

// Worked model systems with known splittings, used as fixtures by the
// command line tool and the test suite.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/finite_semigroup.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/representation.hpp"

namespace jdlg {

struct catalog_entry {
    std::string name;
    std::string description;
    matrix_representation rep;
    folner_sequence folner;
    int expected_dim_r = 0;
    cmat expected_q;
};

// One contraction: everything decays, the projector is zero.
inline catalog_entry make_scaling(double r = 0.5) {
    if (r <= 0 || r >= 1) throw malformed_parameters("scaling: r must lie in (0, 1)");
    catalog_entry e;
    e.name = "scaling_example";
    e.description = "multiplication by " + std::to_string(r) + " on C^1, purely decaying";
    cmat t(1, 1);
    t << complexd(r, 0);
    e.rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    e.folner = box_sequence(naturals_model(1));
    e.expected_dim_r = 0;
    e.expected_q = cmat::Zero(1, 1);
    return e;
}

// Irrational rotation on one axis, contraction on the other.
inline catalog_entry make_rotation_contraction(double alpha = std::sqrt(2.0), double r = 0.5) {
    if (r <= 0 || r >= 1) throw malformed_parameters("rotation_contraction: r must lie in (0, 1)");
    catalog_entry e;
    e.name = "rotation_contraction";
    e.description = "diag(e^{2 pi i alpha}, r): one unimodular direction, one decaying";
    cmat t = cmat::Zero(2, 2);
    t(0, 0) = std::polar(1.0, 2.0 * 3.14159265358979323846 * alpha);
    t(1, 1) = complexd(r, 0);
    e.rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    e.folner = box_sequence(naturals_model(1));
    e.expected_dim_r = 1;
    e.expected_q = cmat::Zero(2, 2);
    e.expected_q(0, 0) = 1;
    return e;
}

// Two-state chain: the reversible part is the stationary direction and
// the projector rows are the stationary distribution.
inline catalog_entry make_markov(double p = 0.3, double q = 0.3) {
    if (p <= 0 || p >= 1 || q <= 0 || q >= 1)
        throw malformed_parameters("markov: transition probabilities must lie in (0, 1)");
    catalog_entry e;
    e.name = "markov";
    e.description = "two-state chain [[1-p, p], [q, 1-q]]; second eigenvalue 1 - p - q";
    cmat t(2, 2);
    t << complexd(1 - p, 0), complexd(p, 0), complexd(q, 0), complexd(1 - q, 0);
    e.rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    e.folner = box_sequence(naturals_model(1));
    e.expected_dim_r = 1;
    e.expected_q = cmat(2, 2);
    e.expected_q << complexd(q / (p + q), 0), complexd(p / (p + q), 0), complexd(q / (p + q), 0),
        complexd(p / (p + q), 0);
    return e;
}

// Cyclic permutation: fully reversible, the system splits into the d
// characters of the cyclic group.
inline catalog_entry make_cyclic_shift(int d = 3) {
    if (d < 1 || d > 32) throw malformed_parameters("cyclic_shift: d must lie in 1..32");
    catalog_entry e;
    e.name = "cyclic_shift";
    e.description = "cyclic coordinate shift on C^" + std::to_string(d) + ", fully reversible";
    cmat t = cmat::Zero(d, d);
    for (int i = 0; i < d; ++i) t((i + 1) % d, i) = 1;
    e.rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    e.folner = box_sequence(naturals_model(1));
    e.expected_dim_r = d;
    e.expected_q = cmat::Identity(d, d);
    return e;
}

// Two commuting generators over N^2 boxes: the first axis rotates and
// contracts, the second reflects and contracts, jointly one reversible
// direction survives.
inline catalog_entry make_commuting_pair() {
    catalog_entry e;
    e.name = "commuting_pair";
    e.description = "diag(i, 0.9) and diag(-1, 0.8) over N^2 box windows";
    cmat a = cmat::Zero(2, 2), b = cmat::Zero(2, 2);
    a(0, 0) = complexd(0, 1);
    a(1, 1) = complexd(0.9, 0);
    b(0, 0) = complexd(-1, 0);
    b(1, 1) = complexd(0.8, 0);
    e.rep = make_matrix_representation({"a", "b"}, {a, b}, true, naturals_model(2));
    e.folner = box_sequence(naturals_model(2));
    e.expected_dim_r = 1;
    e.expected_q = cmat::Zero(2, 2);
    e.expected_q(0, 0) = 1;
    return e;
}

inline std::vector<catalog_entry> catalog() {
    return {make_scaling(), make_rotation_contraction(), make_markov(), make_cyclic_shift(),
            make_commuting_pair()};
}

inline const catalog_entry* find_catalog_entry(const std::vector<catalog_entry>& entries,
                                               const std::string& name) {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace jdlg
