#pragma once

// JSON helpers shared by the file formats: complex scalars are [re, im]
// pairs, vectors are arrays of pairs, matrices are arrays of rows.

#include <json.hpp>

#include "jdlg/errors.hpp"
#include "jdlg/linalg.hpp"

namespace jdlg {

using json = nlohmann::json;

inline json complex_to_json(const complexd& z) {
    return json::array({z.real(), z.imag()});
}

inline complexd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw malformed_input("expected complex entry [re, im]");
    return complexd(j[0].get<double>(), j[1].get<double>());
}

inline json vector_to_json(const cvec& v) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) rows.push_back(complex_to_json(v(i)));
    return rows;
}

inline cvec vector_from_json(const json& j) {
    if (!j.is_array()) throw malformed_input("expected vector as array of [re, im]");
    cvec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
    return v;
}

inline json matrix_to_json(const cmat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline cmat matrix_from_json(const json& j) {
    if (!j.is_array()) throw malformed_input("expected matrix as array of rows");
    const std::size_t rows = j.size();
    if (rows == 0) return cmat(0, 0);
    if (!j[0].is_array()) throw malformed_input("expected matrix row as array");
    const std::size_t cols = j[0].size();
    cmat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw malformed_input("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

// columns-as-basis convention for subspace bases in reports
inline json basis_to_json(const cmat& b) {
    json cols = json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c) cols.push_back(vector_to_json(b.col(c)));
    return cols;
}

inline cmat basis_from_json(const json& j, Eigen::Index ambient_dim) {
    if (!j.is_array()) throw malformed_input("expected basis as array of vectors");
    cmat b(ambient_dim, j.size());
    for (std::size_t c = 0; c < j.size(); ++c) {
        cvec v = vector_from_json(j[c]);
        if (v.size() != ambient_dim) throw malformed_input("basis vector has wrong dimension");
        b.col(c) = v;
    }
    return b;
}

} // namespace jdlg
