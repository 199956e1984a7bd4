#pragma once

// Finite semigroups given by Cayley tables: ideal structure, kernel,
// admissibility (kernel is a group), Haar mean over the kernel, and
// idempotents. Indices are 0-based positions into the label list.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jdlg/errors.hpp"
#include "jdlg/serialization.hpp"

namespace jdlg {

struct finite_semigroup {
    int order = 0;
    std::vector<std::vector<int>> table; // table[a][b] = a * b
    std::vector<std::string> labels;

    int mul(int a, int b) const { return table[a][b]; }
};

// Validate and build. Throws non_associative with a witness triple, and
// malformed_input on shape or range errors.
inline finite_semigroup make_finite_semigroup(std::vector<std::vector<int>> table,
                                              std::vector<std::string> labels = {}) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw malformed_input("semigroup: empty Cayley table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw malformed_input("semigroup: Cayley table is not square");
        for (int v : row)
            if (v < 0 || v >= n)
                throw malformed_input("semigroup: table entry out of range");
    }
    if (labels.empty()) {
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != n)
        throw malformed_input("semigroup: label count differs from order");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw non_associative("semigroup: (" + labels[a] + " " + labels[b] +
                                          ") " + labels[c] + " != " + labels[a] + " (" +
                                          labels[b] + " " + labels[c] + ")");
    return finite_semigroup{n, std::move(table), std::move(labels)};
}

inline finite_semigroup semigroup_from_json(const json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("table"))
        throw malformed_input("semigroup json: need {\"order\", \"table\"}");
    if (!j["order"].is_number_integer()) throw malformed_input("semigroup json: order must be an integer");
    const int n = j["order"].get<int>();
    if (!j["table"].is_array() || static_cast<int>(j["table"].size()) != n)
        throw malformed_input("semigroup json: table size differs from order");
    std::vector<std::vector<int>> table;
    for (const auto& row : j["table"]) {
        if (!row.is_array()) throw malformed_input("semigroup json: table row must be an array");
        std::vector<int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw malformed_input("semigroup json: table entry must be an integer");
            r.push_back(v.get<int>());
        }
        table.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw malformed_input("semigroup json: labels must be an array");
        for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
    }
    return make_finite_semigroup(std::move(table), std::move(labels));
}

inline json semigroup_to_json(const finite_semigroup& s) {
    return json{{"order", s.order}, {"table", s.table}, {"labels", s.labels}};
}

// Same elements with reversed multiplication; right ideals of s are left
// ideals of opposite(s).
inline finite_semigroup opposite(const finite_semigroup& s) {
    finite_semigroup o = s;
    for (int a = 0; a < s.order; ++a)
        for (int b = 0; b < s.order; ++b)
            o.table[a][b] = s.table[b][a];
    return o;
}

struct ideal_structure_result {
    std::vector<std::vector<int>> minimal_right_ideals; // each sorted
    std::vector<std::vector<int>> minimal_left_ideals;
    std::vector<int> kernel; // union of minimal right ideals, sorted
    bool kernel_is_group = false;
    std::optional<int> kernel_identity;
};

namespace detail {

// principal right ideal {s} cup sS
inline std::vector<int> principal_right_ideal(const finite_semigroup& s, int a) {
    std::set<int> out{a};
    for (int x = 0; x < s.order; ++x) out.insert(s.mul(a, x));
    return std::vector<int>(out.begin(), out.end());
}

// inclusion-minimal members of a family of sorted sets, deduplicated
inline std::vector<std::vector<int>> inclusion_minimal(std::vector<std::vector<int>> family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    std::vector<std::vector<int>> out;
    for (const auto& cand : family) {
        bool minimal = true;
        for (const auto& other : family) {
            if (other != cand &&
                std::includes(cand.begin(), cand.end(), other.begin(), other.end())) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(cand);
    }
    return out;
}

inline std::vector<std::vector<int>> minimal_right_ideals_of(const finite_semigroup& s) {
    // every minimal right ideal is principal, and an inclusion-minimal
    // principal right ideal contains no proper right ideal
    std::vector<std::vector<int>> principals;
    for (int a = 0; a < s.order; ++a) principals.push_back(principal_right_ideal(s, a));
    return inclusion_minimal(std::move(principals));
}

} // namespace detail

inline ideal_structure_result ideal_structure(const finite_semigroup& s) {
    ideal_structure_result r;
    r.minimal_right_ideals = detail::minimal_right_ideals_of(s);
    r.minimal_left_ideals = detail::minimal_right_ideals_of(opposite(s));

    std::set<int> kernel;
    for (const auto& ideal : r.minimal_right_ideals)
        kernel.insert(ideal.begin(), ideal.end());
    r.kernel.assign(kernel.begin(), kernel.end());

    // group test on the kernel: multiplication restricted to the kernel
    // must stay inside it and form a Latin square
    const auto& k = r.kernel;
    const int kn = static_cast<int>(k.size());
    std::vector<int> pos(s.order, -1);
    for (int i = 0; i < kn; ++i) pos[k[i]] = i;
    bool group = kn > 0;
    for (int i = 0; i < kn && group; ++i) {
        std::vector<bool> row(kn, false), col(kn, false);
        for (int j = 0; j < kn; ++j) {
            const int rij = s.mul(k[i], k[j]);
            const int rji = s.mul(k[j], k[i]);
            if (pos[rij] < 0 || pos[rji] < 0) { group = false; break; }
            row[pos[rij]] = true;
            col[pos[rji]] = true;
        }
        if (group) {
            group = std::all_of(row.begin(), row.end(), [](bool b) { return b; }) &&
                    std::all_of(col.begin(), col.end(), [](bool b) { return b; });
        }
    }
    r.kernel_is_group = group;
    if (group) {
        for (int e : k) {
            if (s.mul(e, e) != e) continue;
            bool identity = true;
            for (int x : k)
                if (s.mul(e, x) != x || s.mul(x, e) != x) { identity = false; break; }
            if (identity) { r.kernel_identity = e; break; }
        }
    }
    return r;
}

inline json ideal_structure_to_json(const finite_semigroup& s,
                                    const ideal_structure_result& r) {
    auto label_set = [&](const std::vector<int>& ids) {
        json out = json::array();
        for (int i : ids) out.push_back(s.labels[i]);
        return out;
    };
    json right = json::array(), left = json::array();
    for (const auto& ideal : r.minimal_right_ideals) right.push_back(label_set(ideal));
    for (const auto& ideal : r.minimal_left_ideals) left.push_back(label_set(ideal));
    json j{{"order", s.order},
           {"minimal_right_ideals", right},
           {"minimal_left_ideals", left},
           {"kernel", label_set(r.kernel)},
           {"kernel_is_group", r.kernel_is_group}};
    j["kernel_identity"] =
        r.kernel_identity ? json(s.labels[*r.kernel_identity]) : json(nullptr);
    return j;
}

struct admissibility_result {
    bool admissible = false;
    std::string reason;
    // when not admissible: two distinct minimal one-sided ideals (labels
    // resolved by the caller), as index sets
    std::vector<std::vector<int>> witness;
    ideal_structure_result structure;
};

// Admissible when the kernel is a group, equivalently when the minimal
// right ideal and the minimal left ideal are unique.
inline admissibility_result is_jdlg_admissible(const finite_semigroup& s) {
    admissibility_result out;
    out.structure = ideal_structure(s);
    const auto& r = out.structure;
    const bool unique_sided =
        r.minimal_right_ideals.size() == 1 && r.minimal_left_ideals.size() == 1;
    out.admissible = r.kernel_is_group;
    if (out.admissible) {
        out.reason = "kernel is a group";
    } else if (r.minimal_right_ideals.size() > 1) {
        out.reason = "multiple minimal right ideals";
        out.witness = {r.minimal_right_ideals[0], r.minimal_right_ideals[1]};
    } else if (r.minimal_left_ideals.size() > 1) {
        out.reason = "multiple minimal left ideals";
        out.witness = {r.minimal_left_ideals[0], r.minimal_left_ideals[1]};
    } else {
        out.reason = "kernel multiplication is not a group";
    }
    // the two characterizations must agree; a mismatch would be a bug
    if (out.admissible != unique_sided)
        throw error("is_jdlg_admissible: group test and uniqueness test disagree");
    return out;
}

// Uniform average over the kernel group of a scalar function on elements.
inline complexd kernel_haar_mean(const finite_semigroup& s,
                                 const std::vector<complexd>& f) {
    if (static_cast<int>(f.size()) != s.order)
        throw dimension_mismatch("kernel_haar_mean: function length differs from order");
    auto st = ideal_structure(s);
    if (!st.kernel_is_group)
        throw kernel_not_group("kernel_haar_mean: kernel is not a group");
    complexd acc = 0.0;
    for (int k : st.kernel) acc += f[k];
    return acc / static_cast<double>(st.kernel.size());
}

struct idempotents_result {
    std::vector<int> all;
    std::vector<int> minimal; // the ones lying in the kernel
};

inline idempotents_result idempotents(const finite_semigroup& s) {
    idempotents_result out;
    auto st = ideal_structure(s);
    std::set<int> kernel(st.kernel.begin(), st.kernel.end());
    for (int e = 0; e < s.order; ++e) {
        if (s.mul(e, e) == e) {
            out.all.push_back(e);
            if (kernel.count(e)) out.minimal.push_back(e);
        }
    }
    return out;
}

} // namespace jdlg
