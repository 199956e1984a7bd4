#pragma once

// A representation is a finite list of named generator matrices acting on
// C^d, optionally indexed by a discrete model so that abstract elements
// (power tuples or Cayley-table indices) map to concrete matrices.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jdlg/discrete_model.hpp"
#include "jdlg/errors.hpp"
#include "jdlg/linalg.hpp"
#include "jdlg/serialization.hpp"

namespace jdlg {

struct matrix_representation {
    int dim = 0;
    std::vector<std::string> names;
    std::vector<cmat> generators;
    bool monoid = true; // include the identity as an element
    std::optional<discrete_semigroup_model> index_model;
};

inline matrix_representation
make_matrix_representation(std::vector<std::string> names, std::vector<cmat> generators,
                           bool monoid = true,
                           std::optional<discrete_semigroup_model> index_model = std::nullopt) {
    if (names.size() != generators.size() || generators.empty())
        throw malformed_parameters("representation: need one name per generator");
    matrix_representation rep;
    rep.dim = static_cast<int>(generators.front().rows());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        require_square(generators[i], "generator " + names[i]);
        require_finite(generators[i], "generator " + names[i]);
        if (generators[i].rows() != rep.dim)
            throw dimension_mismatch("representation: generator " + names[i] + " has a different size");
        if (names[i].empty())
            throw malformed_parameters("representation: empty generator name");
        for (std::size_t j = 0; j < i; ++j)
            if (names[j] == names[i])
                throw malformed_parameters("representation: duplicate generator name " + names[i]);
    }
    rep.names = std::move(names);
    rep.generators = std::move(generators);
    rep.monoid = monoid;
    if (index_model) {
        const auto& m = *index_model;
        if (m.kind == discrete_semigroup_model::kind_t::additive) {
            if (m.arity != static_cast<int>(rep.generators.size()))
                throw malformed_parameters("representation: model arity must match generator count");
            double scale = 1.0;
            for (const auto& g : rep.generators) scale = std::max(scale, g.norm());
            for (std::size_t i = 0; i < rep.generators.size(); ++i)
                for (std::size_t j = i + 1; j < rep.generators.size(); ++j) {
                    double comm = (rep.generators[i] * rep.generators[j] -
                                   rep.generators[j] * rep.generators[i]).norm();
                    if (comm > 1e-10 * scale * scale)
                        throw malformed_parameters("representation: additive index model needs commuting generators (" +
                                                   rep.names[i] + ", " + rep.names[j] + " do not commute)");
                }
        } else if (m.kind == discrete_semigroup_model::kind_t::table) {
            const int n = m.cayley->order;
            if (n != static_cast<int>(rep.generators.size()))
                throw malformed_parameters("representation: need one matrix per Cayley element");
            double scale = 1.0;
            for (const auto& g : rep.generators) scale = std::max(scale, g.norm());
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double dev = (rep.generators[a] * rep.generators[b] -
                                  rep.generators[m.cayley->mul(a, b)]).norm();
                    if (dev > 1e-8 * scale * scale)
                        throw malformed_parameters("representation: matrices do not realize the Cayley table at (" +
                                                   m.cayley->labels[a] + ", " + m.cayley->labels[b] + ")");
                }
        }
        rep.index_model = std::move(index_model);
    }
    return rep;
}

// pi(e): for additive models the commuting product of generator powers,
// for table models the matrix attached to the element's index.
inline cmat apply(const matrix_representation& rep, const element& e) {
    if (!rep.index_model)
        throw malformed_parameters("apply: representation has no index model");
    const auto& m = *rep.index_model;
    if (static_cast<int>(e.size()) != m.arity)
        throw dimension_mismatch("apply: element arity mismatch");
    if (m.kind == discrete_semigroup_model::kind_t::table) {
        if (e[0] < 0 || e[0] >= static_cast<std::int64_t>(rep.generators.size()))
            throw malformed_parameters("apply: Cayley index out of range");
        return rep.generators[static_cast<std::size_t>(e[0])];
    }
    if (m.kind != discrete_semigroup_model::kind_t::additive)
        throw malformed_parameters("apply: unsupported model kind");
    cmat out = cmat::Identity(rep.dim, rep.dim);
    for (int i = 0; i < m.arity; ++i) {
        if (e[i] < 0) throw malformed_parameters("apply: negative power");
        out = out * matrix_power(rep.generators[i], static_cast<long long>(e[i]));
    }
    return out;
}

// Cheap divergence screen: squares each generator (and pairwise products)
// a few times and throws if norms blow past cap * (1 + generator scale).
inline void require_power_bounded_sample(const matrix_representation& rep, double cap = 1e6) {
    double scale = 1.0;
    for (const auto& g : rep.generators) scale = std::max(scale, g.norm());
    const double limit = cap * (1.0 + scale);
    auto chase = [&](cmat m, const std::string& what) {
        for (int k = 0; k < 16; ++k) {
            if (m.norm() > limit)
                throw not_power_bounded("powers of " + what + " exceed " + std::to_string(limit));
            m = m * m;
        }
    };
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        chase(rep.generators[i], rep.names[i]);
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        for (std::size_t j = 0; j < rep.generators.size(); ++j)
            if (i != j)
                chase(rep.generators[i] * rep.generators[j], rep.names[i] + "*" + rep.names[j]);
}

// JSON schema: {"dim": d, "generators": {name: matrix, ...}, "monoid": b,
// "index_model": "naturals" | "table" | absent}. Generator order (and the
// axis order of a naturals model) is alphabetical by name.
inline matrix_representation representation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("generators"))
        throw malformed_input("representation: need dim and generators");
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw malformed_input("representation: dim must be a positive integer");
    const int dim = j["dim"].get<int>();
    if (!j["generators"].is_object() || j["generators"].empty())
        throw malformed_input("representation: generators must be a nonempty object");
    std::map<std::string, cmat> by_name;
    for (auto it = j["generators"].begin(); it != j["generators"].end(); ++it)
        by_name[it.key()] = matrix_from_json(it.value());
    std::vector<std::string> names;
    std::vector<cmat> gens;
    for (auto& [name, m] : by_name) {
        if (m.rows() != dim || m.cols() != dim)
            throw malformed_input("representation: generator " + name + " is not dim x dim");
        names.push_back(name);
        gens.push_back(std::move(m));
    }
    bool monoid = true;
    if (j.contains("monoid")) {
        if (!j["monoid"].is_boolean()) throw malformed_input("representation: monoid must be boolean");
        monoid = j["monoid"].get<bool>();
    }
    std::optional<discrete_semigroup_model> model;
    if (j.contains("index_model") && !j["index_model"].is_null()) {
        if (!j["index_model"].is_string())
            throw malformed_input("representation: index_model must be a string");
        const std::string kind = j["index_model"].get<std::string>();
        if (kind == "naturals")
            model = naturals_model(static_cast<int>(gens.size()));
        else
            throw malformed_input("representation: unknown index_model '" + kind + "'");
    }
    try {
        return make_matrix_representation(std::move(names), std::move(gens), monoid, std::move(model));
    } catch (const malformed_parameters& e) {
        throw malformed_input(e.what());
    }
}

inline json representation_to_json(const matrix_representation& rep) {
    json gens = json::object();
    for (std::size_t i = 0; i < rep.generators.size(); ++i)
        gens[rep.names[i]] = matrix_to_json(rep.generators[i]);
    json j{{"dim", rep.dim}, {"generators", std::move(gens)}, {"monoid", rep.monoid}};
    if (rep.index_model &&
        rep.index_model->kind == discrete_semigroup_model::kind_t::additive)
        j["index_model"] = "naturals";
    return j;
}

} // namespace jdlg
