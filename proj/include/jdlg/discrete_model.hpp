#pragma once

// Countable discrete semigroups in which averaging happens: elements are
// small integer tuples, multiplication is pluggable (componentwise
// addition, a finite Cayley table, or a custom rule), and a Folner
// sequence is a named nested family of finite windows.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "jdlg/errors.hpp"
#include "jdlg/finite_semigroup.hpp"

namespace jdlg {

using element = std::vector<std::int64_t>;

struct element_hash {
    std::size_t operator()(const element& e) const {
        std::size_t h = 1469598103934665603ull;
        for (auto v : e) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

struct discrete_semigroup_model {
    enum class kind_t { additive, table, custom };

    std::string name;
    int arity = 1;
    kind_t kind = kind_t::additive;
    std::shared_ptr<const finite_semigroup> cayley; // kind_t::table
    std::function<element(const element&, const element&)> custom_mul;

    element mul(const element& a, const element& b) const {
        if (static_cast<int>(a.size()) != arity || static_cast<int>(b.size()) != arity)
            throw dimension_mismatch("model '" + name + "': element arity mismatch");
        switch (kind) {
        case kind_t::additive: {
            element out(arity);
            for (int i = 0; i < arity; ++i) {
                if (a[i] < 0 || b[i] < 0)
                    throw malformed_parameters("model '" + name + "': negative component");
                if (__builtin_add_overflow(a[i], b[i], &out[i]))
                    throw malformed_parameters("model '" + name + "': component overflow");
            }
            return out;
        }
        case kind_t::table: {
            const int n = cayley->order;
            if (a[0] < 0 || a[0] >= n || b[0] < 0 || b[0] >= n)
                throw malformed_parameters("model '" + name + "': index out of range");
            return {cayley->mul(static_cast<int>(a[0]), static_cast<int>(b[0]))};
        }
        case kind_t::custom:
            return custom_mul(a, b);
        }
        throw malformed_parameters("model '" + name + "': unknown kind");
    }
};

inline discrete_semigroup_model naturals_model(int arity = 1) {
    if (arity < 1) throw malformed_parameters("naturals_model: arity must be positive");
    discrete_semigroup_model m;
    m.name = arity == 1 ? "naturals" : ("naturals^" + std::to_string(arity));
    m.arity = arity;
    m.kind = discrete_semigroup_model::kind_t::additive;
    return m;
}

inline discrete_semigroup_model table_model(std::shared_ptr<const finite_semigroup> s,
                                            std::string name = "table") {
    discrete_semigroup_model m;
    m.name = std::move(name);
    m.arity = 1;
    m.kind = discrete_semigroup_model::kind_t::table;
    m.cayley = std::move(s);
    return m;
}

// A Folner candidate sequence: window(n) enumerates F_n; shell(n), when
// nested windows make it cheap, enumerates F_n \ F_{n-1} so averages can
// be maintained incrementally (shell(1) must equal window(1)).
struct folner_sequence {
    std::string name;
    discrete_semigroup_model model;
    std::function<std::vector<element>(int)> window;
    std::function<std::vector<element>(int)> shell; // optional
};

// {base .. base+n-1}^arity; base 1 gives {1..n}, base 0 gives [0, n).
inline folner_sequence box_sequence(discrete_semigroup_model model, int base = 1) {
    if (model.kind != discrete_semigroup_model::kind_t::additive)
        throw malformed_parameters("box_sequence: needs an additive model");
    const int arity = model.arity;
    auto enumerate = [arity, base](int n, bool shell_only) {
        std::vector<element> out;
        if (n < 1) return out;
        element cur(arity, base);
        // odometer over the box, emitting only tuples touching the new
        // layer when shell_only is set
        while (true) {
            bool touches = false;
            for (int i = 0; i < arity; ++i)
                if (cur[i] == base + n - 1) { touches = true; break; }
            if (!shell_only || touches) out.push_back(cur);
            int i = arity - 1;
            while (i >= 0) {
                if (++cur[i] < base + n) break;
                cur[i] = base;
                --i;
            }
            if (i < 0) break;
        }
        return out;
    };
    folner_sequence f;
    f.name = base == 1 ? "boxes" : "boxes0";
    f.model = std::move(model);
    f.window = [enumerate](int n) { return enumerate(n, false); };
    f.shell = [enumerate](int n) { return enumerate(n, true); };
    return f;
}

// The whole finite semigroup as a constant window.
inline folner_sequence table_sequence(std::shared_ptr<const finite_semigroup> s,
                                      std::string name = "table") {
    const int order = s->order;
    folner_sequence f;
    f.name = std::move(name);
    f.model = table_model(std::move(s), f.name);
    f.window = [order](int) {
        std::vector<element> out;
        for (int i = 0; i < order; ++i) out.push_back({i});
        return out;
    };
    f.shell = [w = f.window](int n) {
        return n == 1 ? w(1) : std::vector<element>{};
    };
    return f;
}

// Convergence record for a scalar limit along window truncations.
struct convergence_report {
    bool converged = false;
    complexd limit{0.0, 0.0};
    int converged_at = -1; // first index where the Cauchy window closed
    int cauchy_window = 10;
    double tol = 1e-6;
    std::vector<std::pair<std::int64_t, complexd>> partials; // (|F_n|, value)
};

} // namespace jdlg
