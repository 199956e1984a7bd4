// Command line laboratory for splitting finite-dimensional operator
// semigroups into reversible and decaying parts.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jdlg/jdlg.hpp"

namespace {

using jdlg::json;

int code_of(const jdlg::error& e) {
    if (dynamic_cast<const jdlg::multiple_idempotents*>(&e)) return 2;
    if (dynamic_cast<const jdlg::kernel_not_group*>(&e)) return 2;
    if (dynamic_cast<const jdlg::not_power_bounded*>(&e)) return 3;
    if (dynamic_cast<const jdlg::not_a_group*>(&e)) return 3;
    if (dynamic_cast<const jdlg::no_convergence*>(&e)) return 4;
    if (dynamic_cast<const jdlg::boundary_collision*>(&e)) return 4;
    if (dynamic_cast<const jdlg::not_positive_definite*>(&e)) return 4;
    if (dynamic_cast<const jdlg::commutant_solve_failure*>(&e)) return 4;
    if (dynamic_cast<const jdlg::span_deficiency*>(&e)) return 4;
    if (dynamic_cast<const jdlg::budget_exhausted*>(&e)) return 4;
    return 5; // malformed input or parameters, dimension or table defects
}

struct tol_flags {
    std::optional<double> rank, closure, idempotent, convergence, boundary;
    std::optional<int> max_iterations;
};

jdlg::tolerances resolve_tolerances(const std::string& config_path, const tol_flags& flags) {
    jdlg::tolerances tol;
    if (const char* profile = std::getenv("JDLG_TOL_PROFILE")) {
        const std::string p = profile;
        if (p == "strict")
            tol = jdlg::tolerances::strict();
        else if (p == "loose")
            tol = jdlg::tolerances::loose();
        else if (p != "default" && !p.empty())
            throw jdlg::malformed_parameters("JDLG_TOL_PROFILE must be default, strict or loose");
    }
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw jdlg::malformed_input("cannot open config file " + config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw jdlg::malformed_input(std::string("config: ") + e.what());
        }
        if (!j.is_object()) throw jdlg::malformed_input("config: expected an object");
        auto take = [&](const char* key, double& slot) {
            if (j.contains(key)) {
                if (!j[key].is_number()) throw jdlg::malformed_input(std::string("config: ") + key);
                slot = j[key].get<double>();
            }
        };
        take("rank_tol", tol.rank_tol);
        take("closure_eps", tol.closure_eps);
        take("idempotent_tol", tol.idempotent_tol);
        take("convergence_tol", tol.convergence_tol);
        take("spectral_boundary", tol.spectral_boundary);
        if (j.contains("max_iterations")) {
            if (!j["max_iterations"].is_number_integer())
                throw jdlg::malformed_input("config: max_iterations");
            tol.max_iterations = j["max_iterations"].get<int>();
        }
    }
    if (flags.rank) tol.rank_tol = *flags.rank;
    if (flags.closure) tol.closure_eps = *flags.closure;
    if (flags.idempotent) tol.idempotent_tol = *flags.idempotent;
    if (flags.convergence) tol.convergence_tol = *flags.convergence;
    if (flags.boundary) tol.spectral_boundary = *flags.boundary;
    if (flags.max_iterations) tol.max_iterations = *flags.max_iterations;
    if (tol.rank_tol <= 0 || tol.closure_eps <= 0 || tol.idempotent_tol <= 0 ||
        tol.convergence_tol <= 0 || tol.max_iterations < 1 || tol.spectral_boundary <= 0 ||
        tol.spectral_boundary >= 1)
        throw jdlg::malformed_parameters("tolerances must be positive, boundary inside (0, 1)");
    return tol;
}

json read_json_input(const std::string& path) {
    json j;
    try {
        if (path.empty() || path == "-") {
            std::cin >> j;
        } else {
            std::ifstream in(path);
            if (!in) throw jdlg::malformed_input("cannot open input file " + path);
            in >> j;
        }
    } catch (const json::exception& e) {
        throw jdlg::malformed_input(std::string("input is not valid: ") + e.what());
    }
    return j;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw jdlg::malformed_input("cannot open output file " + path);
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
}

struct rep_source {
    std::string input;   // JSON file, or "-" for stdin
    std::string catalog; // catalog entry name
};

jdlg::matrix_representation load_representation(const rep_source& src,
                                                jdlg::folner_sequence* folner_out,
                                                const std::string& folner_name) {
    jdlg::matrix_representation rep;
    if (!src.catalog.empty()) {
        auto entries = jdlg::catalog();
        const auto* e = jdlg::find_catalog_entry(entries, src.catalog);
        if (!e) {
            std::string names;
            for (const auto& c : entries) names += " " + c.name;
            throw jdlg::malformed_parameters("unknown catalog entry '" + src.catalog +
                                             "'; available:" + names);
        }
        rep = e->rep;
        if (folner_out) *folner_out = e->folner;
    } else {
        json j = read_json_input(src.input);
        if (j.is_object() && j.contains("representation"))
            rep = jdlg::representation_from_json(j["representation"]);
        else
            rep = jdlg::representation_from_json(j);
        if (folner_out && rep.index_model)
            *folner_out = jdlg::box_sequence(*rep.index_model, folner_name == "boxes0" ? 0 : 1);
    }
    if (folner_out && !src.catalog.empty() && folner_name == "boxes0" && rep.index_model)
        *folner_out = jdlg::box_sequence(*rep.index_model, 0);
    return rep;
}

std::string render_json(const json& j) { return j.dump(2); }

int run_analyze(const std::string& input, const std::string& output, const std::string& format) {
    json j = read_json_input(input);
    auto s = jdlg::semigroup_from_json(j);
    auto adm = jdlg::is_jdlg_admissible(s);
    auto idem = jdlg::idempotents(s);
    json witness = json::array();
    for (const auto& ideal : adm.witness) {
        json labels = json::array();
        for (int i : ideal) labels.push_back(s.labels[i]);
        witness.push_back(std::move(labels));
    }
    json out{{"order", s.order},
             {"admissible", adm.admissible},
             {"reason", adm.reason},
             {"witness", std::move(witness)},
             {"structure", jdlg::ideal_structure_to_json(s, adm.structure)},
             {"idempotents", json::array()},
             {"minimal_idempotents", json::array()}};
    for (int i : idem.all) out["idempotents"].push_back(s.labels[i]);
    for (int i : idem.minimal) out["minimal_idempotents"].push_back(s.labels[i]);
    if (format == "text") {
        std::ostringstream os;
        os << "order " << s.order << "\n"
           << "admissible: " << (adm.admissible ? "yes" : "no") << "\n"
           << "reason: " << adm.reason << "\n"
           << "minimal right ideals: " << adm.structure.minimal_right_ideals.size() << "\n"
           << "minimal left ideals: " << adm.structure.minimal_left_ideals.size() << "\n"
           << "kernel size: " << adm.structure.kernel.size() << "\n";
        write_output(output, os.str());
    } else if (format == "json") {
        write_output(output, render_json(out));
    } else {
        throw jdlg::malformed_parameters("analyze-semigroup supports json or text output");
    }
    return adm.admissible ? 0 : 2;
}

int run_decompose(const rep_source& src, const std::string& method, const std::string& folner_name,
                  const std::string& output, const std::string& format,
                  const jdlg::tolerances& tol) {
    jdlg::folner_sequence folner;
    jdlg::matrix_representation rep = load_representation(src, &folner, folner_name);
    std::vector<jdlg::jdlg_split> splits;
    std::vector<std::string> skipped;
    auto want = [&](const char* m) { return method == "all" || method == m; };
    if (want("spectral")) {
        if (rep.generators.size() == 1)
            splits.push_back(jdlg::decompose_spectral(rep, tol));
        else if (method == "spectral")
            throw jdlg::malformed_parameters("spectral method needs exactly one generator");
        else
            skipped.push_back("spectral: needs exactly one generator");
    }
    if (want("idempotent")) splits.push_back(jdlg::decompose_idempotent(rep, tol));
    if (want("gram")) {
        if (folner.window)
            splits.push_back(jdlg::decompose_by_gram(rep, folner, tol));
        else if (method == "gram")
            throw jdlg::malformed_parameters("gram method needs an index model");
        else
            skipped.push_back("gram: needs an index model");
    }
    if (splits.empty()) throw jdlg::malformed_parameters("no applicable method");
    json out{{"splits", json::array()}, {"reconciliations", json::array()}, {"skipped", skipped}};
    for (const auto& s : splits) out["splits"].push_back(jdlg::split_to_json(s));
    for (std::size_t a = 0; a < splits.size(); ++a)
        for (std::size_t b = a + 1; b < splits.size(); ++b) {
            json r = jdlg::reconciliation_to_json(jdlg::reconcile(splits[a], splits[b]));
            r["a"] = splits[a].method;
            r["b"] = splits[b].method;
            out["reconciliations"].push_back(std::move(r));
        }
    if (format == "text") {
        std::ostringstream os;
        for (const auto& s : splits)
            os << s.method << ": dim_r " << s.basis_r.cols() << ", dim_aws " << s.basis_aws.cols()
               << ", idempotency " << s.residuals.idempotency << ", commutation "
               << s.residuals.commutation << "\n";
        for (const auto& r : out["reconciliations"])
            os << r["a"].get<std::string>() << " vs " << r["b"].get<std::string>()
               << ": projector distance " << r["projector_distance"].get<double>() << "\n";
        write_output(output, os.str());
    } else if (format == "json") {
        write_output(output, render_json(out));
    } else {
        throw jdlg::malformed_parameters("decompose supports json or text output");
    }
    return 0;
}

int run_characterize(const rep_source& src, const std::string& vector_json,
                     const std::string& folner_name, const std::string& output,
                     const std::string& format, const jdlg::tolerances& tol) {
    jdlg::folner_sequence folner;
    jdlg::matrix_representation rep;
    jdlg::cvec xi;
    if (!src.catalog.empty()) {
        rep = load_representation(src, &folner, folner_name);
        if (vector_json.empty())
            throw jdlg::malformed_parameters("characterize --catalog needs --vector");
    } else {
        json j = read_json_input(src.input);
        if (!j.is_object() || !j.contains("representation") || !j.contains("vector"))
            throw jdlg::malformed_input("characterize input needs representation and vector");
        rep = jdlg::representation_from_json(j["representation"]);
        xi = jdlg::vector_from_json(j["vector"]);
        if (rep.index_model)
            folner = jdlg::box_sequence(*rep.index_model, folner_name == "boxes0" ? 0 : 1);
    }
    if (!vector_json.empty()) {
        json vj;
        try {
            vj = json::parse(vector_json);
        } catch (const json::exception& e) {
            throw jdlg::malformed_input(std::string("--vector: ") + e.what());
        }
        xi = jdlg::vector_from_json(vj);
    }
    if (!folner.window) throw jdlg::malformed_parameters("characterize needs an index model");
    auto report = jdlg::characterization_battery(rep, folner, xi, {}, tol);
    if (format == "csv")
        write_output(output, jdlg::battery_report_to_csv(report));
    else if (format == "json")
        write_output(output, render_json(jdlg::battery_report_to_json(report)));
    else if (format == "text") {
        std::ostringstream os;
        for (const auto& it : report.items)
            os << it.item << " p=" << it.p << ": "
               << (it.decided ? (it.member ? "decaying" : "not decaying") : "undecided")
               << " (value " << it.value << ")\n";
        os << "agreement: " << (report.agreement ? "yes" : "no") << "\n";
        write_output(output, os.str());
    } else {
        throw jdlg::malformed_parameters("characterize supports json, csv or text output");
    }
    for (const auto& it : report.items)
        if (!it.decided) return 4;
    return 0;
}

int run_unitary(const rep_source& src, const std::string& folner_name, const std::string& output,
                const std::string& format, const jdlg::tolerances& tol) {
    jdlg::folner_sequence folner;
    jdlg::matrix_representation rep = load_representation(src, &folner, folner_name);
    auto split = jdlg::decompose_idempotent(rep, tol);
    auto ip = jdlg::invariant_inner_product_on(rep, split.basis_r, tol);
    auto systems = jdlg::decompose_irreducibles(rep, split.basis_r, ip, tol);
    auto words = jdlg::default_word_sample(static_cast<int>(rep.generators.size()));
    auto eq = jdlg::verify_weak_equivalence(rep, split.basis_r, systems, ip, words, tol);
    json sys = json::array();
    for (const auto& s : systems) {
        json js = jdlg::unitary_system_to_json(s, rep.names);
        auto nc = jdlg::norm_constancy_check(rep, s, words, tol);
        js["norm_constant"] = nc.constant;
        js["norm_deviation"] = nc.max_deviation;
        sys.push_back(std::move(js));
    }
    json out{{"dim_r", split.basis_r.cols()},
             {"inner_product",
              {{"source", ip.source},
               {"invariance_defect", ip.invariance_defect},
               {"gram", jdlg::matrix_to_json(ip.gram)}}},
             {"systems", std::move(sys)},
             {"weak_equivalence",
              {{"max_discrepancy", eq.max_discrepancy}, {"words_checked", eq.words_checked}}}};
    if (format == "text") {
        std::ostringstream os;
        os << "reversible dimension " << split.basis_r.cols() << ", " << systems.size()
           << " irreducible systems of dims";
        for (const auto& s : systems) os << " " << s.basis.cols();
        os << "\nweak equivalence discrepancy " << eq.max_discrepancy << " over "
           << eq.words_checked << " words\n";
        write_output(output, os.str());
    } else if (format == "json") {
        write_output(output, render_json(out));
    } else {
        throw jdlg::malformed_parameters("unitary-structure supports json or text output");
    }
    return 0;
}

int run_counterexample(int n_max, const std::string& output, const std::string& format) {
    auto rep = jdlg::klawe_counterexample(n_max);
    if (format == "text") {
        std::ostringstream os;
        os << "translate by (1,1) vanishes: " << (rep.translate_vanishes ? "yes" : "no") << " ("
           << rep.vanishing_checked << " points)\n"
           << "averages over F_N * (0,1) all exactly one: "
           << (rep.averages_exactly_one ? "yes" : "no") << "\n";
        for (std::size_t i = 0; i < rep.average_numerators.size(); ++i)
            os << "  N=" << (i + 1) << ": " << rep.average_numerators[i] << "/"
               << rep.average_denominators[i] << "\n";
        os << "semigroup orbit:";
        for (const auto& t : rep.orbit.semigroup_orbit) os << " " << t;
        os << "\nmonoid orbit:";
        for (const auto& t : rep.orbit.monoid_orbit) os << " " << t;
        os << "\nmonoid orbit is the reference four: "
           << (rep.orbit.monoid_orbit_is_reference_four ? "yes" : "no") << "\n";
        write_output(output, os.str());
    } else if (format == "json") {
        write_output(output, render_json(jdlg::klawe_report_to_json(rep)));
    } else {
        throw jdlg::malformed_parameters("counterexample supports json or text output");
    }
    return 0;
}

int run_closure(const rep_source& src, const std::string& output, const std::string& format,
                const jdlg::tolerances& tol) {
    jdlg::matrix_representation rep = load_representation(src, nullptr, "boxes");
    auto net = jdlg::approximate_closure(rep, tol);
    const double scale = std::max(1.0, net.norm_bound);
    json elements = json::array();
    for (std::size_t i = 0; i < net.elements.size(); ++i) {
        std::string word;
        for (int g : net.words[i]) {
            if (!word.empty()) word += ' ';
            word += rep.names[static_cast<std::size_t>(g)];
        }
        elements.push_back({{"word", word.empty() ? "identity" : word},
                            {"norm", net.elements[i].norm()},
                            {"rank", jdlg::numerical_rank_abs(net.elements[i], scale, tol)}});
    }
    json out{{"count", net.elements.size()},
             {"saturated", net.saturated},
             {"passes", net.passes},
             {"norm_bound", net.norm_bound},
             {"dedup_eps", net.dedup_eps},
             {"elements", std::move(elements)}};
    if (format == "text") {
        std::ostringstream os;
        os << net.elements.size() << " elements, " << (net.saturated ? "saturated" : "partial")
           << " after " << net.passes << " passes, norm bound " << net.norm_bound << "\n";
        write_output(output, os.str());
    } else if (format == "json") {
        write_output(output, render_json(out));
    } else {
        throw jdlg::malformed_parameters("closure supports json or text output");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for reversible/decaying splittings of matrix semigroups"};
    app.require_subcommand(1);

    std::string config_path;
    tol_flags flags;
    app.add_option("--config", config_path, "JSON file with tolerance overrides");
    double v_rank = 0, v_closure = 0, v_idem = 0, v_conv = 0, v_bound = 0;
    int v_iter = 0;
    auto* o_rank = app.add_option("--tol-rank", v_rank, "singular value cut, relative");
    auto* o_closure = app.add_option("--tol-closure", v_closure, "net dedup distance");
    auto* o_idem = app.add_option("--tol-idempotent", v_idem, "idempotency acceptance");
    auto* o_conv = app.add_option("--tol-convergence", v_conv, "Cauchy window width");
    auto* o_bound = app.add_option("--spectral-boundary", v_bound, "|lambda| split circle");
    auto* o_iter = app.add_option("--max-iterations", v_iter, "generic iteration budget");

    std::string input, output, format = "json", method = "all", folner_name = "boxes",
                catalog_name, vector_json;
    int n_max = 8;

    auto add_io = [&](CLI::App* cmd, bool with_catalog) {
        cmd->fallthrough(); // accept the global tolerance options after the subcommand
        cmd->add_option("--input,-i", input, "input JSON file, - for stdin");
        cmd->add_option("--output,-o", output, "output file, - for stdout");
        cmd->add_option("--format,-f", format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        if (with_catalog) cmd->add_option("--catalog", catalog_name, "use a catalog entry");
    };

    auto* c_analyze = app.add_subcommand("analyze-semigroup",
                                         "ideal structure and admissibility of a Cayley table");
    add_io(c_analyze, false);

    auto* c_decompose = app.add_subcommand("decompose", "split a representation by one or all methods");
    add_io(c_decompose, true);
    c_decompose->add_option("--method", method, "spectral, idempotent, gram or all")
        ->check(CLI::IsMember({"spectral", "idempotent", "gram", "all"}));
    c_decompose->add_option("--folner", folner_name, "box windows: boxes (from 1) or boxes0")
        ->check(CLI::IsMember({"boxes", "boxes0"}));

    auto* c_char = app.add_subcommand("characterize",
                                      "almost-weak-stability battery for one vector");
    add_io(c_char, true);
    c_char->add_option("--vector", vector_json, "vector as JSON, e.g. [[0,0],[1,0]]");
    c_char->add_option("--folner", folner_name, "box windows: boxes (from 1) or boxes0")
        ->check(CLI::IsMember({"boxes", "boxes0"}));

    auto* c_unitary = app.add_subcommand("unitary-structure",
                                         "irreducible unitary systems of the reversible part");
    add_io(c_unitary, true);

    auto* c_counter = app.add_subcommand("counterexample",
                                         "the Folner-averaged orbit that no splitting reproduces");
    add_io(c_counter, false);
    c_counter->add_option("--n-max", n_max, "largest window index")->check(CLI::Range(1, 9));

    auto* c_closure = app.add_subcommand("closure", "approximate product closure of the generators");
    add_io(c_closure, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e); // prints the message or the help text
        return rc == 0 ? 0 : 5;
    }

    try {
        if (o_rank->count()) flags.rank = v_rank;
        if (o_closure->count()) flags.closure = v_closure;
        if (o_idem->count()) flags.idempotent = v_idem;
        if (o_conv->count()) flags.convergence = v_conv;
        if (o_bound->count()) flags.boundary = v_bound;
        if (o_iter->count()) flags.max_iterations = v_iter;
        const jdlg::tolerances tol = resolve_tolerances(config_path, flags);
        const rep_source src{input, catalog_name};
        if (c_analyze->parsed()) return run_analyze(input, output, format);
        if (c_decompose->parsed()) return run_decompose(src, method, folner_name, output, format, tol);
        if (c_char->parsed())
            return run_characterize(src, vector_json, folner_name, output, format, tol);
        if (c_unitary->parsed()) return run_unitary(src, folner_name, output, format, tol);
        if (c_counter->parsed()) return run_counterexample(n_max, output, format);
        if (c_closure->parsed()) return run_closure(src, output, format, tol);
        return 5;
    } catch (const jdlg::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return code_of(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
