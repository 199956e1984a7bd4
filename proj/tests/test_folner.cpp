#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "jdlg/jdlg.hpp"

using namespace jdlg;

TEST_CASE("box windows enumerate the full box and shells partition it") {
    for (int arity : {1, 2, 3}) {
        auto f = box_sequence(naturals_model(arity));
        for (int n : {1, 2, 4, 7}) {
            const auto w = f.window(n);
            std::int64_t expect = 1;
            for (int a = 0; a < arity; ++a) expect *= n;
            CHECK(static_cast<std::int64_t>(w.size()) == expect);
        }
        // shell sizes telescope the window sizes
        std::int64_t covered = static_cast<std::int64_t>(f.shell(1).size());
        CHECK(f.shell(1) == f.window(1));
        for (int n = 2; n <= 6; ++n) covered += static_cast<std::int64_t>(f.shell(n).size());
        CHECK(covered == static_cast<std::int64_t>(f.window(6).size()));
    }
}

TEST_CASE("base zero boxes start at the monoid identity") {
    auto f = box_sequence(naturals_model(1), 0);
    auto w = f.window(3);
    REQUIRE(w.size() == 3);
    CHECK(w.front() == element{0});
}

TEST_CASE("translation defect of a box by one is exactly two over n") {
    auto f = box_sequence(naturals_model(1));
    for (int n : {4, 30, 100}) {
        auto d = folner_defect(f, {1}, n);
        CHECK(d.sym_diff == 2);
        CHECK(d.window_size == n);
        // bit-exact: both sides are the correctly rounded quotient
        CHECK(d.value == 2.0 / n);
    }
}

TEST_CASE("translation defect of a square box moves one column") {
    auto f = box_sequence(naturals_model(2));
    for (int n : {5, 16}) {
        auto d = folner_defect(f, {1, 0}, n);
        CHECK(d.sym_diff == 2 * n);
        CHECK(d.window_size == static_cast<std::int64_t>(n) * n);
        CHECK(d.value == 2.0 / n);
    }
}

TEST_CASE("averaging a geometric sequence hits the closed form") {
    auto f = box_sequence(naturals_model(1));
    auto rep = average(
        f, [](const element& e) { return complexd(std::pow(0.4, double(e[0])), 0.0); }, 4096);
    REQUIRE(rep.converged);
    CHECK(rep.converged_at == 2454);
    // value of the partial average at n: (0.4 - 0.4^(n+1)) / (0.6 n)
    REQUIRE(rep.partials.size() >= 40);
    const auto& [size40, value40] = rep.partials[39];
    CHECK(size40 == 40);
    CHECK(std::abs(value40 - (0.4 - std::pow(0.4, 41)) / (0.6 * 40)) < 1e-15);
    CHECK(std::abs(rep.limit) < 1e-3);
}

TEST_CASE("an alternating sequence averages to zero without settling early") {
    auto f = box_sequence(naturals_model(1));
    auto alt = [](const element& e) { return complexd(e[0] % 2 ? 1.0 : -1.0, 0.0); };
    auto strict_rep = average(f, alt, 4096);
    CHECK_FALSE(strict_rep.converged); // the 1/n sawtooth never beats 1e-6
    CHECK(std::abs(strict_rep.limit) < 1e-3);
    tolerances loose;
    loose.convergence_tol = 1e-3;
    auto loose_rep = average(f, alt, 4096, loose);
    CHECK(loose_rep.converged);
    CHECK(loose_rep.converged_at > 500);
    CHECK(std::abs(loose_rep.limit) < 1e-3);
}

TEST_CASE("density of the even numbers is one half") {
    auto f = box_sequence(naturals_model(1));
    auto d = density(f, [](const element& e) { return e[0] % 2 == 0; }, 2048);
    CHECK(d.upper == Catch::Approx(0.5).margin(1e-3));
    CHECK(d.lower == Catch::Approx(0.5).margin(1e-3));
    CHECK(d.lower <= d.upper);
}

TEST_CASE("density of the squares is zero and of everything is one") {
    auto f = box_sequence(naturals_model(1));
    auto sq = density(
        f,
        [](const element& e) {
            auto r = static_cast<std::int64_t>(std::llround(std::sqrt(double(e[0]))));
            return r * r == e[0];
        },
        4096);
    CHECK(sq.upper < 0.05);
    auto all = density(f, [](const element&) { return true; }, 64);
    CHECK(all.upper == 1.0);
    CHECK(all.lower == 1.0);
    auto none = density(f, [](const element&) { return false; }, 64);
    CHECK(none.upper == 0.0);
}

TEST_CASE("upper density is complement-dual to lower density") {
    auto f = box_sequence(naturals_model(1));
    auto pred = [](const element& e) { return (e[0] / 7) % 3 != 0; };
    auto a = density(f, pred, 1024);
    auto c = density(f, [&](const element& e) { return !pred(e); }, 1024);
    CHECK(a.upper == Catch::Approx(1.0 - c.lower).margin(1e-12));
    CHECK(a.lower == Catch::Approx(1.0 - c.upper).margin(1e-12));
}

TEST_CASE("a set missing one point in four thousand has density-one increments") {
    auto f = box_sequence(naturals_model(1));
    auto r = d_lim_density(f, [](const element& e) { return e[0] % 4096 != 0; }, 4096, 1e-3);
    CHECK(r.density_one);
    REQUIRE(r.increments.size() >= 3);
    auto half = d_lim_density(f, [](const element& e) { return e[0] % 2 == 0; }, 4096, 1e-3);
    CHECK_FALSE(half.density_one);
}

TEST_CASE("orbit of a decaying vector enters every neighborhood of zero densely") {
    auto entry = *find_catalog_entry(catalog(), "rotation_contraction");
    cvec dead = cvec::Zero(2), live = cvec::Zero(2);
    dead(1) = 1.0;
    live(0) = 1.0;
    CHECK(d_lim_check(entry.rep, entry.folner, dead, 0.1, 4096).density_one);
    CHECK_FALSE(d_lim_check(entry.rep, entry.folner, live, 0.1, 4096).density_one);
}

TEST_CASE("defect and window guards reject bad arguments") {
    auto f = box_sequence(naturals_model(1));
    CHECK_THROWS_AS(folner_defect(f, {1}, 0), malformed_parameters);
    CHECK_THROWS_AS(average(f, [](const element&) { return complexd(0.0, 0.0); }, 0),
                    malformed_parameters);
    CHECK_THROWS_AS(d_lim_density(f, [](const element&) { return true; }, 2, 1e-3),
                    malformed_parameters);
}
