#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "jdlg/jdlg.hpp"

using namespace jdlg;

namespace {
cmat one_by_one(double x) {
    cmat m(1, 1);
    m(0, 0) = x;
    return m;
}
} // namespace

TEST_CASE("closure of a finite group saturates at the group") {
    auto entry = *find_catalog_entry(catalog(), "cyclic_shift");
    auto net = approximate_closure(entry.rep);
    CHECK(net.saturated);
    CHECK(net.elements.size() == 3); // identity, shift, shift squared
    CHECK(net.norm_bound == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
    // every element is a permutation matrix power, distance between any
    // two distinct ones is at least sqrt(2) > dedup_eps
    for (std::size_t i = 0; i < net.elements.size(); ++i)
        for (std::size_t j = i + 1; j < net.elements.size(); ++j)
            CHECK(frobenius_distance(net.elements[i], net.elements[j]) > 1.0);
}

TEST_CASE("closure of a contraction clusters near zero and stays saturated") {
    auto rep = make_matrix_representation({"t"}, {one_by_one(0.5)}, true, naturals_model(1));
    auto net = approximate_closure(rep);
    CHECK(net.saturated);
    // powers 1/2^k for k = 0..9, then 1/2^10 collapses into 1/2^9 and the
    // tail is represented by 1/2^11 alone
    CHECK(net.elements.size() == 11);
    CHECK(net.words.size() == net.elements.size());
    CHECK(net.norm_bound == 1.0);
    // dedup keeps the net closure_eps-separated
    for (std::size_t i = 0; i < net.elements.size(); ++i)
        for (std::size_t j = i + 1; j < net.elements.size(); ++j)
            CHECK(frobenius_distance(net.elements[i], net.elements[j]) > net.dedup_eps);
}

TEST_CASE("element budget returns a partial net") {
    auto entry = *find_catalog_entry(catalog(), "rotation_contraction");
    closure_options opts;
    opts.max_elements = 8;
    auto net = approximate_closure(entry.rep, {}, opts);
    CHECK_FALSE(net.saturated);
    CHECK(net.elements.size() <= 8);
}

TEST_CASE("unbounded powers are refused or starve the budget") {
    cmat shear(2, 2);
    shear << 1.0, 1.0, 0.0, 1.0;
    auto rep = make_matrix_representation({"t"}, {shear}, true, naturals_model(1));
    // linear growth creeps under the norm cap, so the element budget fills
    // with distinct powers and the net comes back unsaturated
    auto net = approximate_closure(rep);
    CHECK_FALSE(net.saturated);
    CHECK(net.elements.size() == 512);
    auto big = make_matrix_representation({"t"}, {one_by_one(2.0)}, true, naturals_model(1));
    CHECK_THROWS_AS(approximate_closure(big), not_power_bounded);
}

TEST_CASE("minimal idempotent of the catalog closures") {
    tolerances tol;
    auto check_q = [&](const char* name, const cmat& expected) {
        auto entry = *find_catalog_entry(catalog(), name);
        auto net = approximate_closure(entry.rep, tol);
        cmat q = find_minimal_idempotent(net, tol);
        INFO(name);
        CHECK(frobenius_distance(q, expected) < 1e-12);
    };
    check_q("scaling_example", cmat::Zero(1, 1));
    check_q("cyclic_shift", cmat::Identity(3, 3));
    cmat rot_q = cmat::Zero(2, 2);
    rot_q(0, 0) = 1.0;
    check_q("rotation_contraction", rot_q);
    cmat markov_q(2, 2);
    markov_q << 0.5, 0.5, 0.5, 0.5;
    check_q("markov", markov_q);
}

TEST_CASE("competing minimal idempotents in a hand-built net are refused") {
    closure_net net;
    net.dedup_eps = 1e-3;
    net.norm_bound = 1.0;
    net.saturated = true;
    cmat p0 = cmat::Zero(2, 2), p1 = cmat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    net.elements = {p0, p1};
    net.words = {{0}, {1}};
    CHECK_THROWS_AS(find_minimal_idempotent(net, {}), multiple_idempotents);
}

TEST_CASE("power-idempotent shadow finds the spectral projector") {
    cmat t = cmat::Zero(2, 2);
    t(0, 0) = std::polar(1.0, 2 * 3.14159265358979323846 / 5);
    t(1, 1) = 0.6;
    auto rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    auto shadow = ultrafilter_shadow_idempotent(rep, 200);
    CHECK(shadow.accepted);
    CHECK(shadow.n == 70);
    CHECK(shadow.defect < 1e-13);
    cmat q_true = cmat::Zero(2, 2);
    q_true(0, 0) = 1.0;
    CHECK(frobenius_distance(shadow.candidate, q_true) < 1e-13);
}

TEST_CASE("the shadow defect at the reported n beats its neighbors") {
    // n = 70 is a near-multiple of 5 (the rotation period times a power of 2)
    cmat t = cmat::Zero(2, 2);
    t(0, 0) = std::polar(1.0, 2 * 3.14159265358979323846 / 5);
    t(1, 1) = 0.6;
    auto rep = make_matrix_representation({"t"}, {t}, true, naturals_model(1));
    auto at = [&](int n) {
        cmat tn = matrix_power(t, static_cast<std::uint64_t>(n));
        cmat t2n = matrix_power(t, static_cast<std::uint64_t>(2 * n));
        return frobenius_distance(t2n, tn);
    };
    auto shadow = ultrafilter_shadow_idempotent(rep, 200);
    // the slack absorbs rounding differences between the library's power
    // chain and the binary powering used here
    for (int n = 1; n <= 200; ++n) CHECK(shadow.defect <= at(n) + 1e-14);
}

TEST_CASE("closure records generator words in insertion order") {
    auto entry = *find_catalog_entry(catalog(), "cyclic_shift");
    auto net = approximate_closure(entry.rep);
    REQUIRE(net.words.size() == 3);
    CHECK(net.words[0].empty()); // the adjoined identity of the monoid
    CHECK(net.words[1] == std::vector<int>{0});
}
