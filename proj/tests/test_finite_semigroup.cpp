#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "jdlg/jdlg.hpp"

using namespace jdlg;

namespace {

// sorted set-of-sets form for comparing ideal families
std::vector<std::vector<int>> canon(std::vector<std::vector<int>> fam) {
    for (auto& s : fam) std::sort(s.begin(), s.end());
    std::sort(fam.begin(), fam.end());
    return fam;
}

void check_against_oracle(const finite_semigroup& s) {
    auto got = ideal_structure(s);
    auto want = fixtures::brute_force_ideals(s);
    CHECK(canon(got.minimal_right_ideals) == canon(want.minimal_right));
    CHECK(canon(got.minimal_left_ideals) == canon(want.minimal_left));
    auto kernel = got.kernel;
    std::sort(kernel.begin(), kernel.end());
    CHECK(kernel == want.kernel);
    CHECK(got.kernel_is_group == want.kernel_is_group);
}

} // namespace

TEST_CASE("a non-associative table is rejected") {
    // 0 * (0 * 1) = 1 but (0 * 0) * 1 = 0
    CHECK_THROWS_AS(make_finite_semigroup({{1, 0}, {0, 0}}, {}), non_associative);
}

TEST_CASE("left-zero on two elements has two minimal right ideals") {
    auto s = make_finite_semigroup(fixtures::left_zero(2), {"a", "b"});
    auto st = ideal_structure(s);
    CHECK(st.minimal_right_ideals.size() == 2);
    CHECK(st.minimal_left_ideals.size() == 1);
    REQUIRE(st.kernel.size() == 2);
    CHECK_FALSE(st.kernel_is_group);
    auto adm = is_jdlg_admissible(s);
    CHECK_FALSE(adm.admissible);
    CHECK(adm.reason == "multiple minimal right ideals");
    REQUIRE(adm.witness.size() == 2);
    CHECK(adm.witness[0] != adm.witness[1]);
}

TEST_CASE("right-zero is the opposite of left-zero") {
    auto lz = make_finite_semigroup(fixtures::left_zero(3), {});
    auto rz = make_finite_semigroup(fixtures::right_zero(3), {});
    auto op = opposite(lz);
    CHECK(canon(ideal_structure(op).minimal_right_ideals) ==
          canon(ideal_structure(rz).minimal_right_ideals));
    CHECK(canon(ideal_structure(lz).minimal_right_ideals) ==
          canon(ideal_structure(rz).minimal_left_ideals));
}

TEST_CASE("cyclic group of order four is admissible with full kernel") {
    auto s = make_finite_semigroup(fixtures::cyclic(4), {"e", "g", "g2", "g3"});
    auto adm = is_jdlg_admissible(s);
    CHECK(adm.admissible);
    CHECK(adm.structure.kernel.size() == 4);
    CHECK(adm.structure.kernel_identity.has_value());
    CHECK(*adm.structure.kernel_identity == 0);
    auto idem = idempotents(s);
    CHECK(idem.all == std::vector<int>{0});
    CHECK(idem.minimal == std::vector<int>{0});
}

TEST_CASE("every associative table on up to three elements matches the oracle") {
    // exhaustively enumerated; the counts are the labeled semigroup numbers
    std::size_t counts[4] = {0, 1, 8, 113};
    for (int n = 1; n <= 3; ++n) {
        auto tables = fixtures::all_associative_tables(n);
        CHECK(tables.size() == counts[n]);
        for (const auto& t : tables) check_against_oracle(make_finite_semigroup(t, {}));
    }
}

TEST_CASE("stored small tables match the oracle") {
    for (const auto& [name, t] : fixtures::stored_small_tables()) {
        INFO(name);
        check_against_oracle(make_finite_semigroup(t, {}));
    }
}

TEST_CASE("the rectangular band is all idempotents and inadmissible") {
    auto s = make_finite_semigroup(fixtures::rectangular_band_2x2(), {});
    auto idem = idempotents(s);
    CHECK(idem.all.size() == 4);
    CHECK(idem.minimal.size() == 4); // kernel is everything
    CHECK_FALSE(is_jdlg_admissible(s).admissible);
}

TEST_CASE("the null semigroup concentrates its kernel on the zero") {
    auto s = make_finite_semigroup(fixtures::null_semigroup(4), {});
    auto st = ideal_structure(s);
    CHECK(st.kernel == std::vector<int>{0});
    CHECK(st.kernel_is_group); // the trivial group
    CHECK(is_jdlg_admissible(s).admissible);
}

TEST_CASE("all fourteen groups of order at most eight are admissible") {
    auto groups = fixtures::group_tables_up_to_8();
    REQUIRE(groups.size() == 14);
    for (const auto& [name, t] : groups) {
        INFO(name);
        auto s = make_finite_semigroup(t, {});
        auto adm = is_jdlg_admissible(s);
        CHECK(adm.admissible);
        CHECK(static_cast<int>(adm.structure.kernel.size()) == s.order);
        check_against_oracle(s);
    }
}

TEST_CASE("haar mean averages a character to zero and the constant to one") {
    auto s = make_finite_semigroup(fixtures::cyclic(3), {});
    const complexd omega = std::polar(1.0, 2 * 3.14159265358979323846 / 3);
    std::vector<complexd> character{1.0, omega, omega * omega};
    CHECK(std::abs(kernel_haar_mean(s, character)) < 1e-15);
    std::vector<complexd> constant{1.0, 1.0, 1.0};
    CHECK(std::abs(kernel_haar_mean(s, constant) - 1.0) < 1e-15);
}

TEST_CASE("haar mean refuses a kernel that is not a group") {
    auto s = make_finite_semigroup(fixtures::left_zero(2), {});
    CHECK_THROWS_AS(kernel_haar_mean(s, {1.0, 2.0}), kernel_not_group);
}

TEST_CASE("semigroup json roundtrip preserves table and labels") {
    auto s = make_finite_semigroup(fixtures::monogenic_4(), {"x", "x2", "x3", "x4"});
    auto back = semigroup_from_json(semigroup_to_json(s));
    CHECK(back.order == s.order);
    CHECK(back.table == s.table);
    CHECK(back.labels == s.labels);
    CHECK_THROWS_AS(semigroup_from_json(json{{"order", 2}}), malformed_input);
    CHECK_THROWS_AS(semigroup_from_json(json{{"order", 2}, {"table", {{0, 1}}}}),
                    malformed_input);
}

TEST_CASE("table entries outside the element range are rejected") {
    CHECK_THROWS_AS(make_finite_semigroup({{0, 2}, {1, 0}}, {}), error);
}
