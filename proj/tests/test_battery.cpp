#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <set>
#include <string>

#include "jdlg/jdlg.hpp"

using namespace jdlg;

namespace {

// verdicts for one vector: every item decided and all verdicts equal
void expect_unanimous(const battery_report& r, bool member) {
    CHECK(r.agreement);
    CHECK(r.items.size() == 8); // four items, two exponents each
    for (const auto& item : r.items) {
        INFO(item.item << " p=" << item.p);
        CHECK(item.decided);
        CHECK(item.member == member);
    }
}

} // namespace

TEST_CASE("split basis vectors get unanimous verdicts matching their side") {
    for (const auto& entry : catalog()) {
        INFO(entry.name);
        auto split = decompose_idempotent(entry.rep);
        for (int c = 0; c < split.basis_r.cols(); ++c)
            expect_unanimous(
                characterization_battery(entry.rep, entry.folner, split.basis_r.col(c)), false);
        for (int c = 0; c < split.basis_aws.cols(); ++c)
            expect_unanimous(
                characterization_battery(entry.rep, entry.folner, split.basis_aws.col(c)), true);
    }
}

TEST_CASE("a mixed vector is rejected by every statistic in agreement") {
    auto entry = *find_catalog_entry(catalog(), "rotation_contraction");
    cvec xi(2);
    xi << 1.0, 1.0;
    auto r = characterization_battery(entry.rep, entry.folner, xi);
    expect_unanimous(r, false);
}

TEST_CASE("the zero vector is trivially a member everywhere") {
    auto entry = *find_catalog_entry(catalog(), "markov");
    auto r = characterization_battery(entry.rep, entry.folner, cvec::Zero(2));
    expect_unanimous(r, true);
}

TEST_CASE("frozen statistics of the one-dimensional half contraction") {
    cmat m(1, 1);
    m(0, 0) = 0.5;
    auto rep = make_matrix_representation({"t"}, {m}, true, naturals_model(1));
    cvec xi(1);
    xi << 1.0;
    auto r = characterization_battery(rep, box_sequence(naturals_model(1)), xi);
    expect_unanimous(r, true);
    for (const auto& item : r.items) {
        if (item.item == "invariant_mean" && item.p == 1) {
            // (1/4096) sum of 2^-n: the tail vanishes below double precision
            CHECK(item.value == Catch::Approx(1.0 / 4096).margin(1e-15));
            CHECK(item.depth == 4096);
            CHECK(item.threshold == 1e-3);
        }
        if (item.item == "invariant_mean" && item.p == 2)
            CHECK(item.value == Catch::Approx(1.0 / 12288).margin(1e-15));
        if (item.item == "uniform_average" && item.p == 2)
            CHECK(item.value == Catch::Approx(1.0 / 12288).margin(1e-15));
    }
}

TEST_CASE("items cover the four computable statistics at both exponents") {
    auto entry = *find_catalog_entry(catalog(), "scaling_example");
    cvec xi(1);
    xi << 1.0;
    auto r = characterization_battery(entry.rep, entry.folner, xi);
    std::multiset<std::pair<std::string, int>> seen;
    for (const auto& item : r.items) seen.insert({item.item, item.p});
    for (const char* name : {"invariant_mean", "folner_average", "density_limit",
                             "uniform_average"}) {
        CHECK(seen.count({name, 1}) == 1);
        CHECK(seen.count({name, 2}) == 1);
    }
}

TEST_CASE("out-of-scope characterizations are named with reasons") {
    auto entry = *find_catalog_entry(catalog(), "scaling_example");
    cvec xi(1);
    xi << 1.0;
    auto r = characterization_battery(entry.rep, entry.folner, xi);
    REQUIRE(r.not_evaluated.size() == 4);
    for (const char* name :
         {"neighborhood_mean", "lower_banach_density", "lower_folner_density",
          "along_density_one_set"}) {
        bool found = false;
        for (const auto& line : r.not_evaluated)
            if (line.rfind(name, 0) == 0) found = true;
        INFO(name);
        CHECK(found);
    }
}

TEST_CASE("table windows decide through the constant-window fallback") {
    auto s = std::make_shared<finite_semigroup>(
        make_finite_semigroup({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {"e", "g", "g2"}));
    cmat t = cmat::Zero(3, 3);
    t(1, 0) = t(2, 1) = t(0, 2) = 1.0;
    auto rep = make_matrix_representation(
        {"e", "g", "g2"}, {cmat::Identity(3, 3), t, t * t}, false, table_model(s, "z3"));
    auto windows = table_sequence(s, "z3");
    cvec xi(3);
    xi << 1.0, 0.0, 0.0;
    auto r = characterization_battery(rep, windows, xi);
    expect_unanimous(r, false);
    for (const auto& item : r.items) CHECK(item.depth <= 4);
}

TEST_CASE("report serialization is deterministic and roundtrips its numbers") {
    auto entry = *find_catalog_entry(catalog(), "rotation_contraction");
    cvec xi(2);
    xi << 0.0, 1.0;
    auto r1 = characterization_battery(entry.rep, entry.folner, xi);
    auto r2 = characterization_battery(entry.rep, entry.folner, xi);
    CHECK(battery_report_to_json(r1).dump(2) == battery_report_to_json(r2).dump(2));
    const std::string csv1 = battery_report_to_csv(r1);
    CHECK(csv1 == battery_report_to_csv(r2));
    CHECK(csv1.rfind("item,p,decided,member,value,threshold,depth,note", 0) == 0);
    // %.17g fields parse back to the exact double
    json j = battery_report_to_json(r1);
    for (std::size_t i = 0; i < r1.items.size(); ++i)
        CHECK(j["items"][i]["value"].get<double>() == r1.items[i].value);
}

TEST_CASE("battery argument guards") {
    auto entry = *find_catalog_entry(catalog(), "markov");
    CHECK_THROWS_AS(characterization_battery(entry.rep, entry.folner, cvec::Zero(3)),
                    dimension_mismatch);
}

TEST_CASE("averaged orbit norm decides the p=1 uniform bound for decaying vectors") {
    // the averaged orbit norm bounds every averaged coefficient, which is
    // how a decaying vector gets a decided verdict at p = 1 even though
    // the exact supremum over functionals is out of reach
    auto entry = *find_catalog_entry(catalog(), "rotation_contraction");
    cvec dead(2);
    dead << 0.0, 1.0;
    auto r = characterization_battery(entry.rep, entry.folner, dead);
    for (const auto& item : r.items)
        if (item.item == "uniform_average" && item.p == 1) {
            CHECK(item.decided);
            CHECK(item.member);
            CHECK(item.value < 1e-3);
            CHECK(item.value > 0.0);
        }
}
