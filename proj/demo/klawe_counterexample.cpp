// The two-sided free-monoid quotient where Folner averaging and the
// reversible/decaying splitting disagree: one translate of the observable
// vanishes identically, yet every window average of the translated orbit
// equals one exactly.

#include <cstdio>

#include "jdlg/jdlg.hpp"

int main() {
    using namespace jdlg;
    auto report = klawe_counterexample(6);

    std::printf("observable f(m, n) = [m even and n >= 2]\n");
    std::printf("translate by (1,1) vanishes at all %lld checked points: %s\n",
                report.vanishing_checked, report.translate_vanishes ? "yes" : "no");

    std::printf("averages of the (0,1)-translated orbit over growing windows:\n");
    for (std::size_t i = 0; i < report.average_numerators.size(); ++i)
        std::printf("  N=%zu: %lld/%lld\n", i + 1, report.average_numerators[i],
                    report.average_denominators[i]);
    std::printf("every average is exactly one: %s\n",
                report.averages_exactly_one ? "yes" : "no");

    std::printf("averages at other base points:\n");
    for (const auto& [label, value] : report.base_points)
        std::printf("  %s: %.6f\n", label.c_str(), value);

    std::printf("orbit closure of the translates under the semigroup:");
    for (const auto& t : report.orbit.semigroup_orbit) std::printf(" %s", t.c_str());
    std::printf("\nwith the identity adjoined:");
    for (const auto& t : report.orbit.monoid_orbit) std::printf(" %s", t.c_str());
    std::printf("\nmonoid orbit is {f, 1_A - f, 0, 1}: %s\n",
                report.orbit.monoid_orbit_is_reference_four ? "yes" : "no");

    // a vanishing translate forces the mean over any invariant mean to be
    // zero, while the Folner averages sit at one; no splitting of the orbit
    // into reversible plus decaying parts can produce both
    std::printf("conclusion: the averaged orbit keeps the value 1 while a translate is 0\n");
    return 0;
}
