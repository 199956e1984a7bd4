// Splits a rotation-plus-contraction pair by all three routes and prints
// the agreement between them, then asks the battery about one mixed
// vector.

#include <cstdio>

#include "jdlg/jdlg.hpp"

int main() {
    using namespace jdlg;
    const auto entry = *find_catalog_entry(catalog(), "rotation_contraction");

    auto spectral = decompose_spectral(entry.rep);
    auto idempotent = decompose_idempotent(entry.rep);
    auto gram = decompose_by_gram(entry.rep, entry.folner);

    std::printf("rotation by a quadratic irrational plus a contraction\n");
    for (const auto* s : {&spectral, &idempotent, &gram})
        std::printf("  %-10s reversible dim %d, decaying dim %d, idempotency %.2e\n",
                    s->method.c_str(), static_cast<int>(s->basis_r.cols()),
                    static_cast<int>(s->basis_aws.cols()), s->residuals.idempotency);

    auto rec = reconcile(spectral, idempotent);
    std::printf("  spectral vs idempotent projector distance %.2e\n", rec.projector_distance);
    rec = reconcile(idempotent, gram);
    std::printf("  idempotent vs gram projector distance %.2e\n", rec.projector_distance);

    // e0 rotates forever, e1 dies; their sum must land in neither part
    cvec xi = cvec::Zero(2);
    xi(0) = 1.0;
    xi(1) = 1.0;
    auto battery = characterization_battery(entry.rep, entry.folner, xi);
    std::printf("battery on e0 + e1:\n");
    for (const auto& item : battery.items)
        std::printf("  %-16s p=%d %s (value %.3e)\n", item.item.c_str(), item.p,
                    item.decided ? (item.member ? "decaying" : "not decaying") : "undecided",
                    item.value);
    std::printf("  all statistics agree: %s\n", battery.agreement ? "yes" : "no");
    return 0;
}
