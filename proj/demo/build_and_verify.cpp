// Build a few family members, verify them and print their fusion rules for a small case.

#include <iostream>

#include "modcat/modcat.hpp"

using namespace modcat;

int main() {
    for (const FamilySpec spec : {FamilySpec{Family::U1, 4}, FamilySpec{Family::A1, 2}, FamilySpec{Family::SPINM2, 3},
                                  FamilySpec{Family::ORBIFOLD_U1, 3}}) {
        ConstructionLog log;
        const ModularData md = build_family(spec, &log);
        const VerificationReport r = verify(md);
        std::cout << md.name() << ": " << md.size() << " sectors, mu = " << global_dimension(md)
                  << ", c mod 8 = " << to_string(central_charge_mod8(md)) << ", " << (r.passed() ? "verified" : "FAILED")
                  << "\n";
        for (const auto& line : log.lines) std::cout << "  " << line << "\n";
    }

    // Ising fusion from the Verlinde formula
    const ModularData ising = build_a1_level_k(2);
    const FusionRing ring = verlinde_fusion(ising);
    const auto names = ising.label_names();
    for (std::size_t i = 0; i < ring.rank(); ++i)
        for (std::size_t j = i; j < ring.rank(); ++j) {
            std::cout << names[i] << " x " << names[j] << " =";
            for (std::size_t k = 0; k < ring.rank(); ++k)
                if (ring(i, j, k) != 0) std::cout << " " << names[k];
            std::cout << "\n";
        }
    return 0;
}
