// How pairing reshapes the fitness a haploid is credited with: on a two-locus
// landscape with a valley at 01 next to the optimum 11, pairing 01 with 11
// lifts the valley to the pair's mean.

#include <cstdio>

#include "hdea/hdea.hpp"

int main() {
    using namespace hdea;

    // genome fitness: 00 -> 0.5, 01 -> 0.1, 10 -> 0.3, 11 -> 0.9
    const NkLandscape landscape(2, 1, 0, {{1}, {0}}, {{0.5, 0.1, 0.3, 0.9}, {0.5, 0.3, 0.1, 0.9}});

    auto pairing = identity_pairing(2);
    pairing[BitGenome::from_string("01")] = BitGenome::from_string("11");
    pairing[BitGenome::from_string("11")] = BitGenome::from_string("01");

    const auto effective = effective_landscape(landscape, pairing);
    std::printf("genome  haploid  paired-with  effective\n");
    for (const auto& [g, f] : effective)
        std::printf("%6s  %7.3f  %11s  %9.3f\n", g.to_string().c_str(), evaluate_nk(landscape, g),
                    pairing.at(g).to_string().c_str(), f);
    return 0;
}
