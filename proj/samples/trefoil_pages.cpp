// Builds the cube for the 4-plat trefoil and prints the E_1 and E_2 pages.

#include <iostream>

#include "twistcube/invariants.hpp"
#include "twistcube/specseq.hpp"
#include "twistcube/tqft.hpp"

int main() {
    using namespace twistcube;
    auto word = parse_braid_word("s2 s2 s2", 4);
    auto plat = PlatClosure::standard(4);
    auto cube = build_plat_cube(word, plat, false);
    auto cx = assemble_complex(cube);

    PageOptions opt;
    opt.r_max = 2;
    auto pages = compute_pages(cx.complex, opt);
    for (const auto& p : pages.pages) {
        std::cout << "E_" << p.r << ":";
        for (const auto& [w, d] : p.dims) std::cout << "  w=" << w << " dim " << d;
        std::cout << "  (total " << p.total << ")\n";
    }
    std::cout << "determinant " << determinant(word, plat).determinant << '\n';
}
