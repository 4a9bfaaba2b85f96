#include <iostream>

#include <CLI11.hpp>

#include "twistcube/cli.hpp"

int main(int argc, char** argv) {
    twistcube::RunOptions opt;
    CLI::App app{"Cube-of-resolutions spectral sequence for plat-closed braid words over Z/2"};
    app.add_option("--strands", opt.strands, "number of braid strands (even)");
    app.add_option("--word", opt.word, "braid word, e.g. \"s2 s2 s1^-1\"");
    app.add_option("--plat", opt.plat, "plat pairing: standard | a-b,c-d | cups/caps")->capture_default_str();
    app.add_flag("--mirror", opt.mirror, "use the mirror of the word");
    app.add_flag("--aux-unknot", opt.aux_unknot, "add two unlinked auxiliary strands");
    app.add_flag("--pages", opt.pages, "compute every page up to stabilization");
    app.add_option("--max-page", opt.max_page, "last page to compute");
    app.add_option("--higher-maps", opt.higher_maps, "table of higher maps mu_{I,J} (r >= 2)");
    app.add_flag("--json", opt.json, "print the JSON report");
    app.add_option("--seed", opt.seed, "seed for --selftest");
    app.add_flag("--selftest", opt.selftest, "run randomized structural self-checks");
    app.add_flag("--timing", opt.timing, "include wall-clock timing in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    }

    auto res = twistcube::run(opt);
    std::cout << res.output;
    if (!res.error.empty()) std::cerr << res.error << '\n';
    return res.exit_code;
}
