#pragma once

// Run orchestration behind the command-line tool: parse, build the cube,
// assemble the complex, optionally add higher maps, compute pages and bounds,
// and render a report. Exit codes: 0 success, 1 input error, 2 internal
// consistency failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistcube/cube.hpp"
#include "twistcube/errors.hpp"
#include "twistcube/higher_maps.hpp"
#include "twistcube/invariants.hpp"
#include "twistcube/specseq.hpp"
#include "twistcube/tangle.hpp"
#include "twistcube/tqft.hpp"

namespace twistcube {

inline constexpr const char* kReportFormat = "twistcube.report";
inline constexpr int kReportVersion = 1;

struct RunOptions {
    int strands = 2;
    std::string word;
    std::string plat = "standard";
    bool mirror = false;
    bool aux_unknot = false;
    bool pages = false;
    std::optional<int> max_page;
    std::optional<std::string> higher_maps;
    bool json = false;
    std::uint64_t seed = 1;
    bool selftest = false;
    bool timing = false;
};

struct RunResult {
    int exit_code = 0;
    std::string output;  // report for stdout
    std::string error;   // diagnostics for stderr
    nlohmann::ordered_json report;
};

namespace detail {

inline nlohmann::ordered_json dims_json(const std::map<int, std::size_t>& dims) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [w, d] : dims) arr.push_back({{"weight", w}, {"dim", d}});
    return arr;
}

inline std::string witness_dump(const ChainComplexF2& cx, const ResolutionCube& cube, const DSquaredCheck& check) {
    std::ostringstream os;
    auto name = [&](std::size_t g) {
        if (g >= cx.total_dim()) return "generator " + std::to_string(g);
        auto [I, x] = locate_generator(cx, g);
        VertexSpace vs(cube.vertex(I).labels);
        return "generator " + std::to_string(g) + " (vertex " + vertex_string(I, cube.n()) + ", " + vs.basis_name(x) + ")";
    };
    os << "witness: D(D(" << name(*check.witness) << ")) =";
    for (auto g : check.image) os << "\n  + " << name(g);
    return os.str();
}

inline std::string render_text(const nlohmann::ordered_json& r) {
    std::ostringstream os;
    os << "word: " << r["input"]["word"].get<std::string>() << "  strands: " << r["input"]["strands"]
       << "  plat: " << r["input"]["plat"].get<std::string>() << (r["input"]["mirror"].get<bool>() ? "  (mirrored)" : "")
       << (r["input"]["aux_unknot"].get<bool>() ? "  (+aux unknot)" : "") << '\n';
    os << "twists: " << r["cube"]["twists"] << "  n_minus: " << r["cube"]["n_minus"]
       << "  complex dimension: " << r["complex"]["dimension"] << '\n';
    for (const auto& p : r["pages"]) {
        os << "E_" << p["r"] << " total " << p["total"] << " :";
        for (const auto& wd : p["by_weight"]) os << ' ' << wd["weight"] << ':' << wd["dim"];
        os << '\n';
    }
    os << "E_inf total " << r["infinity"]["total"] << '\n';
    if (!r["stabilization"].is_null()) os << "stabilizes at E_" << r["stabilization"] << '\n';
    os << "bounds:";
    for (const auto& c : r["bounds"]["chain"]) os << " E_" << c["page"] << '=' << c["total"];
    os << '\n';
    const auto& d = r["determinant"];
    os << "determinant: " << d["value"] << (d["split"].get<bool>() ? " (split diagram)" : "")
       << "  expected E_2 if collapsing: " << d["expected_e2"] << "  E_2: " << d["e2_total"]
       << (d["e2_equals_expected"].get<bool>() ? "  (equal)" : "  (differs)") << '\n';
    return os.str();
}

inline BraidWord random_braid_word(std::mt19937_64& rng, int strands, int length) {
    BraidWord b;
    b.strands = strands;
    std::uniform_int_distribution<int> idx(1, strands - 1);
    std::bernoulli_distribution pos(0.5);
    for (int i = 0; i < length; ++i) b.letters.push_back({idx(rng), pos(rng) ? 1 : -1});
    return b;
}

/// Randomized structural checks: circle changes, face commutativity, D*D = 0,
/// mirror invariance of E_2, auxiliary doubling.
inline RunResult selftest(std::uint64_t seed, bool json) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> half(1, 4);
    std::uniform_int_distribution<int> len(0, 7);
    RunResult res;
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();
    bool ok = true;
    for (int t = 0; t < 25; ++t) {
        const int strands = 2 * half(rng);
        auto b = random_braid_word(rng, strands, strands == 2 ? 0 : len(rng));
        const auto plat = PlatClosure::standard(strands);
        nlohmann::ordered_json c = {{"strands", strands}, {"word", to_string(b)}};
        std::string failure;
        try {
            auto cube = build_plat_cube(b, plat, false);
            for (Vertex I = 0; I < cube.vertex_count(); ++I)
                for (int i = 0; i < cube.n(); ++i)
                    if (!((I >> i) & 1U)) adjacent_cobordism(cube, I, I | (Vertex{1} << i));
            auto cx = assemble_complex(cube);  // checks faces and D*D
            PageOptions opt;
            opt.r_max = 2;
            opt.verify_d_squared = false;
            opt.keep_differentials = false;
            auto e2 = compute_pages(cx.complex, opt).page(2).total;
            auto e2m = e2_total(mirror(b), plat, false);
            auto e2a = e2_total(b, plat, true);
            c["e2_total"] = e2;
            if (e2m != e2) failure = "mirror changes E_2 total";
            if (e2a != 2 * e2) failure = "auxiliary unknot does not double E_2";
        } catch (const std::exception& e) {
            failure = e.what();
        }
        c["pass"] = failure.empty();
        if (!failure.empty()) {
            c["failure"] = failure;
            ok = false;
        }
        cases.push_back(std::move(c));
    }
    res.report = {{"format", "twistcube.selftest"}, {"version", kReportVersion}, {"seed", seed}, {"pass", ok}, {"cases", cases}};
    if (json) {
        res.output = res.report.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (const auto& c : res.report["cases"])
            os << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["strands"] << " strands: '" << c["word"].get<std::string>()
               << "'" << (c.contains("failure") ? "  " + c["failure"].get<std::string>() : "") << '\n';
        os << (ok ? "selftest passed" : "selftest FAILED") << " (seed " << seed << ")\n";
        res.output = os.str();
    }
    res.exit_code = ok ? 0 : 2;
    return res;
}

}  // namespace detail

inline RunResult run(const RunOptions& opt) {
    if (opt.selftest) return detail::selftest(opt.seed, opt.json);
    RunResult res;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<ResolutionCube> cube;
    std::optional<ChainComplexF2> cx;
    try {
        auto word = parse_braid_word(opt.word, opt.strands);
        auto plat = parse_plat(opt.plat, opt.strands);
        if (opt.max_page && *opt.max_page < 1) throw InputError("--max-page must be at least 1");
        if (opt.mirror) word = mirror(word);
        cube.emplace(build_plat_cube(word, plat, opt.aux_unknot));
        cx.emplace(assemble_complex(*cube));
        const bool higher = opt.higher_maps.has_value();
        if (higher) {
            std::ifstream in(*opt.higher_maps);
            if (!in) throw InputError("cannot open higher-map file '" + *opt.higher_maps + "'");
            auto table = parse_higher_map_table(in, *cx);
            cx.emplace(load_higher_maps(*cx, table));
        }
        PageOptions popt;
        popt.keep_differentials = false;
        popt.verify_d_squared = false;  // checked by assemble_complex and load_higher_maps
        if (opt.pages)
            popt.r_max = opt.max_page;
        else
            popt.r_max = opt.max_page.value_or(2);
        auto sp = compute_pages(cx->complex, popt);
        auto bounds = rank_bounds(sp);
        auto det = determinant(word, plat);

        nlohmann::ordered_json r;
        r["format"] = kReportFormat;
        r["version"] = kReportVersion;
        r["input"] = {{"strands", opt.strands},
                      {"word", to_string(parse_braid_word(opt.word, opt.strands))},
                      {"plat", to_string(plat)},
                      {"mirror", opt.mirror},
                      {"aux_unknot", opt.aux_unknot},
                      {"pages", opt.pages},
                      {"max_page", opt.max_page ? nlohmann::ordered_json(*opt.max_page) : nlohmann::ordered_json(nullptr)},
                      {"higher_maps", higher ? nlohmann::ordered_json(*opt.higher_maps) : nlohmann::ordered_json(nullptr)}};
        auto vertices = nlohmann::ordered_json::array();
        for (Vertex I = 0; I < cube->vertex_count(); ++I)
            vertices.push_back({{"I", vertex_string(I, cube->n())}, {"circles", cube->circles(I)}, {"weight", cube->weight(I)}});
        r["cube"] = {{"twists", cube->n()},
                     {"strands_total", cube->strands()},
                     {"n_minus", cube->twists().n_minus()},
                     {"vertices", vertices}};
        auto comps = nlohmann::ordered_json::array();
        for (const auto& [k, m] : cx->complex.components()) comps.push_back(k);
        r["complex"] = {{"dimension", cx->total_dim()}, {"components", comps}};
        auto pages = nlohmann::ordered_json::array();
        for (const auto& p : sp.pages) {
            auto ranks = nlohmann::ordered_json::array();
            for (const auto& [w, k] : p.differential_rank) ranks.push_back({{"weight", w}, {"rank", k}});
            pages.push_back({{"r", p.r}, {"total", p.total}, {"by_weight", detail::dims_json(p.dims)}, {"differential_ranks", ranks}});
        }
        r["pages"] = pages;
        r["infinity"] = {{"total", sp.infinity.total}, {"by_weight", detail::dims_json(sp.infinity.dims)}};
        r["stabilization"] = sp.stabilization ? nlohmann::ordered_json(*sp.stabilization) : nlohmann::ordered_json(nullptr);
        auto chain = nlohmann::ordered_json::array();
        for (const auto& [pg, t] : bounds.chain) chain.push_back({{"page", pg}, {"total", t}});
        r["bounds"] = {{"chain", chain},
                       {"infinity_total", bounds.infinity_total},
                       {"e1_bound", bounds.e1_bound},
                       {"monotone", bounds.monotone},
                       {"higher_maps_supplied", higher}};
        const std::size_t e2 = sp.pages.size() >= 2 ? sp.page(2).total : sp.infinity.total;
        const long long expected = 2 * det.determinant * (opt.aux_unknot ? 2 : 1);
        r["determinant"] = {{"value", det.determinant},
                            {"split", det.split},
                            {"link_components", det.link_components},
                            {"expected_e2", expected},
                            {"e2_total", e2},
                            {"e2_equals_expected", static_cast<long long>(e2) == expected}};
        if (opt.timing)
            r["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        res.report = r;
        res.output = opt.json ? r.dump(2) + "\n" : detail::render_text(r);
        res.exit_code = 0;
    } catch (const DSquaredError& e) {
        res.exit_code = 2;
        res.error = std::string("internal consistency failure: ") + e.what();
        if (cx && cube) res.error += "\n" + detail::witness_dump(*cx, *cube, e.check());
    } catch (const InternalError& e) {
        res.exit_code = 2;
        res.error = std::string("internal consistency failure: ") + e.what();
    } catch (const InputError& e) {
        res.exit_code = 1;
        res.error = std::string("input error: ") + e.what();
    }
    return res;
}

}  // namespace twistcube
