#include "dynmand/cli.hpp"

#include "dynmand/boettcher.hpp"
#include "dynmand/error.hpp"
#include "dynmand/heights.hpp"
#include "dynmand/mandelbrot.hpp"
#include "dynmand/parse.hpp"
#include "dynmand/places.hpp"
#include "dynmand/poly.hpp"
#include "dynmand/preperiodic.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dynmand {

namespace {

using ojson = nlohmann::ordered_json;

ojson js_place(const Place& v) {
    if (v.is_arch()) return ojson{{"kind", "arch"}};
    return ojson{{"kind", "prime"}, {"p", v.p}};
}

ojson js_green(const GreenValue& g) {
    return ojson{{"value", g.value},
                 {"error_bound", g.error_bound},
                 {"escaped", g.escaped},
                 {"iterations_used", g.iterations_used},
                 {"inconclusive", g.inconclusive}};
}

ojson js_solution(const PrepSolution& s) {
    return ojson{{"n", s.n},
                 {"k", s.k},
                 {"re", s.lambda.real()},
                 {"im", s.lambda.imag()},
                 {"residual", s.residual},
                 {"rel_residual", s.rel_residual},
                 {"error_radius", s.error_radius},
                 {"multiplicity_hint", s.multiplicity_hint},
                 {"refined_ok", s.refined_ok}};
}

/* flags shared by every subcommand */
struct Common {
    std::string family;
    std::string c;
    std::string config; /* consumed by the pre-parse expansion */
    std::string output;
    double tol = 1e-9;
    long iter_cap = 10000;
    long degree_cap = 1000000;
    int threads = 1;

    ArchOptions arch() const {
        ArchOptions a;
        a.tol = tol;
        a.iter_cap = iter_cap;
        return a;
    }
};

void add_common(CLI::App* sub, Common& c, bool needs_c) {
    sub->add_option("--family", c.family, "family over Q[l], e.g. \"x^2+l\"")->required();
    if (needs_c) sub->add_option("--c", c.c, "marked point, polynomial in l")->required();
    sub->add_option("--tol", c.tol, "archimedean tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--iter-cap", c.iter_cap, "archimedean iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--degree-cap", c.degree_cap, "symbolic iterate degree cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->envname("DYNMAND_THREADS")
        ->capture_default_str();
    sub->add_option("--config", c.config, "JSON file whose keys mirror these flags")
        ->type_name("PATH");
    sub->add_option("--output", c.output, "also write the JSON report to this path")
        ->type_name("PATH");
}

void emit(const ojson& doc, const Common& common, std::ostream& out) {
    std::string text = doc.dump(2);
    out << text << "\n";
    if (!common.output.empty()) {
        std::ofstream f(common.output);
        if (!f) throw DynError(DynError::Kind::Domain, "cannot open " + common.output);
        f << text << "\n";
    }
}

std::vector<double> parse_radii(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            double v = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw DynError(DynError::Kind::Parse, "bad radius value: " + item);
        }
    }
    if (out.empty()) throw DynError(DynError::Kind::Parse, "empty radius list");
    return out;
}

/* --config PATH is resolved before CLI11 sees the arguments: the file's
 * key/value pairs become flags placed right after the subcommand, so
 * explicit flags given later win under the take-last policy. */
std::vector<std::string> expand_config(std::vector<std::string> args) {
    size_t idx = std::string::npos;
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw DynError(DynError::Kind::Parse, "--config needs a path");
            idx = i;
            path = args[i + 1];
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            idx = i;
            path = args[i].substr(9);
            break;
        }
    }
    if (idx == std::string::npos) return args;
    if (args[idx] == "--config")
        args.erase(args.begin() + static_cast<long>(idx),
                   args.begin() + static_cast<long>(idx) + 2);
    else
        args.erase(args.begin() + static_cast<long>(idx));
    for (const std::string& a : args)
        if (a == "--config" || a.rfind("--config=", 0) == 0)
            throw DynError(DynError::Kind::Parse, "multiple --config flags");

    std::ifstream in(path);
    if (!in) throw DynError(DynError::Kind::Domain, "config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DynError(DynError::Kind::Parse, std::string("config: ") + e.what());
    }
    if (!j.is_object())
        throw DynError(DynError::Kind::Parse, "config: top level must be an object");

    std::vector<std::string> toks;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string flag = "--" + it.key();
        const nlohmann::json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) toks.push_back(flag);
            continue;
        }
        std::string val;
        if (v.is_string()) {
            val = v.get<std::string>();
        } else if (v.is_array()) {
            for (size_t i = 0; i < v.size(); ++i) {
                if (i) val += ",";
                val += v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
            }
        } else {
            val = v.dump();
        }
        toks.push_back(flag);
        toks.push_back(val);
    }

    size_t sub_idx = std::string::npos;
    for (size_t i = 0; i < args.size(); ++i)
        if (!args[i].empty() && args[i][0] != '-') {
            sub_idx = i;
            break;
        }
    if (sub_idx == std::string::npos)
        throw DynError(DynError::Kind::Parse, "config given but no subcommand named");
    args.insert(args.begin() + static_cast<long>(sub_idx) + 1, toks.begin(), toks.end());
    return args;
}

int run_impl(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args = expand_config(raw_args);

    CLI::App app{"dynmand: canonical heights, Green functions, and parameter Mandelbrot "
                 "sets of one-parameter polynomial families"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    Common c_height, c_render, c_capacity, c_prep, c_equidist, c_adelic, c_verify, c_good;

    auto* sc_height = app.add_subcommand("height", "adelic canonical height of c(lambda)");
    add_common(sc_height, c_height, true);
    std::string height_lambda, height_x;
    sc_height->add_option("--lambda", height_lambda, "rational parameter value")->required();
    sc_height->add_option("--x", height_x, "start point override (default c(lambda))");

    auto* sc_render = app.add_subcommand("render", "parameter-plane Green function grid");
    add_common(sc_render, c_render, true);
    double xmin = -2.25, xmax = 0.75, ymin = -1.5, ymax = 1.5, g_cap = 0.0;
    int nx = 200, ny = 200;
    std::string pgm_path, csv_path;
    sc_render->add_option("--xmin", xmin)->capture_default_str();
    sc_render->add_option("--xmax", xmax)->capture_default_str();
    sc_render->add_option("--ymin", ymin)->capture_default_str();
    sc_render->add_option("--ymax", ymax)->capture_default_str();
    sc_render->add_option("--nx", nx)->check(CLI::PositiveNumber)->capture_default_str();
    sc_render->add_option("--ny", ny)->check(CLI::PositiveNumber)->capture_default_str();
    sc_render->add_option("--g-cap", g_cap, "pixel saturation level (0 = grid maximum)")
        ->capture_default_str();
    sc_render->add_option("--pgm", pgm_path, "write 8-bit PGM here")->type_name("PATH");
    sc_render->add_option("--csv", csv_path, "write per-cell CSV here")->type_name("PATH");

    auto* sc_capacity = app.add_subcommand("capacity", "capacity of M_c by circle means");
    add_common(sc_capacity, c_capacity, true);
    std::string radii_text = "1e3,1e4,1e5";
    int samples = 64;
    double outer = 0.0;
    sc_capacity->add_option("--radii", radii_text, "comma-separated sample radii")
        ->capture_default_str();
    sc_capacity->add_option("--samples", samples, "points per circle")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc_capacity->add_option("--outer", outer, "certified outer threshold (0 = probe)")
        ->capture_default_str();

    auto* sc_prep = app.add_subcommand("prep", "certified preperiodic parameters");
    add_common(sc_prep, c_prep, true);
    int prep_max_n = 2;
    std::string prep_csv;
    sc_prep->add_option("--max-n", prep_max_n, "largest iterate offset n")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc_prep->add_option("--csv", prep_csv, "write n,k,re,im,residual rows here")
        ->type_name("PATH");

    auto* sc_equidist = app.add_subcommand("equidist", "log-potential equidistribution check");
    add_common(sc_equidist, c_equidist, true);
    int eq_max_n = 5;
    double w_re = 0.0, w_im = 0.0;
    sc_equidist->add_option("--max-n", eq_max_n)->check(CLI::PositiveNumber)->capture_default_str();
    sc_equidist->add_option("--w-re", w_re, "exterior point, real part")->required();
    sc_equidist->add_option("--w-im", w_im, "exterior point, imaginary part")
        ->capture_default_str();

    auto* sc_adelic = app.add_subcommand("adelic", "adelic height of a rational parameter");
    add_common(sc_adelic, c_adelic, true);
    std::string adelic_lambda;
    sc_adelic->add_option("--lambda", adelic_lambda, "rational parameter value")->required();

    auto* sc_verify = app.add_subcommand("verify-theorem",
                                         "shared-preperiodicity dichotomy experiment");
    add_common(sc_verify, c_verify, false);
    std::string a_text, b_text;
    int off_k = 1, off_l = 1, verify_max_n = 3;
    double pairing_tol = 1e-6;
    sc_verify->add_option("--a", a_text, "first marked point")->required();
    sc_verify->add_option("--b", b_text, "second marked point")->required();
    sc_verify->add_option("--k", off_k, "iterate offset for a")->capture_default_str();
    sc_verify->add_option("--l", off_l, "iterate offset for b")->capture_default_str();
    sc_verify->add_option("--max-n", verify_max_n)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc_verify->add_option("--pairing-tol", pairing_tol)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* sc_good = app.add_subcommand("good-places", "finite places needing inspection");
    add_common(sc_good, c_good, true);

    std::vector<std::string> full;
    full.push_back("dynmand");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        ojson j;
        j["error"] = {{"kind", "usage"}, {"message", e.what()}};
        out << j.dump(2) << "\n";
        return 2;
    }

    if (*sc_height) {
        const Common& cm = c_height;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        Rat lambda = parse_rational(height_lambda);
        Rat x = height_x.empty() ? c.eval<Rat>(lambda) : parse_rational(height_x);
        GlobalHeight G = global_height(F, lambda, x, cm.arch());

        ojson doc;
        doc["command"] = "height";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c},    {"lambda", rat_str(lambda)},
                         {"x", rat_str(x)},     {"tol", cm.tol}};
        ojson finite = ojson::array();
        for (const auto& [p, coeff] : G.finite) {
            finite.push_back({{"place", js_place(Place::prime(p))},
                              {"coeff_log_p", rat_str(coeff)},
                              {"value", to_double(coeff) * std::log(static_cast<double>(p))}});
        }
        doc["result"] = {{"fiber", F.fiber(lambda).str("x")},
                         {"global", {{"value", G.value},
                                     {"error_bound", G.error_bound},
                                     {"inconclusive", G.inconclusive}}},
                         {"arch", js_green(G.arch)},
                         {"finite", finite}};
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_render) {
        const Common& cm = c_render;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        ParamGrid grid =
            render_grid(F, c, xmin, xmax, ymin, ymax, nx, ny, cm.arch(), cm.threads);
        double cap = (g_cap > 0.0) ? g_cap : std::max(grid_max_green(grid), 1e-12);
        if (!pgm_path.empty()) write_pgm(grid, pgm_path, cap);
        if (!csv_path.empty()) write_csv(grid, csv_path);

        long outside = 0, inside = 0, inconclusive = 0;
        for (int f : grid.flags) {
            if (f == kCellOutside) ++outside;
            else if (f == kCellInside) ++inside;
            else ++inconclusive;
        }
        ojson doc;
        doc["command"] = "render";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c}, {"xmin", xmin}, {"xmax", xmax},
                         {"ymin", ymin},        {"ymax", ymax}, {"nx", nx}, {"ny", ny},
                         {"tol", cm.tol},       {"threads", cm.threads}};
        doc["result"] = {{"g_cap", cap},
                         {"max_green", grid_max_green(grid)},
                         {"cells_outside", outside},
                         {"cells_inside", inside},
                         {"cells_inconclusive", inconclusive}};
        if (!pgm_path.empty()) doc["result"]["pgm"] = pgm_path;
        if (!csv_path.empty()) doc["result"]["csv"] = csv_path;
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_capacity) {
        const Common& cm = c_capacity;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        CapacityFit fit = capacity_estimate(F, c, parse_radii(radii_text), samples, cm.arch(),
                                            outer, cm.threads);
        ojson doc;
        doc["command"] = "capacity";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c},       {"radii", radii_text},
                         {"samples", samples},  {"outer", outer},  {"tol", cm.tol}};
        doc["result"] = {{"gamma_est", fit.gamma_est},
                         {"V_est", fit.V_est},
                         {"closed_form_gamma", fit.closed_form_gamma},
                         {"residual", fit.residual},
                         {"sample_radii", fit.sample_radii},
                         {"V_per_radius", fit.V_per_radius},
                         {"pass", fit.pass}};
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_prep) {
        const Common& cm = c_prep;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        PrepOptions popt;
        popt.degree_cap = cm.degree_cap;
        popt.threads = cm.threads;
        std::vector<PrepSolution> sols = prep_roots(F, c, prep_max_n, popt);
        ClusterReport cluster = boundary_clustering(F, c, sols, cm.arch());

        if (!prep_csv.empty()) {
            std::ofstream f(prep_csv);
            if (!f) throw DynError(DynError::Kind::Domain, "cannot open " + prep_csv);
            f << "n,k,re,im,residual\n";
            char buf[160];
            for (const PrepSolution& s : sols) {
                std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", s.n, s.k,
                              s.lambda.real(), s.lambda.imag(), s.residual);
                f << buf;
            }
        }

        ojson doc;
        doc["command"] = "prep";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c}, {"max_n", prep_max_n},
                         {"tol", cm.tol},       {"threads", cm.threads}};
        ojson list = ojson::array();
        for (const PrepSolution& s : sols) list.push_back(js_solution(s));
        doc["result"] = {{"count", static_cast<long>(sols.size())},
                         {"solutions", list},
                         {"max_G", cluster.max_G}};
        if (!prep_csv.empty()) doc["result"]["csv"] = prep_csv;
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_equidist) {
        const Common& cm = c_equidist;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        PrepOptions popt;
        popt.degree_cap = cm.degree_cap;
        popt.threads = cm.threads;
        EquidistReport rep =
            equidist_potential(F, c, eq_max_n, cplx(w_re, w_im), cm.arch(), popt);
        ojson doc;
        doc["command"] = "equidist";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c},  {"max_n", eq_max_n},
                         {"w", {{"re", w_re}, {"im", w_im}}}, {"tol", cm.tol}};
        doc["result"] = {{"ns", rep.ns},
                         {"potential_per_n", rep.potential_per_n},
                         {"abs_errors", rep.abs_errors},
                         {"green_at_w", rep.green_at_w},
                         {"log_capacity", rep.log_capacity},
                         {"prediction", rep.prediction},
                         {"monotone_decreasing", rep.monotone_decreasing}};
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_adelic) {
        const Common& cm = c_adelic;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        AdelicHeightReport rep = adelic_height(F, c, parse_rational(adelic_lambda), cm.arch());
        ojson doc;
        doc["command"] = "adelic";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c},
                         {"lambda", rat_str(rep.lambda)}, {"tol", cm.tol}};
        ojson finite = ojson::array();
        for (const auto& [p, coeff] : rep.finite_contribs) {
            finite.push_back({{"place", js_place(Place::prime(p))},
                              {"coeff_log_p", rat_str(coeff)},
                              {"value", to_double(coeff) * std::log(static_cast<double>(p))}});
        }
        doc["result"] = {{"finite", finite},
                         {"arch", js_green(rep.arch_contrib)},
                         {"total", rep.total},
                         {"crosscheck", rep.crosscheck},
                         {"crosscheck_error", rep.crosscheck_error},
                         {"pass", rep.pass},
                         {"inconclusive", rep.inconclusive}};
        emit(doc, cm, out);
        return 0;
    }

    if (*sc_verify) {
        const Common& cm = c_verify;
        ParamFamily F = parse_family(cm.family);
        LamPoly a = parse_lampoly(a_text);
        LamPoly b = parse_lampoly(b_text);
        PrepOptions popt;
        popt.degree_cap = cm.degree_cap;
        popt.threads = cm.threads;
        SharedPrepReport rep = shared_prep_experiment(F, a, b, off_k, off_l, verify_max_n,
                                                      pairing_tol, cm.arch(), popt);
        ojson doc;
        doc["command"] = "verify-theorem";
        doc["inputs"] = {{"family", cm.family}, {"a", a_text},        {"b", b_text},
                         {"k", off_k},          {"l", off_l},         {"max_n", verify_max_n},
                         {"pairing_tol", pairing_tol}};
        ojson shared = ojson::array();
        for (const PrepSolution& s : rep.shared) shared.push_back(js_solution(s));
        doc["result"] = {{"hypothesis",
                          {{"same_deg_lead", rep.hyp_same_deg_lead},
                           {"degree_bound", rep.hyp_degree_bound},
                           {"detail", rep.hyp_detail}}},
                         {"identity", rep.identity},
                         {"levels", rep.levels},
                         {"count_a", rep.count_a},
                         {"count_b", rep.count_b},
                         {"intersection_counts", rep.intersection_counts},
                         {"sets_equal", rep.sets_equal},
                         {"shared", shared},
                         {"verdict", rep.verdict}};
        emit(doc, cm, out);
        /* failed hypotheses are data, not crashes, but sweep scripts need
         * the distinguishing exit code */
        return rep.verdict == "hypothesis_failed" ? 2 : 0;
    }

    if (*sc_good) {
        const Common& cm = c_good;
        ParamFamily F = parse_family(cm.family);
        LamPoly c = parse_lampoly(cm.c);
        GoodPlacesResult res = good_places(F, c);
        ojson doc;
        doc["command"] = "good-places";
        doc["inputs"] = {{"family", cm.family}, {"c", cm.c}};
        ojson checked = ojson::array();
        for (const GoodPlaceReport& r : res.checked)
            checked.push_back({{"place", js_place(r.place)},
                               {"is_good", r.is_good},
                               {"reasons", r.reasons}});
        doc["result"] = {{"checked", checked},
                         {"rest_certified_good", res.rest_certified_good},
                         {"flagged", res.flagged()}};
        emit(doc, cm, out);
        return 0;
    }

    err << "error: no subcommand dispatched\n";
    return 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run_impl(args, out, err);
    } catch (const DynError& e) {
        ojson j;
        j["error"] = {{"kind", e.kind_name()}, {"message", e.what()}};
        if (e.has_position()) j["error"]["position"] = e.position();
        out << j.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

} // namespace dynmand
