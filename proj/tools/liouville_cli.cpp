#include "config.hpp"
#include "suites.hpp"

#include "liouville/parallel.hpp"
#include "liouville/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace cli;

namespace {

struct Common {
    int jobs = 0;
    Tolerances tol;
};

struct Loaded {
    json group;
    lv::FundamentalPolygon poly;
};

Loaded load_group(const std::string& path) {
    json spec = group_spec(read_json_file(path));
    return {spec, lv::build_polygon(build_group(spec))};
}

int jobs_from_env(int flag) {
    if (const char* env = std::getenv("LIOUVILLE_JOBS")) {
        try {
            size_t used = 0;
            int j = std::stoi(env, &used);
            if (used == std::string(env).size() && j >= 0) return j;
        } catch (const std::exception&) {
        }
        throw lv::ValidationError("LIOUVILLE_JOBS must be a non-negative integer");
    }
    return flag;
}

lv::Component component_from(const std::string& s) {
    if (s == "upper") return lv::Component::upper;
    if (s == "lower") return lv::Component::lower;
    if (s == "both") return lv::Component::both;
    throw lv::ValidationError("component must be upper, lower or both");
}

std::string csv_number(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

// ---- group build

struct GroupBuild {
    std::string kind = "fuchsian";
    int genus = 2;
    std::string config;
    bool keep_infinity = false;
    std::string out;

    void run(const Common&) const {
        json doc = config.empty() ? json{{"kind", kind}, {"genus", genus}} : read_json_file(config);
        if (config.empty() && keep_infinity) doc["infinity_in_limit_set"] = false;
        json spec = group_spec(doc);
        auto G = build_group(spec);
        auto P = lv::build_polygon(G);
        json report = describe_group(spec, G);
        if (G.kind == lv::GroupKind::fuchsian) report["vertex_relation_residual"] = lv::vertex_relation_residual(P);
        write_text(out, stamped(report, {{"command", "group build"}, {"group", spec}}).dump(2) + "\n");
    }
};

// ---- action eval

struct ActionEval {
    std::string group, metric;
    std::string component = "upper";
    bool independent = false;
    double basepoint = std::nan("");
    bool classic = false;
    std::string out, csv;

    void run(const Common& c) const {
        auto L = load_group(group);
        json mspec = metric_spec(metric_argument(metric));
        auto f = build_field(mspec, L.poly);
        lv::ActionOptions o = c.tol.action();
        o.component = component_from(component);
        o.lower_mode = independent ? lv::LowerMode::independent : lv::LowerMode::mirror;
        o.basepoint = basepoint;
        if (classic && L.poly.kind != lv::GroupKind::schottky)
            throw lv::ValidationError("the classical functional is defined on Schottky domains");
        auto b = classic ? lv::classic_schottky_action(L.poly, *f, o) : lv::evaluate_action(L.poly, *f, o);

        json config{{"command", "action eval"}, {"group", L.group}, {"metric", mspec},
                    {"component", component}, {"lower_mode", independent ? "independent" : "mirror"},
                    {"functional", classic ? "classic" : "kleinian"}, {"tolerances", c.tol.to_json()}};
        if (!std::isnan(basepoint)) config["basepoint"] = basepoint;
        json report = to_json(b);
        report["field"] = {{"provenance", f->provenance()}, {"tail_bound", f->tail_bound()}};
        write_text(out, stamped(report, config).dump(2) + "\n");
        if (!csv.empty()) {
            std::string text = "component,bulk,edge,path,total,area,imag_residue,error_budget\n" + component;
            for (double x : {b.bulk, b.edge, b.path, b.total, b.area, b.imag_residue, b.error_budget})
                text += "," + csv_number(x);
            write_text(csv, text + "\n");
        }
    }
};

// ---- verify identities

struct VerifyIdentities {
    std::uint64_t seed = 7;
    std::string out;

    int run(const Common&) const {
        json suites = json::array();
        bool all = true;
        for (const auto& r : identity_suites(seed)) {
            suites.push_back({{"name", r.name}, {"samples", r.samples}, {"max_residual", r.max_residual},
                              {"tolerance", r.tolerance}, {"pass", r.pass}});
            all = all && r.pass;
        }
        json report{{"suites", suites}, {"all_pass", all}};
        write_text(out, stamped(report, {{"command", "verify identities"}, {"seed", seed}}).dump(2) + "\n");
        return all ? 0 : 3;
    }
};

// ---- holography sweep

struct HolographySweep {
    std::string group, metric;
    std::string eps = "0.1,0.05,0.025";
    std::string cutoff = "epstein";
    bool no_action = false;
    std::string out, csv;

    void run(const Common& c) const {
        lv::CutoffSpec spec;
        spec.mode = lv::cutoff_from_string(cutoff);
        spec.eps = parse_eps_list(eps);
        spec.validate();
        auto L = load_group(group);
        json mspec = metric_spec(metric_argument(metric));
        auto f = build_field(mspec, L.poly);
        auto r = lv::regularized_action(L.poly, *f, spec, c.tol.holography(), !no_action);

        json rows = json::array();
        std::string text = "eps,V,A,V_minus_half_A,fit_residual\n";
        for (const auto& row : r.rows) {
            double le = std::log(row.eps);
            double fit_res = row.difference - (r.fit.c0 + r.fit.c1 * le + r.fit.c2 * row.eps * row.eps);
            rows.push_back({{"eps", row.eps}, {"volume", row.volume}, {"area", row.area},
                            {"difference", row.difference}, {"error", row.error}, {"fit_residual", fit_res}});
            text += csv_number(row.eps) + "," + csv_number(row.volume) + "," + csv_number(row.area) + "," +
                    csv_number(row.difference) + "," + csv_number(fit_res) + "\n";
        }
        json report{{"cutoff", lv::to_string(r.mode)},
                    {"rows", rows},
                    {"fit", {{"c0", r.fit.c0}, {"c1", r.fit.c1}, {"c2", r.fit.c2}, {"rms", r.fit.rms}}},
                    {"chi", r.chi},
                    {"expected_slope", r.expected_slope},
                    {"slope", r.slope},
                    {"E", r.E}};
        if (!no_action) {
            report["action"] = {{"S", r.action.action}, {"area", r.action.area}, {"predicted", r.action.predicted}};
            report["residual"] = r.residual;
        }
        json config{{"command", "holography sweep"}, {"group", L.group}, {"metric", mspec},
                    {"cutoff", lv::to_string(spec.mode)}, {"eps", spec.eps}, {"with_action", !no_action},
                    {"tolerances", c.tol.to_json()}};
        write_text(out, stamped(report, config).dump(2) + "\n");
        if (!csv.empty()) write_text(csv, text);
    }
};

// ---- solve liouville

struct SolveLiouville {
    std::string group, start;
    std::string basis = "bumps:16";
    double tol = 1e-6;
    int max_iterations = 40;
    std::string out;

    int run(const Common& c) const {
        if (!(tol > 0.0)) throw lv::ValidationError("--tol must be positive");
        auto L = load_group(group);
        json sspec = metric_spec(metric_argument(start));
        auto f0 = build_field(sspec, L.poly);
        auto B = lv::bump_basis(L.poly, basis_size(basis));
        lv::SolveOptions o;
        o.tol = tol;
        o.max_iterations = max_iterations;
        auto sol = lv::minimize(L.poly, f0, B, o);
        const auto& r = sol.report;

        json centers = json::array();
        for (auto z : B.centers) centers.push_back({z.real(), z.imag()});
        json report{{"converged", r.converged},
                    {"iterations", r.iterations},
                    {"start_action", r.start_action},
                    {"final_action", r.final_action},
                    {"critical_value", 4.0 * lv::pi * (2 * L.poly.genus() - 2)},
                    {"projection_residual", r.projection_residual},
                    {"start_curvature_defect", r.start_curvature_defect},
                    {"final_curvature_defect", r.final_curvature_defect},
                    {"gradient_norms", r.gradient_norms},
                    {"actions", r.actions},
                    {"increment_mismatch", r.increment_mismatch},
                    {"hessian_eigenvalues", r.hessian_eigenvalues},
                    {"basis", {{"name", basis}, {"centers", centers}, {"widths", B.widths},
                               {"gram_condition", B.gram_condition}}},
                    {"field", {{"metric", "expansion"}, {"base", sspec}, {"basis", basis},
                               {"coefficients", r.coefficients}}}};
        json config{{"command", "solve liouville"}, {"group", L.group}, {"start", sspec}, {"basis", basis},
                    {"tol", tol}, {"max_iterations", max_iterations}, {"tolerances", c.tol.to_json()}};
        write_text(out, stamped(report, config).dump(2) + "\n");
        if (!r.converged) {
            std::cerr << "solver did not reach the gradient tolerance\n";
            return 3;
        }
        return 0;
    }
};

// ---- epstein export

struct EpsteinExport {
    std::string group, metric;
    double eps = 0.05;
    int samples = 200;
    std::string out;

    void run(const Common&) const {
        if (!(eps > 0.0)) throw lv::ValidationError("--eps must be positive");
        if (samples < 1) throw lv::ValidationError("--samples must be positive");
        auto L = load_group(group);
        auto f = build_field(metric_spec(metric_argument(metric)), L.poly);
        auto pts = lv::domain_samples(L.poly, samples);
        auto rows = lv::parallel_map<std::string>(int(pts.size()), [&](int i) {
            lv::cplx w = pts[i];
            lv::HPoint3 Z = lv::epstein_map(*f, w, eps);
            return csv_number(w.real()) + "," + csv_number(w.imag()) + "," + csv_number(f->sample(w).phi) + "," +
                   csv_number(Z.z.real()) + "," + csv_number(Z.z.imag()) + "," + csv_number(Z.t) + "\n";
        });
        std::string text = "u,v,phi,x,y,t\n";
        for (const auto& r : rows) text += r;
        write_text(out, text);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Liouville action, holography and variational solver"};
    app.set_version_flag("--version", std::string(lv::version));
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--jobs", common.jobs, "worker threads (0: all cores); LIOUVILLE_JOBS overrides")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tol2d", common.tol.tol2d, "area quadrature tolerance")->capture_default_str();
    app.add_option("--tol1d", common.tol.tol1d, "path quadrature tolerance")->capture_default_str();
    app.add_option("--tol3d", common.tol.tol3d, "volume quadrature tolerance")->capture_default_str();

    GroupBuild gb;
    auto* grp = app.add_subcommand("group", "marked groups")->require_subcommand(1);
    auto* gbc = grp->add_subcommand("build", "build a marked group and write its JSON");
    gbc->add_option("--kind", gb.kind, "fuchsian or schottky")->check(CLI::IsMember({"fuchsian", "schottky"}));
    gbc->add_option("--genus", gb.genus, "Fuchsian genus");
    gbc->add_option("--config", gb.config, "group config JSON (overrides --kind/--genus)")->check(CLI::ExistingFile);
    gbc->add_flag("--keep-infinity", gb.keep_infinity, "Schottky: keep the construction chart");
    gbc->add_option("--out", gb.out, "output path (stdout if absent)");

    ActionEval ae;
    auto* act = app.add_subcommand("action", "Liouville action")->require_subcommand(1);
    auto* aec = act->add_subcommand("eval", "evaluate the action of a metric");
    aec->add_option("--group", ae.group, "group JSON")->required()->check(CLI::ExistingFile);
    aec->add_option("--metric", ae.metric, "metric JSON, inline JSON or \"hyperbolic\"")->required();
    aec->add_option("--component", ae.component, "Fuchsian surface: upper, lower or both")
        ->check(CLI::IsMember({"upper", "lower", "both"}));
    aec->add_flag("--independent-lower", ae.independent, "integrate the lower surface on its own chains");
    aec->add_option("--basepoint", ae.basepoint, "real basepoint of the chains");
    aec->add_flag("--classic", ae.classic, "Schottky: classical functional instead of the Kleinian action");
    aec->add_option("--out", ae.out, "JSON output path (stdout if absent)");
    aec->add_option("--csv", ae.csv, "CSV summary row");

    VerifyIdentities vi;
    auto* ver = app.add_subcommand("verify", "identity checks")->require_subcommand(1);
    auto* vic = ver->add_subcommand("identities", "run the seeded identity suites");
    vic->add_option("--seed", vi.seed, "seed of the random samples")->capture_default_str();
    vic->add_option("--out", vi.out, "JSON output path (stdout if absent)");

    HolographySweep hs;
    auto* hol = app.add_subcommand("holography", "regularized volume")->require_subcommand(1);
    auto* hsc = hol->add_subcommand("sweep", "volume and area over a cutoff schedule, with the fit");
    hsc->add_option("--group", hs.group, "group JSON")->required()->check(CLI::ExistingFile);
    hsc->add_option("--metric", hs.metric, "metric JSON, inline JSON or \"hyperbolic\"")->required();
    hsc->add_option("--eps", hs.eps, "decreasing cutoff values, comma separated")->capture_default_str();
    hsc->add_option("--cutoff", hs.cutoff, "epstein or naive")->check(CLI::IsMember({"epstein", "naive"}));
    hsc->add_flag("--no-action", hs.no_action, "skip the two-dimensional side");
    hsc->add_option("--out", hs.out, "JSON report path (stdout if absent)");
    hsc->add_option("--csv", hs.csv, "tidy CSV: eps, V, A, V - A/2, fit residual");

    SolveLiouville sl;
    auto* sol = app.add_subcommand("solve", "variational problems")->require_subcommand(1);
    auto* slc = sol->add_subcommand("liouville", "minimize the action over a bump basis");
    slc->add_option("--group", sl.group, "Fuchsian group JSON")->required()->check(CLI::ExistingFile);
    slc->add_option("--start", sl.start, "start metric JSON, inline JSON or \"hyperbolic\"")->required();
    slc->add_option("--basis", sl.basis, "bumps:<m>")->capture_default_str();
    slc->add_option("--tol", sl.tol, "gradient norm tolerance")->capture_default_str();
    slc->add_option("--max-iterations", sl.max_iterations, "Newton steps")->capture_default_str();
    slc->add_option("--out", sl.out, "JSON output path (stdout if absent)");

    EpsteinExport ee;
    auto* eps = app.add_subcommand("epstein", "Epstein surfaces")->require_subcommand(1);
    auto* eec = eps->add_subcommand("export", "CSV of the cutoff surface over domain samples");
    eec->add_option("--group", ee.group, "group JSON")->required()->check(CLI::ExistingFile);
    eec->add_option("--metric", ee.metric, "metric JSON, inline JSON or \"hyperbolic\"")->required();
    eec->add_option("--eps", ee.eps, "cutoff")->capture_default_str();
    eec->add_option("--samples", ee.samples, "number of domain samples")->capture_default_str();
    eec->add_option("--out", ee.out, "CSV path (stdout if absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        common.tol.validate();
        lv::set_jobs(jobs_from_env(common.jobs));
        if (gbc->parsed()) gb.run(common);
        else if (aec->parsed()) ae.run(common);
        else if (vic->parsed()) return vi.run(common);
        else if (hsc->parsed()) hs.run(common);
        else if (slc->parsed()) return sl.run(common);
        else if (eec->parsed()) ee.run(common);
        return 0;
    } catch (const lv::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
