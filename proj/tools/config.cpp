#include "config.hpp"

#include "liouville/version.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cli {

using lv::ValidationError;

namespace {

lv::cplx point_of(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw ValidationError(std::string(what) + " must be [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_json(lv::cplx z) { return json::array({z.real(), z.imag()}); }

double positive(const json& j, const char* key, double fallback) {
    double v = j.value(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(key) + " must be positive");
    return v;
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

json metric_argument(const std::string& arg) {
    if (arg == "hyperbolic") return {{"metric", "hyperbolic"}};
    if (!arg.empty() && arg.front() == '{') {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("metric: ") + e.what());
        }
    }
    return read_json_file(arg);
}

json group_spec(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind")) throw ValidationError("group config needs a \"kind\"");
    std::string kind = doc.at("kind").get<std::string>();
    if (kind == "fuchsian") {
        int genus = doc.value("genus", 2);
        if (genus < 2) throw ValidationError("genus must be at least 2");
        return {{"kind", kind}, {"genus", genus}};
    }
    if (kind == "schottky") {
        json pairs = json::array();
        if (doc.contains("pairs")) {
            for (const auto& p : doc.at("pairs"))
                pairs.push_back({{"c1", point_json(point_of(p.at("c1"), "c1"))},
                                 {"r1", p.at("r1").get<double>()},
                                 {"c2", point_json(point_of(p.at("c2"), "c2"))},
                                 {"r2", p.at("r2").get<double>()}});
        } else {
            for (const auto& p : lv::default_schottky_pairs())
                pairs.push_back({{"c1", point_json(p.c1)}, {"r1", p.r1}, {"c2", point_json(p.c2)}, {"r2", p.r2}});
        }
        return {{"kind", kind}, {"pairs", pairs}, {"infinity_in_limit_set", doc.value("infinity_in_limit_set", true)}};
    }
    throw ValidationError("unknown group kind \"" + kind + "\"");
}

lv::MarkedGroup build_group(const json& spec) {
    if (spec.at("kind") == "fuchsian") return lv::build_fuchsian(spec.at("genus").get<int>());
    std::vector<lv::CirclePair> pairs;
    for (const auto& p : spec.at("pairs"))
        pairs.push_back({point_of(p.at("c1"), "c1"), point_of(p.at("c2"), "c2"), p.at("r1").get<double>(),
                         p.at("r2").get<double>()});
    auto G = lv::build_schottky(pairs);
    return spec.at("infinity_in_limit_set").get<bool>() ? lv::conjugate_infinity_to_limit_set(G) : G;
}

json describe_group(const json& spec, const lv::MarkedGroup& g) {
    json out = spec;
    out["genus"] = g.genus;
    json gens = json::array();
    for (const auto& m : g.generators) gens.push_back(to_json(m));
    out["generators"] = gens;
    out["normalization"] = to_json(g.normalization);
    if (g.kind == lv::GroupKind::fuchsian) {
        json v = json::array();
        for (auto z : g.vertices) v.push_back(point_json(z));
        out["vertices"] = v;
        out["relation_residual"] = g.relation().distance(lv::MoebiusMap::identity());
    } else {
        json d = json::array();
        for (const auto& D : g.disks)
            d.push_back({{"center", point_json(D.center)}, {"radius", D.radius}, {"exterior", D.exterior}});
        out["disks"] = d;
    }
    return out;
}

json metric_spec(const json& doc) {
    if (doc.is_object() && !doc.contains("metric") && doc.contains("field")) return metric_spec(doc.at("field"));
    if (!doc.is_object() || !doc.contains("metric")) throw ValidationError("metric config needs a \"metric\"");
    std::string kind = doc.at("metric").get<std::string>();
    if (kind == "hyperbolic") return {{"metric", kind}};
    if (kind == "poincare") {
        int N = doc.value("N", 5);
        if (N < 3) throw ValidationError("Poincare series needs N >= 3");
        return {{"metric", kind}, {"N", N}};
    }
    if (kind == "perturbed") {
        json bump = doc.value("bump", json::object());
        json b{{"width", positive(bump, "width", 0.5)}};
        if (bump.contains("center")) b["center"] = point_json(point_of(bump.at("center"), "bump center"));
        json base = doc.contains("base") ? metric_spec(doc.at("base")) : json{{"metric", "hyperbolic"}};
        return {{"metric", kind}, {"t", doc.at("t").get<double>()}, {"bump", b}, {"base", base}};
    }
    if (kind == "expansion") {
        std::string basis = doc.at("basis").get<std::string>();
        auto c = doc.at("coefficients").get<std::vector<double>>();
        if (int(c.size()) != basis_size(basis)) throw ValidationError("coefficient count does not match the basis");
        return {{"metric", kind}, {"base", metric_spec(doc.at("base"))}, {"basis", basis}, {"coefficients", c}};
    }
    throw ValidationError("unknown metric \"" + kind + "\"");
}

lv::FieldPtr build_field(const json& spec, const lv::FundamentalPolygon& poly) {
    std::string kind = spec.at("metric").get<std::string>();
    if (kind == "hyperbolic") {
        if (poly.kind != lv::GroupKind::fuchsian)
            throw ValidationError("the hyperbolic metric is only available on Fuchsian groups");
        return lv::hyperbolic_field();
    }
    if (kind == "poincare") return lv::poincare_series_field(poly.group, spec.at("N").get<int>());
    auto base = build_field(spec.at("base"), poly);
    if (kind == "perturbed") {
        const json& b = spec.at("bump");
        lv::cplx center = b.contains("center") ? point_of(b.at("center"), "bump center") : poly.interior;
        return lv::perturb(base, lv::invariant_bump(poly, center, b.at("width").get<double>()), spec.at("t").get<double>());
    }
    auto B = lv::bump_basis(poly, basis_size(spec.at("basis").get<std::string>()));
    return lv::perturb(base, B.functions, spec.at("coefficients").get<std::vector<double>>());
}

int basis_size(const std::string& basis) {
    const std::string prefix = "bumps:";
    if (basis.rfind(prefix, 0) != 0) throw ValidationError("basis must look like bumps:<m>");
    try {
        size_t used = 0;
        int m = std::stoi(basis.substr(prefix.size()), &used);
        if (used + prefix.size() != basis.size() || m < 1) throw ValidationError("");
        return m;
    } catch (const std::exception&) {
        throw ValidationError("bad basis size in \"" + basis + "\"");
    }
}

void Tolerances::validate() const {
    for (double t : {tol2d, tol1d, tol3d})
        if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("tolerances must be positive");
}

lv::ActionOptions Tolerances::action() const {
    lv::ActionOptions o;
    o.bulk_tol = tol2d;
    o.bulk_rel_tol = tol2d;
    o.path_tol = tol1d;
    return o;
}

lv::HolographyOptions Tolerances::holography() const {
    lv::HolographyOptions o;
    o.tol = tol3d;
    return o;
}

json Tolerances::to_json() const { return {{"tol2d", tol2d}, {"tol1d", tol1d}, {"tol3d", tol3d}}; }

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad eps value \"" + item + "\"");
        }
    }
    return out;
}

std::uint64_t config_hash(const json& config) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t h) {
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << h;
    return s.str();
}

json stamped(json report, const json& config) {
    report["config"] = config;
    report["config_hash"] = hex(config_hash(config));
    report["version"] = lv::version;
    return report;
}

json to_json(const lv::ActionBreakdown& b) {
    json terms = json::array();
    for (const auto& t : b.terms) terms.push_back({{"chain_id", t.chain}, {"label", t.label}, {"value", t.value}});
    return {{"bulk", b.bulk},       {"edge", b.edge},
            {"path", b.path},       {"total", b.total},
            {"area", b.area},       {"imag_residue", b.imag_residue},
            {"error_budget", b.error_budget}, {"terms", terms}};
}

json to_json(const lv::MoebiusMap& m) { return m.to_array(); }

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

}  // namespace cli
