#include "liouville/action.hpp"

#include "liouville/parallel.hpp"

#include <cmath>

namespace lv {

namespace {

const double log4 = 2.0 * std::log(2.0);

// X dz - conj(X) dzbar
OneForm antireal(cplx x) { return {x, -std::conj(x)}; }

// gamma''/gamma' at z, guarding the pole
cplx log_ratio(const MoebiusMap& g, cplx z) {
    cplx q = g.c * z + g.d;
    if (std::abs(q) < 1e-12 * (std::abs(g.c) * std::abs(z) + std::abs(g.d) + 1e-300))
        throw DomainError("1-form evaluated at a pole");
    return -2.0 * g.c / q;
}

double log_abs_deriv2(const MoebiusMap& g, cplx z) {
    // log|g'(z)|^2 = -2 log|cz + d|^2
    return -2.0 * std::log(std::norm(g.c * z + g.d));
}

double log_c2(const MoebiusMap& g) { return std::log(std::norm(g.c)); }

bool has_c(const MoebiusMap& g) { return std::abs(g.c) > 1e-14 * (std::abs(g.a) + std::abs(g.d) + std::abs(g.b)); }

struct Parts {
    OneForm X, Y;
    double la, lb;
};

// for u_{g1,g2} with gamma_i = g_i^{-1}: X = gamma2''/gamma2'(gamma1 z) gamma1' dz - conj, Y = gamma1''/gamma1' dz - conj
Parts u_parts(const MoebiusMap& g1, const MoebiusMap& g2, cplx z) {
    MoebiusMap c1 = g1.inverse(), c2 = g2.inverse();
    Parts p;
    p.Y = antireal(log_ratio(c1, z));
    cplx w = c1(z);
    p.X = antireal(log_ratio(c2, w) * c1.deriv(z));
    p.la = log_abs_deriv2(c1, z);
    p.lb = log_abs_deriv2(c2, w);
    return p;
}

double trapped_error(double e, double v) { return std::isfinite(e) ? e : std::abs(v); }

class MirroredField : public ConformalField {
public:
    explicit MirroredField(FieldPtr f) : f_(std::move(f)) {}
    FieldSample sample(cplx z) const override {
        FieldSample s = f_->sample(std::conj(z));
        s.phi_z = std::conj(s.phi_z);
        return s;
    }
    std::string provenance() const override { return "mirror(" + f_->provenance() + ")"; }
    double tail_bound() const override { return f_->tail_bound(); }

private:
    FieldPtr f_;
};

// non-owning handle for internal use
FieldPtr borrow(const ConformalField& f) { return FieldPtr(std::shared_ptr<const ConformalField>{}, &f); }

struct Bulk {
    double bulk = 0.0, area = 0.0, err = 0.0;
};

Bulk bulk_integral(const RadialRegion& reg, const ConformalField& f, const ActionOptions& opt) {
    Quad2DOptions q;
    q.abs_tol = opt.bulk_tol;
    q.rel_tol = opt.bulk_rel_tol;
    q.max_cells = opt.max_cells;
    auto r = integrate2d<std::array<double, 2>>(reg, [&](cplx z) {
        FieldSample s = f.sample(z);
        double e = s.density();
        return std::array<double, 2>{std::norm(s.phi_z) + e, e};
    }, q);
    if (!r.converged) throw DomainError("bulk quadrature did not converge");
    return {r.value[0], r.value[1], r.abs_error};
}

std::string chain_label(const LedgerEntry& e) { return e.cell->label + "[" + std::to_string(e.bar.size()) + "]"; }

// sum over entries of coeff * integral of form(entry) along the entry's cell path
struct Pairing {
    cplx value{0.0};
    double err = 0.0;
    std::vector<TermValue> terms;
};

Pairing pair_ledger(const Ledger& x, const std::string& name, double tol,
                    const std::function<OneForm(const LedgerEntry&, cplx)>& form, cplx scale) {
    const int n = int(x.entries.size());
    auto parts = parallel_map<PathIntegral>(n, [&](int i) {
        const auto& e = x.entries[i];
        if (!e.cell->path) throw ValidationError("chain entry without a path");
        return integrate_form(*e.cell->path, [&](cplx z) { return form(e, z); }, tol);
    });
    Pairing p;
    for (int i = 0; i < n; ++i) {
        cplx v = scale * double(x.entries[i].coeff) * parts[i].value;
        if (!parts[i].converged) throw DomainError("path quadrature did not converge on " + name);
        p.value += v;
        p.err += std::abs(scale) * std::abs(double(x.entries[i].coeff)) * parts[i].abs_error;
        p.terms.push_back({name, chain_label(x.entries[i]), v.real()});
    }
    return p;
}

void check_field(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt) {
    double r = automorphy_residual(f, poly.group, domain_samples(poly, 24));
    if (r > opt.max_field_residual)
        throw DomainError("field automorphy residual " + std::to_string(r) + " exceeds the allowed level");
}

double resolve_basepoint(const FundamentalPolygon& poly, const ActionOptions& opt) {
    return std::isnan(opt.basepoint) ? default_basepoint(poly) : opt.basepoint;
}

// (i/2)( <omega, F> - <theta-check, L> + <u-check, W> ) with sign s = +1 for chains in the upper
// half-plane and s = -1 for their mirror images, which carry the opposite orientation.
ActionBreakdown assemble(const RadialRegion& region, const ChainSet& C, const ConformalField& f,
                         const ActionOptions& opt, int s) {
    ActionBreakdown out;
    Bulk b = bulk_integral(region, f, opt);
    out.bulk = b.bulk;
    out.area = b.area;
    out.error_budget = b.err;
    out.terms.push_back({s > 0 ? "F" : "Fbar", "bulk", b.bulk});

    const cplx half_i(0.0, 0.5 * s);
    auto edge = pair_ledger(C.L, s > 0 ? "L" : "Lbar", opt.path_tol, [&](const LedgerEntry& e, cplx z) {
        return theta_check_form(f.sample(z), e.bar[0], z);
    }, -half_i);
    auto path = pair_ledger(C.W, s > 0 ? "W" : "Wbar", opt.path_tol, [&](const LedgerEntry& e, cplx z) {
        return u_check_form(e.bar[0], e.bar[1], z);
    }, half_i);
    out.edge = edge.value.real();
    out.path = path.value.real();
    out.imag_residue = std::abs(edge.value.imag() + path.value.imag());
    out.error_budget += edge.err + path.err;
    out.terms.insert(out.terms.end(), edge.terms.begin(), edge.terms.end());
    out.terms.insert(out.terms.end(), path.terms.begin(), path.terms.end());
    out.total = out.bulk + out.edge + out.path;
    return out;
}

}  // namespace

OneForm pull_back(const OneForm& f, const MoebiusMap& m, cplx z) {
    cplx d = m.deriv(z);
    return {f.dz * d, f.dzbar * std::conj(d)};
}

double omega_density(const ConformalField& f, cplx z) { return f.sample(z).omega(); }

OneForm varkappa_form(const MoebiusMap& g, cplx z) {
    if (!has_c(g)) return {};
    return antireal(log_ratio(g.inverse(), z));
}

OneForm theta_form(const FieldSample& s, const MoebiusMap& g, cplx z) {
    if (!has_c(g)) return {};
    MoebiusMap h = g.inverse();
    return antireal(log_ratio(h, z)) * (s.phi - 0.5 * log_abs_deriv2(h, z));
}

OneForm theta_check_form(const FieldSample& s, const MoebiusMap& g, cplx z) {
    if (!has_c(g)) return {};
    MoebiusMap h = g.inverse();
    return antireal(log_ratio(h, z)) * (s.phi - 0.5 * log_abs_deriv2(h, z) - log4 - log_c2(g));
}

OneForm u_form(const MoebiusMap& g1, const MoebiusMap& g2, cplx z) {
    if (!has_c(g1)) {
        // gamma_1 affine: Y = 0, and X carries log|gamma_1'|^2 which is constant
        MoebiusMap c1 = g1.inverse();
        if (!has_c(g2)) return {};
        OneForm X = antireal(log_ratio(g2.inverse(), c1(z)) * c1.deriv(z));
        return X * (-0.5 * log_abs_deriv2(c1, z));
    }
    if (!has_c(g2)) {
        MoebiusMap c1 = g1.inverse(), c2 = g2.inverse();
        return antireal(log_ratio(c1, z)) * (0.5 * log_abs_deriv2(c2, c1(z)));
    }
    Parts p = u_parts(g1, g2, z);
    return p.X * (-0.5 * p.la) + p.Y * (0.5 * p.lb);
}

OneForm u_check_form(const MoebiusMap& g1, const MoebiusMap& g2, cplx z) {
    OneForm u = u_form(g1, g2, z);
    MoebiusMap c1 = g1.inverse(), c2 = g2.inverse();
    MoebiusMap c21 = c2 * c1;
    // X vanishes with c(gamma2), Y with c(gamma1), X + Y with c(gamma2 gamma1)
    OneForm X, Y;
    if (has_c(c2)) X = antireal(log_ratio(c2, c1(z)) * c1.deriv(z));
    if (has_c(c1)) Y = antireal(log_ratio(c1, z));
    if (has_c(c2)) u = u - X * log_c2(c2);
    if (has_c(c21)) u = u + (X + Y) * log_c2(c21);
    if (has_c(c1)) u = u - Y * log_c2(c1);
    return u;
}

cplx eta(double p, const MoebiusMap& g1, const MoebiusMap& g2) {
    if (!has_c(g2)) return 0.0;
    SpherePoint q = g1.inverse().apply(SpherePoint::at(p));
    if (q.infinite) throw DomainError("basepoint maps to infinity");
    double s = g2.image_of_infinity().z.real();
    double qx = q.z.real();
    int e = 0;
    if (p < s && s < qx) e = 1;
    if (p > s && s > qx) e = -1;
    return cplx(0.0, 4.0 * pi * e * (log4 + log_c2(g2)));
}

PathIntegral integrate_form(const Path& path, const std::function<OneForm(cplx)>& form, double abs_tol) {
    QuadOptions q;
    q.abs_tol = abs_tol;
    q.max_cells = 4000;
    auto r = integrate1d<cplx>([&](double s) { return form(path.at(s)).on(path.deriv(s)); }, 0.0, 1.0, q);
    return {r.value, trapped_error(r.abs_error, std::abs(r.value)), r.converged};
}

ActionBreakdown& ActionBreakdown::operator+=(const ActionBreakdown& o) {
    bulk += o.bulk;
    edge += o.edge;
    path += o.path;
    total += o.total;
    area += o.area;
    imag_residue += o.imag_residue;
    error_budget += o.error_budget;
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

RadialRegion mirrored_region(const RadialRegion& r) {
    RadialRegion m = r;
    auto chart = r.chart;
    m.chart = [chart](cplx zeta) { return std::conj(chart(zeta)); };
    return m;
}

FieldPtr mirrored_field(const FieldPtr& f) { return std::make_shared<MirroredField>(f); }

ActionBreakdown evaluate_action(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt) {
    check_field(poly, f, opt);
    RadialRegion region = poly.quadrature_region();
    if (poly.kind == GroupKind::schottky) return assemble(region, chains_2d(poly, 0.0), f, opt, 1);

    const double p = resolve_basepoint(poly, opt);
    ChainSet C = chains_2d(poly, p);
    ActionBreakdown out;
    if (opt.component != Component::lower) out += assemble(region, C, f, opt, 1);
    if (opt.component != Component::upper) {
        if (opt.lower_mode == LowerMode::mirror) {
            // the lower surface with field phi is the upper surface with phi(conj z)
            MirroredField m(borrow(f));
            ActionBreakdown lo = assemble(region, C, m, opt, 1);
            for (auto& t : lo.terms) t.chain += "bar";
            out += lo;
        } else {
            out += assemble(mirrored_region(region), mirror_chains(C), f, opt, -1);
        }
    }
    return out;
}

ActionBreakdown evaluate_action_eta(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt) {
    if (poly.kind != GroupKind::fuchsian) throw ValidationError("the eta route is set up on the upper half-plane");
    check_field(poly, f, opt);
    const double p = resolve_basepoint(poly, opt);
    ChainSet C = chains_2d(poly, p);
    ActionBreakdown out;
    Bulk b = bulk_integral(poly.quadrature_region(), f, opt);
    out.bulk = b.bulk;
    out.area = b.area;
    out.error_budget = b.err;
    const cplx half_i(0.0, 0.5);
    auto edge = pair_ledger(C.L, "L", opt.path_tol, [&](const LedgerEntry& e, cplx z) {
        return theta_form(f.sample(z), e.bar[0], z);
    }, -half_i);
    auto path = pair_ledger(C.W, "W", opt.path_tol, [&](const LedgerEntry& e, cplx z) {
        return u_form(e.bar[0], e.bar[1], z);
    }, half_i);
    cplx consts = 0.0;
    for (const auto& e : C.V.entries) {
        cplx v = half_i * double(e.coeff) * eta(p, e.bar[0], e.bar[1]);
        consts += v;
        out.terms.push_back({"V", chain_label(e), v.real()});
    }
    out.edge = edge.value.real();
    out.path = path.value.real() + consts.real();
    out.imag_residue = std::abs(edge.value.imag() + path.value.imag() + consts.imag());
    out.error_budget += edge.err + path.err;
    out.terms.insert(out.terms.end(), edge.terms.begin(), edge.terms.end());
    out.terms.insert(out.terms.end(), path.terms.begin(), path.terms.end());
    out.total = out.bulk + out.edge + out.path;
    return out;
}

ActionBreakdown classic_schottky_action(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt) {
    if (poly.kind != GroupKind::schottky) throw ValidationError("classic functional needs a Schottky domain");
    check_field(poly, f, opt);
    ActionBreakdown out;
    Bulk b = bulk_integral(poly.quadrature_region(), f, opt);
    out.bulk = b.bulk;
    out.area = b.area;
    out.error_budget = b.err;
    out.terms.push_back({"F", "bulk", b.bulk});
    const cplx half_i(0.0, 0.5);
    double consts = 0.0;
    for (int k = 1; k <= poly.genus(); ++k) {
        const MoebiusMap& g = poly.group.schottky(k);
        // an affine generator has no boundary term, and its constant is dropped with it
        if (!has_c(g)) continue;
        // theta_{g^{-1}} carries gamma''/gamma' of gamma = g
        auto r = integrate_form(poly.edge("C", k).path, [&](cplx z) {
            return theta_form(f.sample(z), g.inverse(), z);
        }, opt.path_tol);
        cplx v = half_i * r.value;
        out.edge += v.real();
        out.imag_residue += std::abs(v.imag());
        out.error_budget += 0.5 * r.abs_error;
        out.terms.push_back({"C", "C" + std::to_string(k), v.real()});
        double c = 4.0 * pi * log_c2(g);
        consts += c;
        out.terms.push_back({"const", "log|c|", c});
    }
    out.path = consts;
    out.total = out.bulk + out.edge + out.path;
    return out;
}

cplx varkappa_pairing(const FundamentalPolygon& poly, const ChainSet& chains) {
    (void)poly;
    auto r = pair_ledger(chains.L, "L", 1e-13, [](const LedgerEntry& e, cplx z) { return varkappa_form(e.bar[0], z); }, 1.0);
    return r.value;
}

double domain_area(const FundamentalPolygon& poly, const ConformalField& f, double tol) {
    Quad2DOptions q;
    q.abs_tol = tol;
    q.max_cells = 20000;
    auto r = integrate2d<double>(poly.quadrature_region(), [&](cplx z) { return f.sample(z).density(); }, q);
    return r.value;
}

double variation_increment(const FundamentalPolygon& poly, const ConformalField& f, const InvariantFunction& sigma,
                           double t, double tol) {
    Quad2DOptions q;
    q.abs_tol = tol;
    q.max_cells = 40000;
    auto r = integrate2d<double>(poly.quadrature_region(), [&](cplx z) {
        InvariantSample v = sigma.sample(z);
        if (v.s == 0.0 && v.s_z == 0.0) return 0.0;
        FieldSample s = f.sample(z);
        double e = s.density(), sg = t * v.s;
        // e^sigma - 1 - sigma, written to keep precision for small sigma
        double em1 = std::expm1(sg) - sg;
        return t * t * std::norm(v.s_z) + (em1 + (s.curvature() + 1.0) * sg) * e;
    }, q);
    return r.value;
}

}  // namespace lv
