#include "liouville/field.hpp"

#include <algorithm>
#include <cmath>

namespace lv {

namespace {

class HyperbolicField : public ConformalField {
public:
    FieldSample sample(cplx z) const override {
        double y = z.imag();
        if (y == 0.0) throw DomainError("hyperbolic field evaluated on the real axis");
        FieldSample s;
        s.phi = -2.0 * std::log(std::abs(y));
        s.phi_z = cplx(0.0, 1.0 / y);
        s.phi_zzbar = 0.5 / (y * y);
        return s;
    }
    std::string provenance() const override { return "hyperbolic"; }
};

// e^phi = sum over words of |(gamma h)'|^2 / (1 + |gamma h|^2)^2 = sum (|a z + b|^2 + |c z + d|^2)^{-2}
class PoincareField : public ConformalField {
public:
    PoincareField(std::vector<MoebiusMap> terms, int N, double tail) : terms_(std::move(terms)), N_(N), tail_(tail) {}

    FieldSample sample(cplx z) const override {
        double f = 0.0, fzz = 0.0;
        cplx fz = 0.0;
        for (const auto& m : terms_) {
            cplx p = m.a * z + m.b, q = m.c * z + m.d;
            double Q = std::norm(p) + std::norm(q);
            cplx Qz = m.a * std::conj(p) + m.c * std::conj(q);
            double Qzz = std::norm(m.a) + std::norm(m.c);
            double iQ = 1.0 / Q, iQ2 = iQ * iQ, iQ3 = iQ2 * iQ;
            f += iQ2;
            fz += -2.0 * iQ3 * Qz;
            fzz += 6.0 * iQ2 * iQ2 * std::norm(Qz) - 2.0 * iQ3 * Qzz;
        }
        FieldSample s;
        s.phi = std::log(f);
        s.phi_z = fz / f;
        s.phi_zzbar = fzz / f - std::norm(fz) / (f * f);
        return s;
    }
    std::string provenance() const override { return "poincare-series(" + std::to_string(N_) + ")"; }
    double tail_bound() const override { return tail_; }

private:
    std::vector<MoebiusMap> terms_;
    int N_;
    double tail_;
};

class Perturbed : public ConformalField {
public:
    Perturbed(FieldPtr base, std::vector<InvariantPtr> s, std::vector<double> t)
        : base_(std::move(base)), s_(std::move(s)), t_(std::move(t)) {}
    FieldSample sample(cplx z) const override {
        FieldSample r = base_->sample(z);
        for (size_t j = 0; j < s_.size(); ++j) {
            if (t_[j] == 0.0) continue;
            InvariantSample v = s_[j]->sample(z);
            r.phi += t_[j] * v.s;
            r.phi_z += t_[j] * v.s_z;
            r.phi_zzbar += t_[j] * v.s_zzbar;
        }
        return r;
    }
    std::string provenance() const override { return "perturbed(" + base_->provenance() + ")"; }
    double tail_bound() const override { return base_->tail_bound(); }

private:
    FieldPtr base_;
    std::vector<InvariantPtr> s_;
    std::vector<double> t_;
};

// radial profile b(u) = exp(1 - 1/(1-u)) on [0,1), u = s/s0; returns b, db/ds, d2b/ds2
std::array<double, 3> profile(double s, double s0) {
    double u = s / s0;
    if (u >= 1.0) return {0.0, 0.0, 0.0};
    double v = 1.0 / (1.0 - u);
    double b = std::exp(1.0 - v);
    return {b, -b * v * v / s0, b * (v * v * v * v - 2.0 * v * v * v) / (s0 * s0)};
}

class Bump : public InvariantFunction {
public:
    Bump(FundamentalPolygon poly, cplx c, double width)
        : poly_(std::move(poly)), walls_(polygon_walls(poly_)), c_(c), hyperbolic_(poly_.kind == GroupKind::fuchsian) {
        s0_ = hyperbolic_ ? std::cosh(width) - 1.0 : 1.0;
        w2_ = width * width;
    }

    InvariantSample sample(cplx z) const override {
        bool lower = hyperbolic_ && z.imag() < 0.0;
        cplx w = lower ? std::conj(z) : z;
        MoebiusMap A;
        if (!reduce_to_domain(poly_, walls_, w, A)) throw DomainError("point could not be moved into the domain");
        cplx v = A(w);
        cplx dA = A.deriv(w);
        InvariantSample r = local(v);
        r.s_z *= dA;
        r.s_zzbar *= std::norm(dA);
        if (lower) r.s_z = std::conj(r.s_z);
        return r;
    }

    // the identity term of the orbit sum
    InvariantSample local(cplx w) const {
        double s, s_ww;
        cplx s_w;
        if (hyperbolic_) {
            double y = w.imag(), yc = c_.imag();
            double N = std::norm(w - c_);
            s = N / (2.0 * y * yc);
            cplx n = std::conj(w - c_) * y + cplx(0.0, 0.5 * N);
            double D = 2.0 * yc * y * y;
            s_w = n / D;
            cplx n_wb = cplx(y, (w - c_).real());
            cplx D_wb = cplx(0.0, 2.0 * yc * y);
            s_ww = ((n_wb * D - n * D_wb) / (D * D)).real();
        } else {
            s = std::norm(w - c_) / w2_;
            s_w = std::conj(w - c_) / w2_;
            s_ww = 1.0 / w2_;
        }
        auto b = profile(s, s0_);
        InvariantSample r;
        r.s = b[0];
        r.s_z = b[1] * s_w;
        r.s_zzbar = b[2] * std::norm(s_w) + b[1] * s_ww;
        return r;
    }

private:
    FundamentalPolygon poly_;
    std::vector<Wall> walls_;
    cplx c_;
    bool hyperbolic_;
    double s0_, w2_;
};

std::vector<cplx> circle_samples(const MarkedGroup& g, int per_circle) {
    std::vector<cplx> out;
    for (const auto& D : g.disks)
        for (int j = 0; j < per_circle; ++j) out.push_back(D.center + std::polar(D.radius, 2.0 * pi * (j + 0.5) / per_circle));
    return out;
}

}  // namespace

FieldPtr hyperbolic_field() { return std::make_shared<HyperbolicField>(); }

FieldPtr poincare_series_field(const MarkedGroup& g, int N) {
    if (g.generators.empty()) return std::make_shared<PoincareField>(std::vector<MoebiusMap>{MoebiusMap::identity()}, N, 0.0);
    if (g.kind != GroupKind::schottky) throw ValidationError("Poincare series fields are built for Schottky groups");
    if (N < 3) throw ValidationError("Poincare series needs word length N >= 3");
    // words in the coordinate where the group was built, composed with the chart map h
    MoebiusMap h = g.normalization.inverse();
    MarkedGroup base = conjugate(g, h);
    auto words = enumerate(base, N);
    std::vector<MoebiusMap> terms;
    std::vector<int> length;
    for (const auto& w : words) {
        terms.push_back(w.element * h);
        length.push_back(int(w.letters.size()));
    }
    // tail estimate from the last two shells, relative to the total, on the boundary circles
    // and their images one step into the disks
    std::vector<cplx> probe = circle_samples(g, 32);
    const size_t n0 = probe.size();
    for (const auto& gen : g.generators)
        for (size_t i = 0; i < n0; ++i) {
            probe.push_back(gen(probe[i]));
            probe.push_back(gen.inverse()(probe[i]));
        }
    double tail = 0.0;
    for (cplx z : probe) {
        double total = 0.0, last = 0.0, prev = 0.0;
        for (size_t i = 0; i < terms.size(); ++i) {
            const auto& m = terms[i];
            double Q = std::norm(m.a * z + m.b) + std::norm(m.c * z + m.d);
            double t = 1.0 / (Q * Q);
            total += t;
            if (length[i] == N) last += t;
            if (length[i] == N - 1) prev += t;
        }
        double q = prev > 0.0 ? last / prev : 1.0;
        double est = q < 1.0 ? last * q / (1.0 - q) / total : 1.0;
        tail = std::max(tail, 2.0 * est);
    }
    if (tail > 1e-6) throw DomainError("Poincare series tail " + std::to_string(tail) + " too large; increase N");
    return std::make_shared<PoincareField>(std::move(terms), N, tail);
}

InvariantPtr invariant_bump(const FundamentalPolygon& poly, cplx center, double width) {
    if (!(width > 0.0)) throw ValidationError("bump width must be positive");
    if (!poly.contains(center)) throw ValidationError("bump center outside the fundamental domain");
    Disk sup = bump_support(poly, center, width);
    const cplx ec = sup.center;
    const double er = sup.radius;
    if (poly.kind == GroupKind::schottky) {
        for (const auto& D : poly.group.disks)
            if (!D.exterior && std::abs(D.center - center) < width + D.radius)
                throw ValidationError("bump support meets a boundary circle");
    }
    for (int j = 0; j < 256; ++j)
        if (!poly.contains(ec + std::polar(er, 2.0 * pi * j / 256.0)))
            throw ValidationError("bump support leaves the fundamental domain");
    return std::make_shared<Bump>(poly, center, width);
}

Disk bump_support(const FundamentalPolygon& poly, cplx center, double width) {
    if (poly.kind == GroupKind::fuchsian)
        return {cplx(center.real(), center.imag() * std::cosh(width)), center.imag() * std::sinh(width), false};
    return {center, width, false};
}

FieldPtr perturb(const FieldPtr& base, const std::vector<InvariantPtr>& sigma, const std::vector<double>& t) {
    if (sigma.size() != t.size()) throw ValidationError("perturbation sizes differ");
    return std::make_shared<Perturbed>(base, sigma, t);
}

std::vector<cplx> domain_samples(const FundamentalPolygon& poly, int n) {
    RadialRegion reg = poly.quadrature_region();
    std::vector<cplx> out;
    std::vector<std::array<double, 2>> iv;
    const int rings = 4;
    for (int i = 0; i < n; ++i) {
        double psi = 2.0 * pi * (i + 0.37) / n;
        iv.clear();
        reg.radial(psi, iv);
        if (iv.empty()) continue;
        const auto& I = iv[i % iv.size()];
        double frac = (1.0 + (i % rings)) / (rings + 1.0);
        out.push_back(reg.chart(std::polar(I[0] + frac * (I[1] - I[0]), psi)));
    }
    return out;
}

double automorphy_residual(const ConformalField& f, const MarkedGroup& g, const std::vector<cplx>& samples) {
    double r = 0.0;
    for (cplx z : samples) {
        double phi = f.sample(z).phi;
        for (const auto& gen : g.generators) {
            for (const auto& m : {gen, gen.inverse()}) {
                double v = f.sample(m(z)).phi + std::log(std::norm(m.deriv(z)));
                r = std::max(r, std::abs(v - phi));
            }
        }
    }
    return r;
}

double invariance_residual(const InvariantFunction& s, const MarkedGroup& g, const std::vector<cplx>& samples) {
    double r = 0.0;
    for (cplx z : samples) {
        double v = s.sample(z).s;
        for (const auto& gen : g.generators)
            for (const auto& m : {gen, gen.inverse()}) r = std::max(r, std::abs(s.sample(m(z)).s - v));
    }
    return r;
}

}  // namespace lv
