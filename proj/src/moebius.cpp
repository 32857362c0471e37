#include "liouville/moebius.hpp"

#include <algorithm>
#include <cmath>

namespace lv {

namespace {

void fix_sign(MoebiusMap& m) {
    const cplx e[4] = {m.a, m.b, m.c, m.d};
    double scale = 0.0;
    for (auto x : e) scale = std::max(scale, std::abs(x));
    for (auto x : e) {
        if (std::abs(x) <= 1e-14 * scale) continue;
        bool keep = x.real() > 0.0 || (x.real() == 0.0 && x.imag() > 0.0);
        if (!keep) {
            m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
        }
        return;
    }
}

}  // namespace

MoebiusMap::MoebiusMap(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
    cplx D = det();
    if (std::abs(D) == 0.0) throw DomainError("singular Moebius matrix");
    cplx s = std::sqrt(D);
    a /= s; b /= s; c /= s; d /= s;
    fix_sign(*this);
}

MoebiusMap MoebiusMap::unimodular(cplx a_, cplx b_, cplx c_, cplx d_) {
    MoebiusMap m;
    m.a = a_; m.b = b_; m.c = c_; m.d = d_;
    fix_sign(m);
    return m;
}

MoebiusMap MoebiusMap::dilation(cplx k) {
    cplx s = std::sqrt(k);
    return {s, 0.0, 0.0, 1.0 / s};
}

MoebiusMap MoebiusMap::inverse() const { return unimodular(d, -b, -c, a); }

SpherePoint MoebiusMap::apply(SpherePoint p) const {
    if (p.infinite) {
        if (c == 0.0) return SpherePoint::inf();
        return SpherePoint::at(a / c);
    }
    cplx den = c * p.z + d;
    if (den == 0.0) return SpherePoint::inf();
    return SpherePoint::at((a * p.z + b) / den);
}

cplx MoebiusMap::operator()(cplx z) const {
    cplx den = c * z + d;
    if (den == 0.0) throw DomainError("evaluation at the pole of a Moebius map");
    return (a * z + b) / den;
}

cplx MoebiusMap::deriv(cplx z) const {
    cplx den = c * z + d;
    if (den == 0.0) throw DomainError("derivative at the pole of a Moebius map");
    return 1.0 / (den * den);
}

cplx MoebiusMap::second_deriv(cplx z) const {
    cplx den = c * z + d;
    if (den == 0.0) throw DomainError("derivative at the pole of a Moebius map");
    return -2.0 * c / (den * den * den);
}

cplx MoebiusMap::log_deriv_ratio(cplx z) const {
    if (c == 0.0) return 0.0;
    cplx den = c * z + d;
    if (den == 0.0) throw DomainError("derivative at the pole of a Moebius map");
    return -2.0 * c / den;
}

SpherePoint MoebiusMap::image_of_infinity() const { return apply(SpherePoint::inf()); }

SpherePoint MoebiusMap::pole() const { return inverse().apply(SpherePoint::inf()); }

bool MoebiusMap::is_identity(double tol) const { return distance(identity()) < tol; }

double MoebiusMap::distance(const MoebiusMap& o) const {
    double plus = 0.0, minus = 0.0;
    const cplx x[4] = {a, b, c, d}, y[4] = {o.a, o.b, o.c, o.d};
    for (int i = 0; i < 4; ++i) {
        plus = std::max(plus, std::abs(x[i] - y[i]));
        minus = std::max(minus, std::abs(x[i] + y[i]));
    }
    return std::min(plus, minus);
}

std::array<double, 8> MoebiusMap::to_array() const {
    return {a.real(), a.imag(), b.real(), b.imag(), c.real(), c.imag(), d.real(), d.imag()};
}

MoebiusMap MoebiusMap::from_array(const std::array<double, 8>& v) {
    return {cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7])};
}

MoebiusMap compose(const MoebiusMap& g1, const MoebiusMap& g2) {
    return MoebiusMap::unimodular(g1.a * g2.a + g1.b * g2.c, g1.a * g2.b + g1.b * g2.d,
                                  g1.c * g2.a + g1.d * g2.c, g1.c * g2.b + g1.d * g2.d);
}

MoebiusMap conjugate_entries(const MoebiusMap& m) {
    return {std::conj(m.a), std::conj(m.b), std::conj(m.c), std::conj(m.d)};
}

Act3 act3d(const MoebiusMap& g, HPoint3 Z) {
    cplx q = g.c * Z.z + g.d;
    double ct = std::abs(g.c) * Z.t;
    double J = 1.0 / (std::norm(q) + ct * ct);
    cplx z = ((g.a * Z.z + g.b) * std::conj(q) + g.a * std::conj(g.c) * Z.t * Z.t) * J;
    return {{z, Z.t * J}, J};
}

Act3Derivatives act3d_derivatives(const MoebiusMap& g, HPoint3 Z) {
    cplx q = g.c * Z.z + g.d;
    double ct = std::abs(g.c) * Z.t;
    double J = 1.0 / (std::norm(q) + ct * ct);
    double J2 = J * J;
    cplx qb = std::conj(q), cb = std::conj(g.c);
    Act3Derivatives r;
    r.dz_dz = qb * qb * J2;
    r.dz_dzbar = -(cb * Z.t) * (cb * Z.t) * J2;
    r.dz_dt = 2.0 * Z.t * cb * qb * J2;
    r.dt_dz = -Z.t * g.c * qb * J2;
    r.dt_dt = (std::norm(q) - ct * ct) * J2;
    return r;
}

std::string to_string(MapTag t) {
    switch (t) {
        case MapTag::identity: return "identity";
        case MapTag::parabolic: return "parabolic";
        case MapTag::elliptic: return "elliptic";
        case MapTag::hyperbolic: return "hyperbolic";
        case MapTag::loxodromic: return "loxodromic";
    }
    return "?";
}

MapClass classify(const MoebiusMap& g, double tol) {
    MapClass out;
    if (g.is_identity(tol)) {
        out.tag = MapTag::identity;
        return out;
    }
    cplx tr = g.trace();
    cplx disc = std::sqrt(tr * tr - 4.0);
    if (std::abs(tr * tr - 4.0) < tol) {
        out.tag = MapTag::parabolic;
        if (std::abs(g.c) < tol)
            out.fixed_points = {SpherePoint::inf()};
        else
            out.fixed_points = {SpherePoint::at((g.a - g.d) / (2.0 * g.c))};
        out.multiplier = 1.0;
        return out;
    }
    cplx mu = 0.5 * (tr + disc);
    if (std::abs(mu) < 1.0) mu = 1.0 / mu;
    out.multiplier = mu * mu;
    if (std::abs(tr.imag()) < tol)
        out.tag = std::abs(tr.real()) > 2.0 ? MapTag::hyperbolic : MapTag::elliptic;
    else
        out.tag = MapTag::loxodromic;

    SpherePoint p, q;
    double scale = std::max({std::abs(g.a), std::abs(g.b), std::abs(g.d)});
    if (std::abs(g.c) <= 1e-14 * scale) {
        p = SpherePoint::inf();
        q = SpherePoint::at(g.b / (g.d - g.a));
        // infinity attracts iff |a/d| > 1
        if (std::abs(g.a) < std::abs(g.d)) std::swap(p, q);
    } else {
        // roots of c z^2 + (d - a) z - b, avoiding cancellation
        cplx w = std::abs(g.a - g.d + disc) >= std::abs(g.a - g.d - disc) ? g.a - g.d + disc : g.a - g.d - disc;
        p = SpherePoint::at(w / (2.0 * g.c));
        q = SpherePoint::at(-2.0 * g.b / w);
        if (std::abs(g.c * p.z + g.d) < std::abs(g.c * q.z + g.d)) std::swap(p, q);
    }
    out.fixed_points = {p, q};
    return out;
}

std::array<cplx, 3> contour_derivatives(const std::function<cplx(cplx)>& f, cplx z, double r, int n) {
    std::array<cplx, 3> acc{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        cplx u = std::polar(1.0, 2.0 * pi * k / n);
        cplx v = f(z + r * u);
        acc[0] += v / u;
        acc[1] += v / (u * u);
        acc[2] += v / (u * u * u);
    }
    return {acc[0] / (double(n) * r), 2.0 * acc[1] / (double(n) * r * r),
            6.0 * acc[2] / (double(n) * r * r * r)};
}

cplx schwarzian(const HolomorphicSampler& s, cplx z, double contour_radius) {
    cplx f1, f2, f3;
    if (s.d1 && s.d2 && s.d3) {
        f1 = s.d1(z); f2 = s.d2(z); f3 = s.d3(z);
    } else {
        double r = contour_radius > 0.0 ? contour_radius : 0.05 * std::max(1.0, std::abs(z));
        auto d = contour_derivatives(s.f, z, r);
        f1 = d[0]; f2 = d[1]; f3 = d[2];
    }
    if (std::abs(f1) < 1e-300) throw CriticalPointError("Schwarzian at a critical point");
    cplx q = f2 / f1;
    return f3 / f1 - 1.5 * q * q;
}

HolomorphicSampler sampler_of(const MoebiusMap& m) {
    return {[m](cplx z) { return m(z); },
            [m](cplx z) { return m.deriv(z); },
            [m](cplx z) { return m.second_deriv(z); },
            [m](cplx z) {
                cplx den = m.c * z + m.d;
                return 6.0 * m.c * m.c / (den * den * den * den);
            }};
}

}  // namespace lv
