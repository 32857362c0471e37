#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lv {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A point of the Riemann sphere. The finite value is ignored when infinite is set.
struct SpherePoint {
    cplx z{0.0};
    bool infinite = false;

    static SpherePoint at(cplx w) { return {w, false}; }
    static SpherePoint inf() { return {cplx(0.0), true}; }
};

struct HPoint3 {
    cplx z{0.0};
    double t = 1.0;
};

struct MoebiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    MoebiusMap() = default;
    // Normalizes to det 1 and fixes the sign.
    MoebiusMap(cplx a, cplx b, cplx c, cplx d);

    // entries already of determinant one (up to rounding); only the sign is fixed
    static MoebiusMap unimodular(cplx a, cplx b, cplx c, cplx d);
    static MoebiusMap identity() { return {}; }
    static MoebiusMap translation(cplx s) { return {1.0, s, 0.0, 1.0}; }
    static MoebiusMap dilation(cplx k);

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    MoebiusMap inverse() const;

    SpherePoint apply(SpherePoint p) const;
    cplx operator()(cplx z) const;
    cplx deriv(cplx z) const;
    cplx second_deriv(cplx z) const;
    cplx log_deriv_ratio(cplx z) const;

    // gamma(infinity) and gamma^{-1}(infinity)
    SpherePoint image_of_infinity() const;
    SpherePoint pole() const;

    bool is_identity(double tol = 1e-10) const;
    double distance(const MoebiusMap& o) const;
    bool approx_equal(const MoebiusMap& o, double tol) const { return distance(o) < tol; }

    std::array<double, 8> to_array() const;
    static MoebiusMap from_array(const std::array<double, 8>& v);
};

MoebiusMap compose(const MoebiusMap& g1, const MoebiusMap& g2);
inline MoebiusMap operator*(const MoebiusMap& g1, const MoebiusMap& g2) { return compose(g1, g2); }

// conj(M) applied entrywise: the map z -> conj(M(conj z)).
MoebiusMap conjugate_entries(const MoebiusMap& m);

struct Act3 {
    HPoint3 point;
    double jacobian;
};

Act3 act3d(const MoebiusMap& g, HPoint3 Z);

struct Act3Derivatives {
    cplx dz_dz, dz_dzbar, dz_dt;
    cplx dt_dz;  // dt/dz; dt/dzbar is its conjugate
    double dt_dt;
};

Act3Derivatives act3d_derivatives(const MoebiusMap& g, HPoint3 Z);

enum class MapTag { identity, parabolic, elliptic, hyperbolic, loxodromic };

std::string to_string(MapTag t);

struct MapClass {
    MapTag tag = MapTag::identity;
    std::vector<SpherePoint> fixed_points;  // attracting first
    cplx multiplier{1.0};                   // derivative at the repelling fixed point
};

MapClass classify(const MoebiusMap& g, double tol = 1e-10);

struct HolomorphicSampler {
    std::function<cplx(cplx)> f;
    std::function<cplx(cplx)> d1, d2, d3;  // optional
};

struct CriticalPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Contour radius used when derivatives are not supplied.
cplx schwarzian(const HolomorphicSampler& s, cplx z, double contour_radius = 0.0);

// Derivatives f', f'', f''' by trapezoidal Cauchy integrals on a circle.
std::array<cplx, 3> contour_derivatives(const std::function<cplx(cplx)>& f, cplx z, double r, int n = 48);

HolomorphicSampler sampler_of(const MoebiusMap& m);

}  // namespace lv
