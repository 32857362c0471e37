#pragma once

#include "liouville/action.hpp"

#include <string>
#include <vector>

namespace lv {

// a dz + b dzbar + c dt at a point of the upper half-space
struct SpaceForm {
    cplx dz{0.0}, dzbar{0.0}, dt{0.0};
    SpaceForm operator+(const SpaceForm& o) const { return {dz + o.dz, dzbar + o.dzbar, dt + o.dt}; }
    SpaceForm operator-(const SpaceForm& o) const { return {dz - o.dz, dzbar - o.dzbar, dt - o.dt}; }
    cplx on(cplx dzv, double dtv) const { return dz * dzv + dzbar * std::conj(dzv) + dt * dtv; }
};

// volume form 1/t^3 dx dy dt
double w3_density(HPoint3 Z);
// w2 = -(i/4t^2) dz ^ dzbar = -1/(2t^2) dx ^ dy
double w2_density(HPoint3 Z);
// dx ^ dy part of (delta w2)_g = gamma^* w2 - w2, gamma = g^{-1}: J_gamma |c(gamma)|^2
double delta_w2_slice(const MoebiusMap& g, HPoint3 Z);
// (w1)_g = -(i/8) log(|ct|^2 J_gamma) (gamma''/gamma' dz - conj), gamma = g^{-1}; zero when c(gamma) = 0
SpaceForm w1_form(const MoebiusMap& g, HPoint3 Z);
// pull-back along m of a form sampled at m(Z)
SpaceForm pull_back(const SpaceForm& f, const MoebiusMap& m, HPoint3 Z);
// g1 . w1_{g2} - w1_{g1 g2} + w1_{g1}
SpaceForm delta_w1_form(const MoebiusMap& g1, const MoebiusMap& g2, HPoint3 Z);

// Point of the Epstein surface of the scaled metric 4 eps^-2 e^phi |dw|^2 over w.
HPoint3 epstein_map(const ConformalField& f, cplx w, double eps);

enum class CutoffMode { naive, epstein };
std::string to_string(CutoffMode m);
CutoffMode cutoff_from_string(const std::string& s);

struct VolumeArea {
    double eps = 0.0;
    double volume = 0.0;
    double area = 0.0;
    double difference = 0.0;  // volume - area / 2, integrated directly
    double error = 0.0;       // quadrature estimate for the difference
};

struct HolographyOptions {
    double tol = 1e-7;
    int max_cells = 20000;
};

// Hyperbolic volume of the fundamental region above the cutoff surface and the area of the
// surface piece inside it. Fuchsian groups count both half-spaces, the lower one being the
// mirror image of the upper one for the mirrored field.
VolumeArea volume_area_eps(const FundamentalPolygon& poly, const ConformalField& f, double eps, CutoffMode mode,
                           const HolographyOptions& opt = {});

struct CutoffSpec {
    CutoffMode mode = CutoffMode::epstein;
    std::vector<double> eps;

    void validate() const;
};

// y = c0 + c1 log eps + c2 eps^2 by least squares
struct LogFit {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double rms = 0.0;
};
LogFit fit_log_expansion(const std::vector<double>& eps, const std::vector<double>& y);

// Euler characteristic of the whole boundary: both surfaces for a Fuchsian group
double boundary_euler_characteristic(const FundamentalPolygon& poly);

// S - area + 4 pi chi log 2 from the two-dimensional side
struct ActionSide {
    double action = 0.0;
    double area = 0.0;
    double predicted = 0.0;
};
ActionSide predicted_einstein_hilbert(const FundamentalPolygon& poly, const ConformalField& f);

struct HolographyReport {
    CutoffMode mode = CutoffMode::epstein;
    std::vector<VolumeArea> rows;
    LogFit fit;
    double chi = 0.0;
    double expected_slope = 0.0;  // pi chi
    double slope = 0.0;
    double E = 0.0;               // -4 c0
    ActionSide action;
    double residual = 0.0;        // |E - predicted| / |E|
};

// Regularized Einstein-Hilbert action from the eps sweep, compared with the action side.
// Throws DomainError when the fitted slope misses pi chi by 5% or more.
HolographyReport regularized_action(const FundamentalPolygon& poly, const ConformalField& f, const CutoffSpec& spec,
                                    const HolographyOptions& opt = {}, bool with_action = true);

}  // namespace lv
