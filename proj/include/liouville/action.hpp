#pragma once

#include "liouville/field.hpp"

#include <string>
#include <vector>

namespace lv {

// A complex 1-form a dz + b dzbar at a point.
struct OneForm {
    cplx dz{0.0}, dzbar{0.0};
    OneForm operator+(const OneForm& o) const { return {dz + o.dz, dzbar + o.dzbar}; }
    OneForm operator-(const OneForm& o) const { return {dz - o.dz, dzbar - o.dzbar}; }
    OneForm operator*(double s) const { return {dz * s, dzbar * s}; }
    cplx on(cplx v) const { return dz * v + dzbar * std::conj(v); }
};

// pull-back of a form sampled at m(z) along m
OneForm pull_back(const OneForm& f, const MoebiusMap& m, cplx z);

// |phi_z|^2 + e^phi; the 2-form is this density times dz ^ dzbar
double omega_density(const ConformalField& f, cplx z);

// kappa_g = h''/h' dz - conj, h = g^{-1}
OneForm varkappa_form(const MoebiusMap& g, cplx z);
// theta_g = (phi - 1/2 log|h'|^2) kappa_g, h = g^{-1}
OneForm theta_form(const FieldSample& s, const MoebiusMap& g, cplx z);
// theta_g - (2 log 2 + log|c(g)|^2) kappa_g; the correction vanishes identically when c(g) = 0
OneForm theta_check_form(const FieldSample& s, const MoebiusMap& g, cplx z);
OneForm u_form(const MoebiusMap& g1, const MoebiusMap& g2, cplx z);
OneForm u_check_form(const MoebiusMap& g1, const MoebiusMap& g2, cplx z);
// integration constant of the upper half-plane potential for the pair (g1, g2) at real p
cplx eta(double p, const MoebiusMap& g1, const MoebiusMap& g2);

struct PathIntegral {
    cplx value{0.0};
    double abs_error = 0.0;
    bool converged = true;
};

PathIntegral integrate_form(const Path& path, const std::function<OneForm(cplx)>& form, double abs_tol = 1e-12);

struct TermValue {
    std::string chain;
    std::string label;
    double value = 0.0;
};

struct ActionBreakdown {
    double bulk = 0.0;
    double edge = 0.0;
    double path = 0.0;
    double total = 0.0;
    double area = 0.0;
    double imag_residue = 0.0;
    double error_budget = 0.0;
    std::vector<TermValue> terms;

    ActionBreakdown& operator+=(const ActionBreakdown& o);
};

enum class Component { upper, lower, both };
enum class LowerMode { mirror, independent };

struct ActionOptions {
    Component component = Component::upper;
    LowerMode lower_mode = LowerMode::mirror;
    double basepoint = std::numeric_limits<double>::quiet_NaN();  // default_basepoint when NaN
    double bulk_tol = 1e-10;
    double bulk_rel_tol = 1e-10;
    double path_tol = 1e-12;
    int max_cells = 60000;
    double max_field_residual = 1e-7;
};

// Action functional over the chains of the domain, using the absorbed forms theta-check and u-check.
// Fuchsian: the upper surface, the mirror surface, or their sum. Schottky: the Kleinian action S_Gamma,
// expected in a chart with infinity in the limit set.
ActionBreakdown evaluate_action(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt = {});

// Same functional assembled from theta, u and the constants eta over V (upper surface only).
ActionBreakdown evaluate_action_eta(const FundamentalPolygon& poly, const ConformalField& f, const ActionOptions& opt = {});

// Classical functional on a Schottky domain: bulk + boundary terms over C_k + 4 pi sum log|c(gamma_k)|^2,
// where generators fixing infinity contribute neither term.
ActionBreakdown classic_schottky_action(const FundamentalPolygon& poly, const ConformalField& f,
                                        const ActionOptions& opt = {});

// sum over the chain L of the integrals of kappa (upper surface); equals 4 pi i chi
cplx varkappa_pairing(const FundamentalPolygon& poly, const ChainSet& chains);

// integral of e^phi over the domain (upper surface)
double domain_area(const FundamentalPolygon& poly, const ConformalField& f, double tol = 1e-10);

// S[phi + sigma] - S[phi] from the bulk increment alone, upper surface
double variation_increment(const FundamentalPolygon& poly, const ConformalField& f, const InvariantFunction& sigma,
                           double t = 1.0, double tol = 1e-11);

// upper half-plane region mirrored into the lower half-plane
RadialRegion mirrored_region(const RadialRegion& r);

// phi(conj z) with the matching derivatives
FieldPtr mirrored_field(const FieldPtr& f);

}  // namespace lv
