#pragma once

#include "liouville/group.hpp"
#include "liouville/quad.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lv {

using Vec3 = std::array<double, 3>;

inline Vec3 lift(cplx z, double t = 0.0) { return {z.real(), z.imag(), t}; }

// A parametrized curve s in [0,1] -> plane: a base shape optionally pushed through a Moebius map
// and optionally reflected in the real axis (reflection applied last).
struct Path {
    enum class Shape { segment, geodesic, circle };
    Shape shape = Shape::segment;
    cplx p{0.0}, q{0.0};        // segment / geodesic endpoints
    cplx center{0.0};           // geodesic (real center) or circle
    double radius = 0.0;
    double th0 = 0.0, th1 = 0.0;  // angles along the circle
    bool vertical = false;        // vertical geodesic
    std::optional<MoebiusMap> post;
    bool mirrored = false;
    bool rev = false;

    static Path segment(cplx a, cplx b);
    static Path geodesic(cplx a, cplx b);  // hyperbolic geodesic in the upper half-plane
    static Path circle(cplx c, double r, bool counterclockwise, double start_angle = 0.0);

    cplx at(double s) const;
    cplx deriv(double s) const;
    cplx start() const { return at(0.0); }
    cplx end() const { return at(1.0); }
    Path transformed(const MoebiusMap& g) const;
    Path mirror() const;
    Path reversed() const;
};

// Hyperbolic midpoint of the geodesic between two points of the upper half-plane.
cplx hyperbolic_midpoint(cplx a, cplx b);
double hyperbolic_distance(cplx a, cplx b);

enum class CellKind { point, arc, fiber, circle, face, region };

struct Cell;
using CellPtr = std::shared_ptr<const Cell>;

struct Cell {
    CellKind kind = CellKind::point;
    int dim = 0;
    std::vector<Vec3> key;  // equivariant fingerprint points (circle: center and a radius marker)
    int orient = 1;         // circles: +1 counterclockwise
    std::string label;
    std::vector<std::pair<CellPtr, int>> boundary;
    std::optional<Path> path;  // 1-cells in the boundary plane
};

CellPtr make_point(cplx z, const std::string& label);
CellPtr make_arc(const Path& path, const std::string& label);  // geodesic, segment or mirrored variants
CellPtr make_circle(cplx c, double r, bool counterclockwise, const std::string& label);
CellPtr make_fiber(cplx v, const std::string& label);  // semicircle in U^3 from conj(v) to v over the real axis
CellPtr make_face(const Vec3& marker, std::vector<std::pair<CellPtr, int>> boundary, const std::string& label, int dim);

CellPtr translate(const MoebiusMap& g, const CellPtr& c);
// +1 same oriented cell, -1 same cell with opposite orientation, 0 different
int compare_cells(const Cell& a, const Cell& b, double tol = 1e-9);

using BarWord = std::vector<MoebiusMap>;

struct LedgerEntry {
    CellPtr cell;
    BarWord bar;
    long coeff = 1;
};

class Ledger {
public:
    std::vector<LedgerEntry> entries;

    void add(const CellPtr& c, const BarWord& bar, long coeff);
    void add(const Ledger& other, long factor = 1);
    // merge equal terms, drop zero coefficients and bars containing the identity
    Ledger canonical(double tol = 1e-9) const;
    bool is_zero(double tol = 1e-9) const { return canonical(tol).entries.empty(); }
    size_t size() const { return entries.size(); }
};

Ledger operator-(const Ledger& a, const Ledger& b);
Ledger operator+(const Ledger& a, const Ledger& b);
Ledger boundary_cells(const Ledger& x);   // d'
Ledger boundary_group(const Ledger& x);   // d''
Ledger total_boundary(const Ledger& x);   // d' + (-1)^p d''
bool ledgers_equal(const Ledger& a, const Ledger& b, double tol = 1e-9);

struct PolygonEdge {
    std::string label;
    Path path;
    CellPtr cell;
};

struct FundamentalPolygon {
    GroupKind kind = GroupKind::fuchsian;
    MarkedGroup group;
    std::vector<cplx> vertices;  // Fuchsian, counterclockwise; v_0 = a_1(0)
    cplx interior{0.0};
    // Fuchsian, per block k (0-based): a_k, b'_k, a'_k, b_k in their labeled orientations.
    // Schottky: C_k and C'_k with the boundary orientation of F.
    std::vector<PolygonEdge> edges;
    CellPtr face;

    int genus() const { return group.genus; }
    const PolygonEdge& edge(const std::string& name, int k) const;
    bool contains(cplx z) const;
    // vertical section {Im z : Re z = x} as sorted intervals
    std::vector<std::array<double, 2>> vertical_section(double x) const;
    RadialRegion quadrature_region() const;
    double x_min() const;
    double x_max() const;
};

FundamentalPolygon build_polygon(const MarkedGroup& g);
// Fuchsian: move the base vertex b_g(0) by shift and rebuild every vertex as the same group word
// applied to it; the side pairings are unchanged.
FundamentalPolygon alternative_domain(const FundamentalPolygon& poly, cplx shift);
double vertex_relation_residual(const FundamentalPolygon& poly);
std::vector<double> vertex_angles(const FundamentalPolygon& poly);
bool edges_simple(const FundamentalPolygon& poly);

struct ChainSet {
    Ledger F, L, V, W, U;
    double p = 0.0;
    Ledger sigma() const;  // F + L - V
};

ChainSet chains_2d(const FundamentalPolygon& poly, double p);
ChainSet mirror_chains(const ChainSet& c);
double default_basepoint(const FundamentalPolygon& poly);

struct Wall {
    cplx center;
    double radius;
    MoebiusMap pairing;  // maps this wall onto the partner wall
    int partner;
    Path edge;           // boundary trace in the plane
};

// Side pairings of the domain: wall i is carried onto wall partner by pairing. For a point
// beyond wall i, pairing moves it towards the domain.
std::vector<Wall> polygon_walls(const FundamentalPolygon& poly);

// Finds A with A(z) in the closed domain by repeatedly crossing walls; returns false if
// max_steps is exhausted.
bool reduce_to_domain(const FundamentalPolygon& poly, const std::vector<Wall>& walls, cplx z, MoebiusMap& A,
                      int max_steps = 200);

struct Region3D {
    GroupKind kind = GroupKind::fuchsian;
    FundamentalPolygon polygon;
    std::vector<Wall> walls;
    Ledger R, S, E, sigma;

    bool contains(HPoint3 Z) const;
};

Region3D region3d(const FundamentalPolygon& poly);

}  // namespace lv
