#include "liouville/cells.hpp"

#include <algorithm>
#include <cmath>

namespace lv {

// ---------------------------------------------------------------- paths

Path Path::segment(cplx a, cplx b) {
    Path p;
    p.shape = Shape::segment;
    p.p = a;
    p.q = b;
    return p;
}

Path Path::geodesic(cplx a, cplx b) {
    Path p;
    p.shape = Shape::geodesic;
    p.p = a;
    p.q = b;
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a.real() - b.real()) <= 1e-13 * scale) {
        p.vertical = true;
        return p;
    }
    double c = (std::norm(b) - std::norm(a)) / (2.0 * (b.real() - a.real()));
    p.center = c;
    p.radius = std::abs(a - c);
    p.th0 = std::arg(a - c);
    p.th1 = std::arg(b - c);
    return p;
}

Path Path::circle(cplx c, double r, bool counterclockwise, double start_angle) {
    Path p;
    p.shape = Shape::circle;
    p.center = c;
    p.radius = r;
    p.th0 = start_angle;
    p.th1 = start_angle + (counterclockwise ? 2.0 * pi : -2.0 * pi);
    return p;
}

namespace {

void base_point(const Path& P, double s, cplx& w, cplx& dw) {
    switch (P.shape) {
        case Path::Shape::segment:
            w = P.p + s * (P.q - P.p);
            dw = P.q - P.p;
            return;
        case Path::Shape::geodesic:
            if (P.vertical) {
                double ratio = P.q.imag() / P.p.imag();
                double y = P.p.imag() * std::pow(ratio, s);
                w = cplx(P.p.real(), y);
                dw = cplx(0.0, y * std::log(ratio));
                return;
            }
            [[fallthrough]];
        case Path::Shape::circle: {
            double th = P.th0 + s * (P.th1 - P.th0);
            cplx e = std::polar(1.0, th);
            w = P.center + P.radius * e;
            dw = cplx(0.0, P.th1 - P.th0) * P.radius * e;
            return;
        }
    }
}

}  // namespace

cplx Path::at(double s) const {
    cplx w, dw;
    base_point(*this, rev ? 1.0 - s : s, w, dw);
    if (post) w = (*post)(w);
    return mirrored ? std::conj(w) : w;
}

cplx Path::deriv(double s) const {
    cplx w, dw;
    base_point(*this, rev ? 1.0 - s : s, w, dw);
    if (rev) dw = -dw;
    if (post) dw *= post->deriv(w);
    return mirrored ? std::conj(dw) : dw;
}

Path Path::transformed(const MoebiusMap& g) const {
    Path r = *this;
    MoebiusMap h = mirrored ? conjugate_entries(g) : g;
    r.post = post ? h * *post : h;
    return r;
}

Path Path::mirror() const {
    Path r = *this;
    r.mirrored = !mirrored;
    return r;
}

Path Path::reversed() const {
    Path r = *this;
    r.rev = !rev;
    return r;
}

double hyperbolic_distance(cplx a, cplx b) {
    return std::acosh(1.0 + std::norm(a - b) / (2.0 * a.imag() * b.imag()));
}

cplx hyperbolic_midpoint(cplx a, cplx b) {
    Path g = Path::geodesic(a, b);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        cplx m = g.at(mid);
        if (hyperbolic_distance(a, m) < hyperbolic_distance(m, b))
            lo = mid;
        else
            hi = mid;
    }
    return g.at(0.5 * (lo + hi));
}

// ---------------------------------------------------------------- cells

namespace {

Vec3 act_key(const MoebiusMap& g, const Vec3& v) {
    if (v[2] == 0.0) {
        SpherePoint s = g.apply(SpherePoint::at(cplx(v[0], v[1])));
        if (s.infinite) throw DomainError("cell carried through infinity");
        return lift(s.z);
    }
    auto r = act3d(g, {cplx(v[0], v[1]), v[2]});
    return {r.point.z.real(), r.point.z.imag(), r.point.t};
}

bool key_equal(const Vec3& a, const Vec3& b, double tol) {
    for (int i = 0; i < 3; ++i)
        if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
    return true;
}

cplx circumcenter(cplx a, cplx b, cplx c) {
    cplx b1 = b - a, c1 = c - a;
    double d = 2.0 * (b1.real() * c1.imag() - b1.imag() * c1.real());
    if (std::abs(d) < 1e-300) throw DomainError("degenerate circle");
    double ux = (c1.imag() * std::norm(b1) - b1.imag() * std::norm(c1)) / d;
    double uy = (b1.real() * std::norm(c1) - c1.real() * std::norm(b1)) / d;
    return a + cplx(ux, uy);
}

cplx arc_midpoint(const Path& p) {
    cplx a = p.start(), b = p.end();
    if (p.shape == Path::Shape::geodesic) {
        if (a.imag() > 0.0 && b.imag() > 0.0) return hyperbolic_midpoint(a, b);
        if (a.imag() < 0.0 && b.imag() < 0.0) return std::conj(hyperbolic_midpoint(std::conj(a), std::conj(b)));
    }
    return p.at(0.5);
}

CellPtr mirror_cell(const CellPtr& c) {
    auto out = std::make_shared<Cell>(*c);
    for (auto& k : out->key) k[1] = -k[1];
    if (c->kind == CellKind::circle) out->orient = -c->orient;
    if (c->path) out->path = c->path->mirror();
    out->label = c->label + "~";
    for (auto& [b, s] : out->boundary) b = mirror_cell(b);
    return out;
}

}  // namespace

CellPtr make_point(cplx z, const std::string& label) {
    auto c = std::make_shared<Cell>();
    c->kind = CellKind::point;
    c->dim = 0;
    c->key = {lift(z)};
    c->label = label;
    return c;
}

CellPtr make_arc(const Path& path, const std::string& label) {
    auto c = std::make_shared<Cell>();
    c->kind = CellKind::arc;
    c->dim = 1;
    cplx a = path.start(), b = path.end();
    c->key = {lift(a), lift(arc_midpoint(path)), lift(b)};
    c->label = label;
    c->boundary = {{make_point(b, label + "(1)"), 1}, {make_point(a, label + "(0)"), -1}};
    c->path = path;
    return c;
}

CellPtr make_circle(cplx center, double r, bool counterclockwise, const std::string& label) {
    auto c = std::make_shared<Cell>();
    c->kind = CellKind::circle;
    c->dim = 1;
    c->key = {lift(center), {r, 0.0, 0.0}};
    c->orient = counterclockwise ? 1 : -1;
    c->label = label;
    c->path = Path::circle(center, r, counterclockwise);
    return c;
}

CellPtr make_fiber(cplx v, const std::string& label) {
    auto c = std::make_shared<Cell>();
    c->kind = CellKind::fiber;
    c->dim = 1;
    c->key = {{v.real(), -v.imag(), 0.0}, {v.real(), 0.0, std::abs(v.imag())}, {v.real(), v.imag(), 0.0}};
    c->label = label;
    c->boundary = {{make_point(v, label + "+"), 1}, {make_point(std::conj(v), label + "-"), -1}};
    return c;
}

CellPtr make_face(const Vec3& marker, std::vector<std::pair<CellPtr, int>> boundary, const std::string& label,
                  int dim) {
    auto c = std::make_shared<Cell>();
    c->kind = dim == 3 ? CellKind::region : CellKind::face;
    c->dim = dim;
    c->key = {marker};
    c->label = label;
    c->boundary = std::move(boundary);
    return c;
}

CellPtr translate(const MoebiusMap& g, const CellPtr& c) {
    auto out = std::make_shared<Cell>(*c);
    if (c->kind == CellKind::circle) {
        cplx center(c->key[0][0], c->key[0][1]);
        double r = c->key[1][0];
        cplx w[3];
        for (int i = 0; i < 3; ++i) {
            SpherePoint s = g.apply(SpherePoint::at(center + std::polar(r, 2.0 * pi * i / 3.0)));
            if (s.infinite) throw DomainError("circle carried through infinity");
            w[i] = s.z;
        }
        cplx nc = circumcenter(w[0], w[1], w[2]);
        double cross = std::imag(std::conj(w[1] - w[0]) * (w[2] - w[0]));
        out->key = {lift(nc), {std::abs(w[0] - nc), 0.0, 0.0}};
        out->orient = c->orient * (cross > 0.0 ? 1 : -1);
    } else {
        for (auto& k : out->key) k = act_key(g, k);
    }
    if (c->path) out->path = c->path->transformed(g);
    for (auto& [b, s] : out->boundary) b = translate(g, b);
    return out;
}

int compare_cells(const Cell& a, const Cell& b, double tol) {
    if (a.kind != b.kind || a.dim != b.dim || a.key.size() != b.key.size()) return 0;
    const size_t n = a.key.size();
    if (a.kind == CellKind::circle) {
        if (!key_equal(a.key[0], b.key[0], tol) || !key_equal(a.key[1], b.key[1], tol)) return 0;
        return a.orient == b.orient ? 1 : -1;
    }
    bool fwd = true;
    for (size_t i = 0; i < n && fwd; ++i) fwd = key_equal(a.key[i], b.key[i], tol);
    if (fwd) return 1;
    if (a.kind == CellKind::arc || a.kind == CellKind::fiber) {
        bool back = true;
        for (size_t i = 0; i < n && back; ++i) back = key_equal(a.key[i], b.key[n - 1 - i], tol);
        if (back) return -1;
    }
    return 0;
}

// ---------------------------------------------------------------- ledgers

namespace {

double entry_scale(const MoebiusMap& m) {
    return std::max({1.0, std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

bool bars_equal(const BarWord& x, const BarWord& y, double tol) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i].distance(y[i]) > tol * entry_scale(x[i])) return false;
    return true;
}

}  // namespace

void Ledger::add(const CellPtr& c, const BarWord& bar, long coeff) {
    if (coeff != 0) entries.push_back({c, bar, coeff});
}

void Ledger::add(const Ledger& other, long factor) {
    for (const auto& e : other.entries) add(e.cell, e.bar, e.coeff * factor);
}

Ledger Ledger::canonical(double tol) const {
    Ledger out;
    for (const auto& e : entries) {
        if (e.coeff == 0) continue;
        bool degenerate = false;
        for (const auto& m : e.bar)
            if (m.distance(MoebiusMap::identity()) < tol * entry_scale(m)) degenerate = true;
        if (degenerate) continue;
        bool merged = false;
        for (auto& o : out.entries) {
            if (!bars_equal(o.bar, e.bar, tol)) continue;
            int s = compare_cells(*o.cell, *e.cell, tol);
            if (s == 0) continue;
            o.coeff += s * e.coeff;
            merged = true;
            break;
        }
        if (!merged) out.entries.push_back(e);
    }
    std::vector<LedgerEntry> kept;
    for (auto& e : out.entries)
        if (e.coeff != 0) kept.push_back(e);
    out.entries = std::move(kept);
    return out;
}

Ledger operator+(const Ledger& a, const Ledger& b) {
    Ledger r = a;
    r.add(b, 1);
    return r;
}

Ledger operator-(const Ledger& a, const Ledger& b) {
    Ledger r = a;
    r.add(b, -1);
    return r;
}

Ledger boundary_cells(const Ledger& x) {
    Ledger r;
    for (const auto& e : x.entries)
        for (const auto& [b, s] : e.cell->boundary) r.add(b, e.bar, e.coeff * s);
    return r;
}

Ledger boundary_group(const Ledger& x) {
    Ledger r;
    for (const auto& e : x.entries) {
        const size_t q = e.bar.size();
        if (q == 0) continue;
        r.add(translate(e.bar[0].inverse(), e.cell), BarWord(e.bar.begin() + 1, e.bar.end()), e.coeff);
        for (size_t i = 1; i < q; ++i) {
            BarWord w;
            for (size_t j = 0; j < q; ++j) {
                if (j == i - 1) {
                    w.push_back(e.bar[j] * e.bar[j + 1]);
                    ++j;
                } else {
                    w.push_back(e.bar[j]);
                }
            }
            r.add(e.cell, w, (i % 2 ? -1 : 1) * e.coeff);
        }
        r.add(e.cell, BarWord(e.bar.begin(), e.bar.end() - 1), (q % 2 ? -1 : 1) * e.coeff);
    }
    return r;
}

Ledger total_boundary(const Ledger& x) {
    Ledger r;
    for (const auto& e : x.entries) {
        Ledger one;
        one.entries.push_back(e);
        r.add(boundary_cells(one));
        r.add(boundary_group(one), e.cell->dim % 2 ? -1 : 1);
    }
    return r;
}

bool ledgers_equal(const Ledger& a, const Ledger& b, double tol) { return (a - b).is_zero(tol); }

// ---------------------------------------------------------------- polygons

namespace {

const char* fuchsian_names[4] = {"a", "bp", "ap", "b"};

// Point where the vertical line Re z = x meets a non-vertical geodesic side, if it does.
bool geodesic_crossing(const Path& side, double x, double& y) {
    if (side.vertical) return false;
    double dx = x - side.center.real();
    if (std::abs(dx) >= side.radius) return false;
    double th = std::acos(dx / side.radius);
    double lo = std::min(side.th0, side.th1), hi = std::max(side.th0, side.th1);
    if (th < lo || th >= hi) return false;
    y = side.radius * std::sin(th);
    return true;
}

std::vector<Path> polygon_sides(const std::vector<cplx>& v) {
    std::vector<Path> s;
    for (size_t j = 0; j < v.size(); ++j) s.push_back(Path::geodesic(v[j], v[(j + 1) % v.size()]));
    return s;
}

cplx disk_coordinate(cplx O, cplx z) { return (z - O) / (z - std::conj(O)); }
cplx from_disk(cplx O, cplx zeta) { return (O - std::conj(O) * zeta) / (1.0 - zeta); }

// A point of the hull of the vertices that is invariant under isometries: iterate the Euclidean
// mean of the vertices in the disk chart centred at the current guess.
cplx vertex_center(const std::vector<cplx>& v) {
    cplx O(0.0);
    for (cplx z : v) O += cplx(z.real(), 0.0);
    O /= double(v.size());
    double ymax = 0.0;
    for (cplx z : v) ymax = std::max(ymax, z.imag());
    O += cplx(0.0, ymax);
    for (int it = 0; it < 200; ++it) {
        cplx m(0.0);
        for (cplx z : v) m += disk_coordinate(O, z);
        m /= double(v.size());
        O = from_disk(O, m);
        if (std::abs(m) < 1e-15) break;
    }
    return O;
}

const Disk* outer_disk(const MarkedGroup& g) {
    for (const auto& D : g.disks)
        if (D.exterior) return &D;
    return nullptr;
}

cplx schottky_center(const MarkedGroup& g) {
    const Disk* out = outer_disk(g);
    if (!out) throw DomainError("fundamental domain contains infinity; conjugate first");
    cplx best = out->center;
    double best_d = -1.0;
    const int n = 80;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            cplx z = out->center + out->radius * cplx(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
            double d = out->radius - std::abs(z - out->center);
            if (d <= 0.0) continue;
            for (const auto& D : g.disks)
                if (!D.exterior) d = std::min(d, std::abs(z - D.center) - D.radius);
            if (d > best_d) {
                best_d = d;
                best = z;
            }
        }
    }
    return best;
}

}  // namespace

const PolygonEdge& FundamentalPolygon::edge(const std::string& name, int k) const {
    std::string full = name + std::to_string(k);
    for (const auto& e : edges)
        if (e.label == full) return e;
    throw std::out_of_range("no edge " + full);
}

bool FundamentalPolygon::contains(cplx z) const {
    if (kind == GroupKind::schottky) {
        for (const auto& D : group.disks) {
            double d = std::abs(z - D.center);
            if (D.exterior ? d >= D.radius : d <= D.radius) return false;
        }
        return true;
    }
    if (z.imag() <= 0.0) return false;
    int crossings = 0;
    for (const auto& s : polygon_sides(vertices)) {
        double y;
        if (geodesic_crossing(s, z.real(), y) && y > z.imag()) ++crossings;
    }
    return crossings % 2 == 1;
}

std::vector<std::array<double, 2>> FundamentalPolygon::vertical_section(double x) const {
    std::vector<std::array<double, 2>> out;
    if (kind == GroupKind::schottky) {
        const Disk* o = outer_disk(group);
        if (!o) throw DomainError("fundamental domain contains infinity; conjugate first");
        double dx = x - o->center.real();
        if (std::abs(dx) >= o->radius) return out;
        double h = std::sqrt(o->radius * o->radius - dx * dx);
        std::vector<std::array<double, 2>> holes;
        for (const auto& D : group.disks) {
            if (D.exterior) continue;
            double e = x - D.center.real();
            if (std::abs(e) >= D.radius) continue;
            double k = std::sqrt(D.radius * D.radius - e * e);
            holes.push_back({D.center.imag() - k, D.center.imag() + k});
        }
        std::sort(holes.begin(), holes.end());
        double lo = o->center.imag() - h;
        for (const auto& H : holes) {
            if (H[0] > lo) out.push_back({lo, H[0]});
            lo = std::max(lo, H[1]);
        }
        double hi = o->center.imag() + h;
        if (hi > lo) out.push_back({lo, hi});
        return out;
    }
    std::vector<double> ys;
    for (const auto& s : polygon_sides(vertices)) {
        double y;
        if (geodesic_crossing(s, x, y)) ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    for (size_t i = 0; i + 1 < ys.size(); i += 2) out.push_back({ys[i], ys[i + 1]});
    return out;
}

double FundamentalPolygon::x_min() const {
    if (kind == GroupKind::schottky) {
        const Disk* o = outer_disk(group);
        if (!o) throw DomainError("unbounded fundamental domain");
        return o->center.real() - o->radius;
    }
    double m = vertices[0].real();
    for (cplx v : vertices) m = std::min(m, v.real());
    return m;
}

double FundamentalPolygon::x_max() const {
    if (kind == GroupKind::schottky) {
        const Disk* o = outer_disk(group);
        if (!o) throw DomainError("unbounded fundamental domain");
        return o->center.real() + o->radius;
    }
    double m = vertices[0].real();
    for (cplx v : vertices) m = std::max(m, v.real());
    return m;
}

RadialRegion FundamentalPolygon::quadrature_region() const {
    RadialRegion reg;
    const cplx O = interior;
    if (kind == GroupKind::schottky) {
        const Disk* o = outer_disk(group);
        if (!o) throw DomainError("unbounded fundamental domain");
        struct Hole {
            cplx d;
            double r;
        };
        std::vector<Hole> holes;
        for (const auto& D : group.disks) {
            if (D.exterior) continue;
            holes.push_back({D.center - O, D.radius});
            double phi = std::arg(D.center - O), w = std::asin(D.radius / std::abs(D.center - O));
            for (double a : {phi - w, phi + w}) {
                a = std::fmod(a, 2.0 * pi);
                if (a < 0) a += 2.0 * pi;
                reg.angle_breaks.push_back(a);
            }
        }
        std::sort(reg.angle_breaks.begin(), reg.angle_breaks.end());
        cplx d0 = o->center - O;
        double r0 = o->radius;
        reg.chart = [O](cplx zeta) { return O + zeta; };
        reg.jacobian = [](cplx) { return 1.0; };
        reg.radial = [holes, d0, r0](double psi, std::vector<std::array<double, 2>>& out) {
            cplx u = std::polar(1.0, psi);
            double B = std::real(std::conj(d0) * u);
            double rmax = B + std::sqrt(std::max(0.0, B * B - std::norm(d0) + r0 * r0));
            std::vector<std::array<double, 2>> cut;
            for (const auto& h : holes) {
                double b = std::real(std::conj(h.d) * u);
                double disc = b * b - std::norm(h.d) + h.r * h.r;
                if (disc <= 0.0) continue;
                double s = std::sqrt(disc);
                cut.push_back({b - s, b + s});
            }
            std::sort(cut.begin(), cut.end());
            double lo = 0.0;
            for (const auto& c : cut) {
                if (c[0] > lo) out.push_back({lo, std::min(c[0], rmax)});
                lo = std::max(lo, c[1]);
            }
            if (rmax > lo) out.push_back({lo, rmax});
        };
        reg.angle_sigmoid = 2;
        return reg;
    }

    struct Side {
        double a0, span;
        cplx c;
        double rho;
    };
    std::vector<Side> sides;
    const size_t n = vertices.size();
    for (size_t j = 0; j < n; ++j) {
        cplx p = vertices[j], q = vertices[(j + 1) % n];
        cplx m = hyperbolic_midpoint(p, q);
        cplx zp = disk_coordinate(O, p), zq = disk_coordinate(O, q), zm = disk_coordinate(O, m);
        cplx c = circumcenter(zp, zm, zq);
        double a0 = std::arg(zp), a1 = std::arg(zq);
        double span = std::fmod(a1 - a0 + 4.0 * pi, 2.0 * pi);
        if (a0 < 0) a0 += 2.0 * pi;
        sides.push_back({a0, span, c, std::abs(zp - c)});
        reg.angle_breaks.push_back(a0);
    }
    std::sort(reg.angle_breaks.begin(), reg.angle_breaks.end());
    reg.chart = [O](cplx zeta) { return from_disk(O, zeta); };
    const double y0 = O.imag();
    reg.jacobian = [y0](cplx zeta) { return 4.0 * y0 * y0 / std::pow(std::norm(1.0 - zeta), 2); };
    reg.radial = [sides](double psi, std::vector<std::array<double, 2>>& out) {
        cplx u = std::polar(1.0, psi);
        const Side* best = nullptr;
        double best_gap = 1e300;
        for (const auto& s : sides) {
            double off = std::fmod(psi - s.a0 + 4.0 * pi, 2.0 * pi);
            double gap = off <= s.span ? 0.0 : std::min(off - s.span, 2.0 * pi - off);
            if (gap < best_gap) {
                best_gap = gap;
                best = &s;
            }
        }
        double B = std::real(std::conj(best->c) * u);
        double r = B - std::sqrt(std::max(0.0, B * B - (std::norm(best->c) - best->rho * best->rho)));
        out.push_back({0.0, r});
    };
    return reg;
}

namespace {

void fill_fuchsian(FundamentalPolygon& P) {
    const int g = P.group.genus;
    const int n = 4 * g;
    auto v = [&](int j) { return P.vertices[((j % n) + n) % n]; };
    P.edges.clear();
    std::vector<std::pair<CellPtr, int>> bd;
    for (int k = 1; k <= g; ++k) {
        int o = 4 * (k - 1);
        Path paths[4] = {Path::geodesic(v(o), v(o + 1)), Path::geodesic(v(o + 1), v(o + 2)),
                         Path::geodesic(v(o + 3), v(o + 2)), Path::geodesic(v(o + 4), v(o + 3))};
        const int sign[4] = {1, 1, -1, -1};
        for (int i = 0; i < 4; ++i) {
            std::string label = fuchsian_names[i] + std::to_string(k);
            auto cell = make_arc(paths[i], label);
            P.edges.push_back({label, paths[i], cell});
            bd.push_back({cell, sign[i]});
        }
    }
    P.interior = vertex_center(P.vertices);
    P.face = make_face(lift(P.interior), bd, "F", 2);
}

}  // namespace

FundamentalPolygon build_polygon(const MarkedGroup& g) {
    FundamentalPolygon P;
    P.kind = g.kind;
    P.group = g;
    if (g.kind == GroupKind::fuchsian) {
        P.vertices = g.vertices;
        fill_fuchsian(P);
        return P;
    }
    std::vector<std::pair<CellPtr, int>> bd;
    for (int k = 1; k <= g.genus; ++k) {
        for (int j = 0; j < 2; ++j) {
            const Disk& D = g.disks.at(2 * (k - 1) + j);
            std::string label = (j == 0 ? "C" : "Cp") + std::to_string(k);
            auto cell = make_circle(D.center, D.radius, D.exterior, label);
            P.edges.push_back({label, *cell->path, cell});
            bd.push_back({cell, 1});
        }
    }
    P.interior = outer_disk(g) ? schottky_center(g) : cplx(0.0);
    P.face = make_face(lift(P.interior), bd, "F", 2);
    return P;
}

FundamentalPolygon alternative_domain(const FundamentalPolygon& poly, cplx shift) {
    if (poly.kind != GroupKind::fuchsian) throw ValidationError("alternative domains are built for Fuchsian groups");
    const MarkedGroup& G = poly.group;
    const int g = G.genus, n = 4 * g;
    cplx x0 = poly.vertices[0] + shift;
    if (x0.imag() <= 0.0) throw ValidationError("base vertex leaves the upper half-plane");
    // B_g = x0, B_{k-1} = gamma_k B_k
    std::vector<cplx> B(g + 1);
    B[g] = x0;
    for (int k = g; k >= 1; --k) B[k - 1] = G.commutator(k)(B[k]);
    FundamentalPolygon P = poly;
    P.vertices.assign(n, 0.0);
    for (int k = 1; k <= g; ++k) {
        int o = 4 * (k - 1);
        MoebiusMap ai = G.alpha(k).inverse(), bi = G.beta(k).inverse();
        P.vertices[o] = B[k - 1];
        P.vertices[o + 1] = bi(B[k]);
        P.vertices[o + 2] = ai(bi(B[k]));
        P.vertices[o + 3] = ai(B[k - 1]);
    }
    P.group.vertices = P.vertices;
    fill_fuchsian(P);
    return P;
}

double vertex_relation_residual(const FundamentalPolygon& poly) {
    if (poly.kind != GroupKind::fuchsian) return 0.0;
    const MarkedGroup& G = poly.group;
    const int n = 4 * G.genus;
    auto v = [&](int j) { return poly.vertices[((j % n) + n) % n]; };
    double r = 0.0;
    for (int k = 1; k <= G.genus; ++k) {
        int o = 4 * (k - 1);
        r = std::max(r, std::abs(G.alpha(k)(v(o + 3)) - v(o)));
        r = std::max(r, std::abs(G.alpha(k)(v(o + 2)) - v(o + 1)));
        r = std::max(r, std::abs(G.beta(k)(v(o + 1)) - v(o + 4)));
        r = std::max(r, std::abs(G.beta(k)(v(o + 2)) - v(o + 3)));
        r = std::max(r, std::abs(G.commutator(k)(v(o + 4)) - v(o)));
    }
    return r;
}

std::vector<double> vertex_angles(const FundamentalPolygon& poly) {
    std::vector<double> out;
    const size_t n = poly.vertices.size();
    for (size_t j = 0; j < n; ++j) {
        cplx v = poly.vertices[j];
        cplx next = Path::geodesic(v, poly.vertices[(j + 1) % n]).deriv(0.0);
        cplx prev = Path::geodesic(v, poly.vertices[(j + n - 1) % n]).deriv(0.0);
        double a = std::arg(prev / next);
        if (a < 0) a += 2.0 * pi;
        out.push_back(a);
    }
    return out;
}

bool edges_simple(const FundamentalPolygon& poly) {
    if (poly.kind != GroupKind::fuchsian) return true;
    auto sides = polygon_sides(poly.vertices);
    const size_t n = sides.size();
    auto on_arc = [](const Path& s, cplx z) {
        double th = std::arg(z - s.center);
        double lo = std::min(s.th0, s.th1), hi = std::max(s.th0, s.th1);
        return th > lo && th < hi;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Path &s = sides[i], &t = sides[j];
            if (s.vertical || t.vertical) continue;
            double c1 = s.center.real(), c2 = t.center.real();
            if (std::abs(c1 - c2) < 1e-15) continue;
            double x = (s.radius * s.radius - t.radius * t.radius + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
            double y2 = s.radius * s.radius - (x - c1) * (x - c1);
            if (y2 <= 0.0) continue;
            cplx z(x, std::sqrt(y2));
            if (on_arc(s, z) && on_arc(t, z)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- chains

Ledger ChainSet::sigma() const { return F + L - V; }

ChainSet chains_2d(const FundamentalPolygon& poly, double p) {
    ChainSet C;
    C.p = p;
    C.F.add(poly.face, {}, 1);
    const MarkedGroup& G = poly.group;
    const int g = G.genus;
    if (poly.kind == GroupKind::schottky) {
        for (int k = 1; k <= g; ++k) C.L.add(poly.edge("C", k).cell, {G.schottky(k).inverse()}, -1);
        return C;
    }
    const int n = 4 * g;
    auto vertex = [&](int j) { return poly.vertices[((j % n) + n) % n]; };
    for (int k = 1; k <= g; ++k) {
        C.L.add(poly.edge("b", k).cell, {G.beta(k)}, 1);
        C.L.add(poly.edge("a", k).cell, {G.alpha(k)}, -1);
    }
    // b_k(0) = v_{4k}, a_k(0) = v_{4(k-1)} = b_{k-1}(0), with b_0(0) = b_g(0)
    auto bpoint = [&](int k) { return vertex(4 * k); };
    auto seg = [&](int k) { return make_arc(Path::segment(p, bpoint(k == 0 ? g : k)), "P" + std::to_string(k)); };
    auto base = make_point(p, "p");
    auto put = [&](int k, const BarWord& bar, long coeff) {
        C.V.add(make_point(bpoint(k == 0 ? g : k), "b" + std::to_string(k) + "(0)"), bar, coeff);
        C.W.add(seg(k), bar, coeff);
        C.U.add(base, bar, coeff);
    };
    for (int k = 1; k <= g; ++k) {
        MoebiusMap a = G.alpha(k), b = G.beta(k), ci = G.commutator(k).inverse();
        put(k - 1, {a, b}, 1);
        put(k, {b, a}, -1);
        put(k, {ci, a * b}, 1);
    }
    for (int k = 1; k <= g - 1; ++k) {
        MoebiusMap w;
        for (int j = g; j >= k + 1; --j) w = w * G.commutator(j).inverse();
        put(g, {w, G.commutator(k).inverse()}, -1);
    }
    return C;
}

ChainSet mirror_chains(const ChainSet& c) {
    auto mirror = [](const Ledger& x) {
        Ledger r;
        for (const auto& e : x.entries) r.add(mirror_cell(e.cell), e.bar, e.coeff);
        return r;
    };
    ChainSet m;
    m.p = c.p;
    m.F = mirror(c.F);
    m.L = mirror(c.L);
    m.V = mirror(c.V);
    m.W = mirror(c.W);
    m.U = mirror(c.U);
    return m;
}

double default_basepoint(const FundamentalPolygon& poly) {
    std::vector<double> orbit;
    for (const auto& w : enumerate(poly.group, 3)) {
        SpherePoint s = w.element.image_of_infinity();
        if (!s.infinite) orbit.push_back(s.z.real());
    }
    double lo = poly.x_min() - 1.0, hi = poly.x_max() + 1.0;
    double best = lo, best_d = -1.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double d = 1e300;
        for (double o : orbit) d = std::min(d, std::abs(x - o));
        if (d > best_d) {
            best_d = d;
            best = x;
        }
    }
    return best;
}

// ---------------------------------------------------------------- walls

std::vector<Wall> polygon_walls(const FundamentalPolygon& poly) {
    const MarkedGroup& G = poly.group;
    std::vector<Wall> walls;
    if (poly.kind == GroupKind::schottky) {
        for (int k = 1; k <= G.genus; ++k) {
            for (int j = 0; j < 2; ++j) {
                const Disk& D = G.disks.at(2 * (k - 1) + j);
                MoebiusMap m = j == 0 ? G.schottky(k) : G.schottky(k).inverse();
                walls.push_back({D.center, D.radius, m, 2 * (k - 1) + 1 - j, poly.edges[2 * (k - 1) + j].path});
            }
        }
        return walls;
    }
    const char* names[4] = {"a", "bp", "ap", "b"};
    for (int k = 1; k <= G.genus; ++k) {
        int base = 4 * (k - 1);
        for (int i = 0; i < 4; ++i) {
            const PolygonEdge& e = poly.edge(names[i], k);
            MoebiusMap m;
            int partner = 0;
            switch (i) {
                case 0: m = G.alpha(k).inverse(); partner = base + 2; break;
                case 1: m = G.beta(k); partner = base + 3; break;
                case 2: m = G.alpha(k); partner = base; break;
                default: m = G.beta(k).inverse(); partner = base + 1; break;
            }
            walls.push_back({e.path.center, e.path.radius, m, partner, e.path});
        }
    }
    return walls;
}

namespace {

// +1 on the side of the wall facing the domain, -1 beyond it, 0 on it (relative slack)
int wall_side(const FundamentalPolygon& poly, const Wall& w, int index, cplx z) {
    const double slack = 1e-12;
    if (poly.kind == GroupKind::schottky) {
        const Disk& D = poly.group.disks.at(index);
        double d = std::abs(z - D.center) - D.radius;
        if (std::abs(d) <= slack * D.radius) return 0;
        bool outside_disk = d > 0;
        return outside_disk != D.exterior ? 1 : -1;
    }
    if (w.edge.vertical) {
        double x = w.edge.p.real();
        double s = z.real() - x, s0 = poly.interior.real() - x;
        if (std::abs(s) <= slack * std::max(1.0, std::abs(x))) return 0;
        return (s > 0) == (s0 > 0) ? 1 : -1;
    }
    double d = std::abs(z - w.center) - w.radius;
    double d0 = std::abs(poly.interior - w.center) - w.radius;
    if (std::abs(d) <= slack * w.radius) return 0;
    return (d > 0) == (d0 > 0) ? 1 : -1;
}

}  // namespace

bool reduce_to_domain(const FundamentalPolygon& poly, const std::vector<Wall>& walls, cplx z, MoebiusMap& A,
                      int max_steps) {
    A = MoebiusMap::identity();
    for (int step = 0; step < max_steps; ++step) {
        int beyond = -1;
        for (size_t i = 0; i < walls.size() && beyond < 0; ++i)
            if (wall_side(poly, walls[i], int(i), z) < 0) beyond = int(i);
        if (beyond < 0) return true;
        z = walls[beyond].pairing(z);
        A = walls[beyond].pairing * A;
    }
    return false;
}

// ---------------------------------------------------------------- three-dimensional region

bool Region3D::contains(HPoint3 Z) const {
    if (Z.t <= 0.0) return false;
    if (kind == GroupKind::fuchsian)
        return polygon.contains(cplx(Z.z.real(), std::hypot(Z.z.imag(), Z.t)));
    for (const auto& D : polygon.group.disks) {
        double d2 = std::norm(Z.z - D.center) + Z.t * Z.t;
        if (D.exterior ? d2 >= D.radius * D.radius : d2 <= D.radius * D.radius) return false;
    }
    return true;
}

Region3D region3d(const FundamentalPolygon& poly) {
    Region3D T;
    T.kind = poly.kind;
    T.polygon = poly;
    const MarkedGroup& G = poly.group;
    const int g = G.genus;

    if (poly.kind == GroupKind::schottky) {
        std::vector<std::pair<CellPtr, int>> bd{{poly.face, -1}};
        for (int k = 1; k <= g; ++k) {
            const Disk& D = G.disks.at(2 * (k - 1));
            if (D.exterior) throw DomainError("unexpected exterior disk for C_k");
            auto s = make_face({D.center.real(), D.center.imag(), D.radius}, {{poly.edge("C", k).cell, 1}},
                               "s" + std::to_string(k), 2);
            bd.push_back({s, 1});
            bd.push_back({translate(G.schottky(k), s), -1});
            T.S.add(s, {G.schottky(k).inverse()}, -1);
        }
        T.walls = polygon_walls(poly);
        cplx O = poly.interior;
        T.R.add(make_face({O.real(), O.imag(), 1e-3}, bd, "R", 3), {}, 1);
        T.sigma = chains_2d(poly, 0.0).sigma();
        return T;
    }

    ChainSet up = chains_2d(poly, 0.0);
    ChainSet down = mirror_chains(up);
    T.sigma = up.sigma() - down.sigma();
    CellPtr F2 = down.F.entries.at(0).cell;

    auto side_face = [&](const PolygonEdge& e, const std::string& label) {
        cplx m = hyperbolic_midpoint(e.path.start(), e.path.end());
        CellPtr arc = e.cell;
        CellPtr bar_arc = mirror_cell(arc);
        return make_face({m.real(), 0.0, m.imag()},
                         {{arc, 1}, {bar_arc, -1}, {make_fiber(e.path.end(), "e"), -1},
                          {make_fiber(e.path.start(), "e"), 1}},
                         label, 2);
    };

    std::vector<std::pair<CellPtr, int>> bd{{poly.face, -1}, {F2, 1}};
    for (int k = 1; k <= g; ++k) {
        auto D = side_face(poly.edge("a", k), "D" + std::to_string(k));
        auto E = side_face(poly.edge("b", k), "E" + std::to_string(k));
        bd.push_back({D, 1});
        bd.push_back({translate(G.alpha(k).inverse(), D), -1});
        bd.push_back({E, -1});
        bd.push_back({translate(G.beta(k).inverse(), E), 1});
        T.S.add(E, {G.beta(k)}, 1);
        T.S.add(D, {G.alpha(k)}, -1);
    }
    // E: the vertex chain with each point replaced by its fiber
    for (const auto& e : up.V.entries) {
        cplx v(e.cell->key[0][0], e.cell->key[0][1]);
        T.E.add(make_fiber(v, "e"), e.bar, e.coeff);
    }
    cplx O = poly.interior;
    T.R.add(make_face({O.real(), 0.0, O.imag()}, bd, "R", 3), {}, 1);

    T.walls = polygon_walls(poly);
    return T;
}

}  // namespace lv
