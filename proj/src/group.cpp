#include "liouville/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lv {

namespace {

cplx circumcenter(cplx p, cplx q, cplx r) {
    cplx b = q - p, c = r - p;
    double d = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
    if (std::abs(d) < 1e-300) throw DomainError("degenerate circle image");
    double bb = std::norm(b), cc = std::norm(c);
    return p + cplx((c.imag() * bb - b.imag() * cc) / d, (b.real() * cc - c.real() * bb) / d);
}

// Disk automorphism sending p to 0 and q onto the positive real axis.
MoebiusMap disk_frame(cplx p, cplx q) {
    MoebiusMap T(1.0, -p, -std::conj(p), 1.0);
    cplx w = T(q);
    cplx rot = std::polar(1.0, -0.5 * std::arg(w));
    return MoebiusMap(rot, 0.0, 0.0, 1.0 / rot) * T;
}

MoebiusMap realify(const MoebiusMap& m) {
    double worst = std::max({std::abs(m.a.imag()), std::abs(m.b.imag()), std::abs(m.c.imag()), std::abs(m.d.imag())});
    if (worst > 1e-9) throw DomainError("Fuchsian generator is not real");
    return {m.a.real(), m.b.real(), m.c.real(), m.d.real()};
}

}  // namespace

Disk image_of_disk(const MoebiusMap& m, const Disk& D) {
    cplx p[3];
    for (int k = 0; k < 3; ++k) {
        SpherePoint w = m.apply(SpherePoint::at(D.center + std::polar(D.radius, 2.0 * pi * k / 3.0)));
        if (w.infinite) throw DomainError("circle maps to a line");
        p[k] = w.z;
    }
    Disk out;
    out.center = circumcenter(p[0], p[1], p[2]);
    out.radius = std::abs(p[0] - out.center);
    SpherePoint P = m.pole();
    bool inside = P.infinite ? D.exterior : (std::abs(P.z - D.center) < D.radius) != D.exterior;
    out.exterior = inside;
    return out;
}

MoebiusMap MarkedGroup::commutator(int k) const {
    const auto& A = alpha(k);
    const auto& B = beta(k);
    return A * B * A.inverse() * B.inverse();
}

MoebiusMap MarkedGroup::relation() const {
    MoebiusMap r;
    if (kind != GroupKind::fuchsian) return r;
    for (int k = 1; k <= genus; ++k) r = r * commutator(k);
    return r;
}

MarkedGroup build_fuchsian(int genus) {
    if (genus < 2) throw ValidationError("genus must be at least 2");
    const int n = 4 * genus;
    double cot = 1.0 / std::tan(pi / n);
    double R = std::acosh(cot * cot);
    double r = std::tanh(0.5 * R);

    std::vector<cplx> w(n);
    for (int j = 0; j < n; ++j) w[j] = std::polar(r, 2.0 * pi * (j + 0.5) / n);

    MarkedGroup G;
    G.kind = GroupKind::fuchsian;
    G.genus = genus;
    const MoebiusMap cayley(cplx(0, 1), cplx(0, 1), -1.0, 1.0);
    const MoebiusMap cinv = cayley.inverse();
    auto pair_map = [&](cplx p_from, cplx q_from, cplx p_to, cplx q_to) {
        MoebiusMap m = disk_frame(p_to, q_to).inverse() * disk_frame(p_from, q_from);
        return realify(cayley * m * cinv);
    };
    for (int k = 0; k < genus; ++k) {
        int o = 4 * k;
        auto v = [&](int j) { return w[(o + j) % n]; };
        // a_k = v0->v1, b'_k = v1->v2, a'_k = v3->v2, b_k = v4->v3
        G.generators.push_back(pair_map(v(3), v(2), v(0), v(1)));
        G.generators.push_back(pair_map(v(1), v(2), v(4), v(3)));
    }
    for (auto x : w) G.vertices.push_back(cayley(x));
    return normalize(G);
}

MarkedGroup normalize(const MarkedGroup& g) {
    MapClass ca = classify(g.generators.at(0));
    if (ca.tag != MapTag::hyperbolic && ca.tag != MapTag::loxodromic)
        throw ValidationError("first generator is not hyperbolic");
    MapClass cb = classify(g.generators.at(1));
    if (cb.fixed_points.empty()) throw ValidationError("second generator has no attracting fixed point");
    SpherePoint A = ca.fixed_points[0], Rp = ca.fixed_points[1], B = cb.fixed_points[0];
    if (A.infinite || Rp.infinite || B.infinite) {
        // move to a chart where the three points are finite, then normalize there
        MoebiusMap shift(1.0, 0.0, 0.0, 1.0);
        for (double s : {0.37, -1.3, 2.9}) {
            MoebiusMap m(1.0, 0.0, 1.0, s);  // z -> z/(z+s), real
            auto fin = [&](SpherePoint p) { return !m.apply(p).infinite; };
            if (fin(A) && fin(Rp) && fin(B)) { shift = m; break; }
        }
        return normalize(conjugate(g, shift));
    }
    cplx a = A.z, r = Rp.z, b = B.z;
    // For a counterclockwise marked polygon the attracting point of beta_1 lies on the
    // negative arc of the axis of alpha_1, so real groups send it to -1 instead of 1.
    cplx target = 1.0;
    if (g.kind == GroupKind::fuchsian && ((b - r) / (b - a) * (a - r)).real() < 0.0) target = -1.0;
    cplx s = target * (b - r) / (b - a);
    MoebiusMap N(s, -s * a, 1.0, -r);
    if (g.kind == GroupKind::fuchsian) {
        cplx det = s * (a - r);
        if (std::abs(det.imag()) > 1e-9 * std::abs(det) || det.real() <= 0.0)
            throw ValidationError("normalizing map does not preserve the upper half-plane");
        N = realify(N);
    }
    return conjugate(g, N);
}

MarkedGroup conjugate(const MarkedGroup& g, const MoebiusMap& M) {
    MarkedGroup out = g;
    MoebiusMap Mi = M.inverse();
    for (auto& x : out.generators) {
        x = M * x * Mi;
        if (g.kind == GroupKind::fuchsian) x = realify(x);
    }
    for (auto& v : out.vertices) v = M(v);
    for (auto& D : out.disks) D = image_of_disk(M, D);
    out.normalization = M * g.normalization;
    return out;
}

std::vector<CirclePair> default_schottky_pairs() {
    return {{cplx(-2.0, 0.0), cplx(2.0, 0.0), 0.5, 0.5}, {cplx(-6.0, 0.0), cplx(6.0, 0.0), 0.5, 0.5}};
}

MarkedGroup build_schottky(const std::vector<CirclePair>& pairs) {
    if (pairs.size() < 2) throw ValidationError("Schottky data needs at least two circle pairs (genus >= 2)");
    MarkedGroup G;
    G.kind = GroupKind::schottky;
    G.genus = static_cast<int>(pairs.size());
    for (const auto& p : pairs) {
        if (!(p.r1 > 0.0) || !(p.r2 > 0.0)) throw ValidationError("circle radius must be positive");
        G.disks.push_back({p.c1, p.r1, false});
        G.disks.push_back({p.c2, p.r2, false});
    }
    for (size_t i = 0; i < G.disks.size(); ++i)
        for (size_t j = i + 1; j < G.disks.size(); ++j)
            if (std::abs(G.disks[i].center - G.disks[j].center) <= G.disks[i].radius + G.disks[j].radius)
                throw ValidationError("Schottky disks " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    for (const auto& p : pairs) {
        // z -> c2 - r1 r2 / (z - c1)
        MoebiusMap g(p.c2, -p.r1 * p.r2 - p.c1 * p.c2, 1.0, -p.c1);
        auto cls = classify(g);
        if (cls.tag != MapTag::loxodromic && cls.tag != MapTag::hyperbolic)
            throw ValidationError("Schottky generator is not loxodromic");
        G.generators.push_back(g);
    }
    return G;
}

MarkedGroup conjugate_infinity_to_limit_set(const MarkedGroup& g) {
    MapClass c = classify(g.generators.at(0));
    if (c.fixed_points.size() != 2) throw ValidationError("first generator is not loxodromic");
    if (c.fixed_points[0].infinite || c.fixed_points[1].infinite) return g;
    cplx qa = c.fixed_points[0].z;
    cplx qr = c.fixed_points[1].z;
    // attracting point to infinity, repelling point to 0, scaled by the gap
    double s = std::abs(qa - qr);
    return conjugate(g, MoebiusMap(s, -s * qr, 1.0, -qa));
}

MoebiusMap letter_matrix(const MarkedGroup& g, int letter) {
    const MoebiusMap& m = g.generators.at(letter / 2);
    return (letter % 2) ? m.inverse() : m;
}

double ElementIndex::key(const MoebiusMap& m) {
    static const double w[8] = {0.7548776662, 0.5698402910, 0.4301597090, 0.3247179572,
                                0.2451223338, 0.1850364, 0.1397, 0.1055};
    auto v = m.to_array();
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += w[i] * v[i];
    return s;
}

int ElementIndex::find(const MoebiusMap& m) const {
    const double tol = tol_ * std::max(1.0, scale(m));
    const double win = 4.0 * tol;
    for (double k : {key(m), -key(m)}) {
        for (auto it = map_.lower_bound(k - win); it != map_.end() && it->first <= k + win; ++it)
            if (it->second.first.distance(m) < tol) return it->second.second;
    }
    return -1;
}

double ElementIndex::scale(const MoebiusMap& m) {
    return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

void ElementIndex::insert(const MoebiusMap& m, int id) { map_.emplace(key(m), std::make_pair(m, id)); }

std::vector<GroupWord> enumerate_near(const MarkedGroup& g, const std::function<bool(const MoebiusMap&)>& keep,
                                      int max_len, double tol) {
    std::vector<GroupWord> out{{{}, MoebiusMap::identity()}};
    ElementIndex index(tol);
    index.insert(out[0].element, 0);
    const int nl = 2 * static_cast<int>(g.generators.size());
    size_t begin = 0, end = 1;
    for (int len = 1; len <= max_len; ++len) {
        for (size_t i = begin; i < end; ++i) {
            for (int l = 0; l < nl; ++l) {
                const auto& w = out[i].letters;
                if (!w.empty() && (w.back() ^ 1) == l) continue;
                MoebiusMap m = out[i].element * letter_matrix(g, l);
                if (index.find(m) >= 0) continue;
                if (!keep(m)) continue;
                GroupWord nw{w, m};
                nw.letters.push_back(l);
                index.insert(m, static_cast<int>(out.size()));
                out.push_back(std::move(nw));
            }
        }
        begin = end;
        end = out.size();
        if (begin == end) break;
    }
    return out;
}

std::vector<GroupWord> enumerate(const MarkedGroup& g, int max_len, double tol) {
    return enumerate_near(g, [](const MoebiusMap&) { return true; }, max_len, tol);
}

}  // namespace lv
