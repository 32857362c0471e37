#pragma once

#include "liouville/moebius.hpp"

#include <map>
#include <vector>

namespace lv {

enum class GroupKind { fuchsian, schottky };

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed round disk, or the closed complement of an open disk when exterior is set.
struct Disk {
    cplx center{0.0};
    double radius = 1.0;
    bool exterior = false;

    bool contains(cplx z, double slack = 0.0) const {
        double d = std::abs(z - center);
        return exterior ? d >= radius - slack : d <= radius + slack;
    }
};

Disk image_of_disk(const MoebiusMap& m, const Disk& D);

struct CirclePair {
    cplx c1, c2;
    double r1, r2;
};

struct MarkedGroup {
    GroupKind kind = GroupKind::fuchsian;
    int genus = 2;
    std::vector<MoebiusMap> generators;
    MoebiusMap normalization;  // accumulated conjugator, generators = N g N^{-1}

    std::vector<cplx> vertices;  // Fuchsian: 4g polygon vertices in U, counterclockwise
    std::vector<Disk> disks;     // Schottky: D_1, D'_1, D_2, D'_2, ...

    const MoebiusMap& alpha(int k) const { return generators.at(2 * (k - 1)); }
    const MoebiusMap& beta(int k) const { return generators.at(2 * (k - 1) + 1); }
    // alpha_k beta_k alpha_k^{-1} beta_k^{-1}
    MoebiusMap commutator(int k) const;
    const MoebiusMap& schottky(int k) const { return generators.at(k - 1); }
    // product of the commutators; identity for a surface group, unused for Schottky groups
    MoebiusMap relation() const;
};

MarkedGroup build_fuchsian(int genus);
MarkedGroup normalize(const MarkedGroup& g);
MarkedGroup conjugate(const MarkedGroup& g, const MoebiusMap& M);
MarkedGroup build_schottky(const std::vector<CirclePair>& pairs);
MarkedGroup conjugate_infinity_to_limit_set(const MarkedGroup& g);

std::vector<CirclePair> default_schottky_pairs();

struct GroupWord {
    std::vector<int> letters;  // generator index i coded as 2i, its inverse as 2i+1
    MoebiusMap element;
};

MoebiusMap letter_matrix(const MarkedGroup& g, int letter);

// Lookup of group elements up to sign, with tolerance relative to the largest entry.
class ElementIndex {
public:
    explicit ElementIndex(double tol = 1e-10) : tol_(tol) {}
    int find(const MoebiusMap& m) const;
    void insert(const MoebiusMap& m, int id);

private:
    static double key(const MoebiusMap& m);
    static double scale(const MoebiusMap& m);
    double tol_;
    std::multimap<double, std::pair<MoebiusMap, int>> map_;
};

std::vector<GroupWord> enumerate(const MarkedGroup& g, int max_len, double tol = 1e-10);

// Breadth-first enumeration that only keeps (and extends) elements accepted by keep.
std::vector<GroupWord> enumerate_near(const MarkedGroup& g, const std::function<bool(const MoebiusMap&)>& keep,
                                      int max_len, double tol = 1e-10);

}  // namespace lv
