#ifndef G2K_DISKS_HPP
#define G2K_DISKS_HPP

#include <array>

#include "g2k/cpoly.hpp"

namespace g2k {

/// Disk on the Riemann sphere: the interior of a circle, or the exterior
/// of a circle (which contains infinity).
struct Disk {
    cplx center{0.0};
    double radius = 1.0;
    bool exterior = false;

    bool contains(const SpherePoint& p) const {
        if (p.infinite) return exterior;
        double d = std::abs(p.value - center);
        return exterior ? d > radius : d < radius;
    }
};

struct DiskTriple {
    std::array<Disk, 3> d;

    Disk& operator[](int j) { return d[static_cast<size_t>(j)]; }
    const Disk& operator[](int j) const { return d[static_cast<size_t>(j)]; }

    /// Pairwise disjoint (closed disks, with a positive margin) and at most
    /// one exterior disk.
    bool valid(double margin = 1e-6) const;
};

/// Each disk contains exactly two of the six sphere-roots of f.
bool is_subordinate(const CPoly& f, const DiskTriple& D);

/// Find a subordinating disk triple for an admissible f, or throw
/// convergence_error if the matching heuristic fails.
DiskTriple find_disks(const CPoly& f);

/// Split f = p1*p2*p3 with the roots of p_j inside disk j.  p1 and p2 are
/// monic; p3 carries the leading coefficient.  A pair containing infinity
/// yields a degree-deficient factor.
std::array<CPoly, 3> factor_by_disks(const CPoly& f, const DiskTriple& D);

}  // namespace g2k

#endif
