#ifndef G2K_RICHELOT_HPP
#define G2K_RICHELOT_HPP

#include <array>
#include <vector>

#include "g2k/disks.hpp"

namespace g2k {

/// Symmetric 2x2 complex matrix stored as (m11, m12, m22).
struct Sym2 {
    cplx m11{0.0}, m12{0.0}, m22{0.0};

    /// z^T M z for z in C^2.
    cplx quad(cplx z1, cplx z2) const {
        return m11 * z1 * z1 + 2.0 * m12 * z1 * z2 + m22 * z2 * z2;
    }
    /// (M z)_1, (M z)_2.
    std::array<cplx, 2> apply(cplx z1, cplx z2) const {
        return {m11 * z1 + m12 * z2, m12 * z1 + m22 * z2};
    }
};

struct RichelotStep {
    CPoly f;
    std::array<CPoly, 3> factors;
    cplx delta_val{0.0};
    CPoly f_hat;
    Sym2 h_matrix;
    std::array<double, 3> root_gaps{};  // delta_j(f), chordal for an exterior pair
};

/// Triple-double-root limit polynomial c (x-t1)^2 (x-t2)^2 (x-t3)^2.
struct DegenerateCurve {
    cplx lead{1.0};
    std::array<SpherePoint, 3> t;

    /// Polynomial form (degree 4 when one t_j is infinite).
    CPoly poly() const;
    int n_finite() const;
};

struct RichelotTower {
    CPoly f;
    DiskTriple disks;
    std::vector<RichelotStep> steps;
    DegenerateCurve limit;
    std::vector<std::array<double, 3>> gap_history;
};

/// mu_{jklm}(p,q,r) with p_hat = [q,r], q_hat = [r,p], r_hat = [p,q].
cplx mu_coeff(const std::array<CPoly, 3>& p, int j, int k, int l, int m);

/// Symmetric 2x2 matrix coupling the second-kind periods of f and f_hat.
Sym2 h_matrix(const std::array<CPoly, 3>& p);

/// One Richelot step subordinate to D.
RichelotStep richelot_step(const CPoly& f, const DiskTriple& D);

/// Iterate until max_j delta_j < tol; roots are rescaled to O(1) before the
/// gap test for finite disks, chordal metric is used for an exterior pair.
RichelotTower iterate_tower(const CPoly& f, const DiskTriple& D, double tol = 1e-13,
                            int max_iter = 40);

/// Root gaps per disk for a subordinate polynomial.
std::array<double, 3> disk_root_gaps(const CPoly& f, const DiskTriple& D);

}  // namespace g2k

#endif
