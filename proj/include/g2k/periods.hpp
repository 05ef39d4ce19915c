#ifndef G2K_PERIODS_HPP
#define G2K_PERIODS_HPP

#include <vector>

#include "g2k/quadrature.hpp"
#include "g2k/richelot.hpp"

namespace g2k {

struct PeriodData {
    Mat23c W;               // a-periods of (dx/y, x dx/y) over the three contours
    Mat23c E;               // second-kind counterparts (eta at the W columns)
    Mat2c A;                // columns 1,2 of W
    Mat2c B;                // symplectic-dual b-periods
    Mat2c etaA;             // columns 1,2 of E
    Mat2c omega;            // Riemann matrix A^{-1} B
    bool quasi_reduced = false;

    // E at every tower level: E_levels[n] belongs to the n-th curve of the
    // tower, E_levels[0] == E.  Used when evaluating along the tower.
    std::vector<Mat23c> E_levels;
};

/// Closed-form W(g; D) for a triple-double-root curve, by residues.  Column
/// order follows the disk order of g.t; an infinite t_j gets minus the sum
/// of the other columns.
Mat23c degenerate_W(const DegenerateCurve& g);

/// Closed-form E(g; D) by residues, same branch of sqrt(lead) as degenerate_W.
Mat23c degenerate_E(const DegenerateCurve& g);

/// Matrix M with E(g) = M W(g).
Mat2c degenerate_M(const DegenerateCurve& g);

/// b-period cycles: raw doubled segment integrals between a root in disk 1
/// and disk 2, and between disk 2 and disk 3.
Mat2c b_periods(const CPoly& f, const DiskTriple& D);

/// Algorithm: W from the tower limit, E by the backward recursion, b-periods
/// by quadrature, symplectic completion normalized so omega is symmetric
/// with positive definite imaginary part.
PeriodData compute_periods(const RichelotTower& tower);

/// Each of (1,0), (0,1), (1,-1) is the strict Im(omega)-norm minimizer in
/// its coset mod 2Z^2.
bool is_quasi_reduced(const Mat2c& omega);

/// Reduce z modulo the lattice spanned by the columns of A and B; returns
/// the residual and the integer coefficients found.
struct LatticeFit {
    Vec2c residual;
    std::array<int, 4> coeffs;
};
LatticeFit lattice_reduce(const Vec2c& z, const Mat2c& A, const Mat2c& B);

}  // namespace g2k

#endif
