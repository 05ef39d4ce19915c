#ifndef G2K_QUADRATURE_HPP
#define G2K_QUADRATURE_HPP

#include <Eigen/Dense>
#include <functional>

#include "g2k/disks.hpp"

namespace g2k {

using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat23c = Eigen::Matrix<cplx, 2, 3>;

/// Contour integrals of (phi_1(x), phi_2(x)) / sqrt(f(x)) over the circle
/// enclosing disk j, for j = 0,1,2, with one consistent branch of sqrt(f)
/// across the three contours.  Requires f subordinate to D (so sqrt(f) is
/// single-valued off the disks).  The overall sign is the principal branch
/// at an automatically chosen base point.
Mat23c contour_integrals(const CPoly& f, const DiskTriple& D,
                         const std::function<cplx(cplx, int)>& numerator);

/// W(f; D): contour integrals of (1, x) dx / sqrt(f).
Mat23c quadrature_W(const CPoly& f, const DiskTriple& D);

/// E(f; D): minus the contour integrals of (rho1, rho2) dx / (4 sqrt(f)).
Mat23c quadrature_E(const CPoly& f, const DiskTriple& D);

/// 2 * integral of (dx/y, x dx/y) along a path from root a to root b of f,
/// i.e. the period of the cycle enclosing exactly these two branch points.
/// The endpoint square-root singularities are removed analytically; `bend`
/// bows the path sideways to dodge nearby roots.
Vec2c branch_cycle_period(const CPoly& f, cplx root_a, cplx root_b, double bend = 0.0);

}  // namespace g2k

#endif
