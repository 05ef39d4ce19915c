#ifndef G2K_THETAREF_HPP
#define G2K_THETAREF_HPP

#include <array>

#include "g2k/periods.hpp"
#include "g2k/svec.hpp"

namespace g2k {

/// Value, gradient and Hessian of one Fourier basis element at a point.
struct ThetaEval {
    cplx val{0.0};
    Vec2c grad = Vec2c::Zero();
    Mat2c hess = Mat2c::Zero();
};

/// Truncation radius in m-space for the lattice sum: largest |m| that can
/// still contribute above 1e-18 at points with |Im z| <= im_z_bound.
int truncation_radius(const Mat2c& omega, double im_z_bound);

/// phi_rep(z) = sum over m = rep (mod 2Z^2) of c(m) exp(2 pi i m.z), with
/// c(m) = exp[(pi i / 2)(m' Omega m - rep' Omega rep)].  The coefficient
/// law comes from the quasi-periodicity functional equation
/// phi(z + Omega k) = exp(-2 pi i k' Omega k - 4 pi i k' z) phi(z).
cplx r2_basis_eval(const std::array<int, 2>& rep, const Mat2c& omega, const Vec2c& z);

/// Same sum with termwise-differentiated gradient and Hessian.
ThetaEval r2_basis_full(const std::array<int, 2>& rep, const Mat2c& omega, const Vec2c& z);

/// Reference evaluation of (S, S22, S12, S11) and first partials at tower
/// level n: push the four phi_rep through T(phi)(z) = exp(z'Mz) phi(A^-1 z)
/// with Omega_n = 2^n Omega and M from E_levels[n], then solve the 4x4
/// system matching the canonical order-2 Taylor data at 0.
SVec oracle_S_level(const PeriodData& periods, int level, const Vec2c& z);

/// oracle_S_level at the original curve (level 0).
SVec oracle_S(const PeriodData& periods, const Vec2c& z);

}  // namespace g2k

#endif
