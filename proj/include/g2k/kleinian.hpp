#ifndef G2K_KLEINIAN_HPP
#define G2K_KLEINIAN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "g2k/periods.hpp"
#include "g2k/svec.hpp"

namespace g2k {

/// Closed-form representation of the limit S-vector: each component is
/// exp(z'Mz) (alpha + sum_j coeff_j sin^2(pi l_j . z)).
struct LimitRep {
    Mat2c M = Mat2c::Zero();
    Vec4c alpha = Vec4c::Zero();
    Eigen::Matrix<cplx, 4, 3> coeff = Eigen::Matrix<cplx, 4, 3>::Zero();
    std::array<Vec2c, 3> l{};
};

/// Per-step symmetric 4x4 transfer matrices, fitted against the theta
/// oracle; residual is the worst relative fit error over the sample.
struct TransferMatrices {
    std::array<Mat4c, 4> A;  // components S, S22, S12, S11
    double residual = 0.0;
    /// Kummer quartic of the deeper level, fitted from the same oracle
    /// samples. The quadric system forward(v) ~ u has eight projective
    /// solutions but only four lie on the deeper Kummer surface; this
    /// quartic tells them apart during the descent.
    Eigen::Matrix<cplx, 35, 1> deep_quartic = Eigen::Matrix<cplx, 35, 1>::Zero();
};

/// The 35 degree-4 monomials v_i v_j v_k v_l (i<=j<=k<=l) of a CP^3 point.
Eigen::Matrix<cplx, 35, 1> quartic_monomials(const Vec4c& v);

/// Immutable evaluation context: converged tower, period data, and fitted
/// transfer matrices for every step.
struct KleinianContext {
    RichelotTower tower;
    PeriodData periods;
    std::vector<TransferMatrices> transfer;
    double cert_tol = 1e-6;
};

LimitRep limit_rep(const DegenerateCurve& g);
SVec eval_limit_rep(const LimitRep& rep, const Vec2c& z);

/// Explicit limit of the S-vector at the degenerate curve (generic three
/// finite double roots; a double root at infinity dispatches to
/// limit_S_inf).
SVec limit_S(const DegenerateCurve& g, const Vec2c& z);

/// Limit S-vector for c (x-t1)^2 (x-t2)^2 with a double root at infinity:
/// M and the l_j come from the residue-calculus periods, the coefficients
/// from matching the canonical order-2 Taylor data.
SVec limit_S_inf(cplx c, cplx t1, cplx t2, const Vec2c& z);

/// Fit the four symmetric 4x4 matrices of the step relation
/// -32 delta^3 exp(-z'hz) S_comp^(n)(z) = S^(n+1)(z)' X S^(n+1)(z)
/// by least squares against the theta oracle at both levels.
TransferMatrices fit_transfer_matrices(const RichelotStep& step, const PeriodData& periods,
                                       int level, double fit_tol = 1e-9,
                                       std::uint64_t seed = 1);

/// Build the evaluation context: iterate the tower (if not supplied),
/// compute periods, fit every step.
KleinianContext make_context(const CPoly& f, std::optional<DiskTriple> disks = std::nullopt,
                             double tower_tol = 1e-13, double fit_tol = 1e-9,
                             std::uint64_t seed = 1);

/// S-vector of f at z: limit formulas at the deepest level, then the
/// backward recursion through the fitted steps, derivatives propagated
/// analytically.
SVec eval_S(const KleinianContext& ctx, const Vec2c& z);

/// (wp22, wp12, wp11) = (S22/S, S12/S, S11/S); throws near the polar set.
std::array<cplx, 3> wp(const KleinianContext& ctx, const Vec2c& z);

/// (sigma(2z), zeta1(z), zeta2(z)) for f in Weierstrass form (degree 5,
/// leading coefficient 4), via the duplication formula.
std::array<cplx, 3> sigma_zeta(const KleinianContext& ctx, const Vec2c& z);

}  // namespace g2k

#endif
