#ifndef G2K_ABEL_HPP
#define G2K_ABEL_HPP

#include "g2k/kleinian.hpp"

namespace g2k {

/// Point on the curve y^2 = f(x): finite (x, y), or a point at infinity
/// carrying a = y/x^3 there (a^2 = f6; a = 0 marks the single infinite
/// point of a degree-5 curve).
struct CurvePoint {
    bool infinite = false;
    cplx x{0.0}, y{0.0};
    cplx a{0.0};

    static CurvePoint finite(cplx x, cplx y) { return CurvePoint{false, x, y, 0.0}; }
    static CurvePoint at_infinity(cplx a) { return CurvePoint{true, 0.0, 0.0, a}; }
    CurvePoint conj() const {
        return infinite ? at_infinity(-a) : finite(x, -y);
    }
};

/// Residual |y^2 - f(x)| relative to the local scale (0 for infinite points
/// with a^2 = f6).
double on_curve_residual(const CPoly& f, const CurvePoint& p);

/// Unordered degree-2 divisor (P) + (Q).
struct Divisor2 {
    CurvePoint p, q;
};

using KummerVec = Vec4c;  // unit Euclidean norm

struct AbelResult {
    Vec2c z = Vec2c::Zero();
    bool sign_ambiguous = false;  // both signs pass: z is (near) 2-torsion
    double cert_residual = 0.0;   // projective distance eval_S(z) vs kummer_coords(D)
};

/// Kummer coordinates (S : S22 : S12 : S11) of the divisor class, by the
/// two-point inversion formulas; throws input_error for divisors outside
/// the generic domain (shared x with distinct y's, doubled points).
KummerVec kummer_coords(const CPoly& f, const Divisor2& D);

/// Preimages down the tower: v[0] = v0, and for each fitted step the
/// quadratic forms applied to v[n+1] reproduce v[n] projectively
/// (Newton with random restarts; nearest-preimage selection).
std::vector<KummerVec> descend_kummer(const KleinianContext& ctx, const KummerVec& v0,
                                      std::uint64_t seed = 1);

/// Closed-form inversion at the degenerate curve: roots of the Kummer
/// quadratic, then partial-fraction logarithms along a straight (or
/// midpoint-detoured) path.
Vec2c degenerate_invert(const DegenerateCurve& g, const KummerVec& vN);

/// Abel map of D, sign resolved by the wp-derivative identities; special
/// divisors are split through a random auxiliary point.
AbelResult abel_map(const KleinianContext& ctx, const Divisor2& D, std::uint64_t seed = 1);

}  // namespace g2k

#endif
