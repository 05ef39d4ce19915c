#ifndef G2K_CPOLY_HPP
#define G2K_CPOLY_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "g2k/errors.hpp"

namespace g2k {

using cplx = std::complex<double>;

/// Point on the Riemann sphere: a finite complex number or infinity.
struct SpherePoint {
    cplx value{0.0, 0.0};
    bool infinite = false;

    static SpherePoint inf() { return SpherePoint{cplx(0.0), true}; }
    static SpherePoint finite(cplx v) { return SpherePoint{v, false}; }

    bool operator==(const SpherePoint& o) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return value == o.value;
    }
};

/// Chordal (spherical) distance between two sphere points, range [0, 2].
double chordal_dist(const SpherePoint& a, const SpherePoint& b);

/// Complex polynomial of degree <= 6, coefficient of x^j at index j.
class CPoly {
  public:
    CPoly() : c_{} {}
    explicit CPoly(std::vector<cplx> coeffs);

    static CPoly monomial(int power, cplx coeff = 1.0);
    /// c * prod (x - r_j).  Degree = number of roots, must be <= 6.
    static CPoly from_roots(cplx lead, const std::vector<cplx>& roots);

    cplx operator[](int j) const { return c_[static_cast<size_t>(j)]; }
    cplx& operator[](int j) { return c_[static_cast<size_t>(j)]; }

    /// Largest index with coefficient exactly nonzero; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }
    cplx leading() const;

    cplx eval(cplx x) const;
    CPoly derivative() const;

    /// Max coefficient magnitude.
    double scale() const;

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;  // throws if result degree > 6
    CPoly operator*(cplx s) const;

  private:
    std::array<cplx, 7> c_;
};

/// Moebius map x -> (ax+b)/(cx+d), normalized so ad - bc = 1.
struct Moebius {
    cplx a, b, c, d;
    Moebius(cplx a_, cplx b_, cplx c_, cplx d_);
    static Moebius identity() { return Moebius(1.0, 0.0, 0.0, 1.0); }
    cplx apply(cplx x) const { return (a * x + b) / (c * x + d); }
};

/// [p,q] = p'q - pq' for degree <= 2 inputs.
CPoly bracket(const CPoly& p, const CPoly& q);

/// p1^2 - 4 p0 p2.
cplx discr(const CPoly& p);

/// Resultant of two degree <= 2 polynomials.
cplx res(const CPoly& p, const CPoly& q);

/// Determinant of the 3x3 coefficient matrix with columns p, q, r.
cplx delta(const CPoly& p, const CPoly& q, const CPoly& r);

/// (cx+d)^2 * (p o S), expanded; degree <= 2 in, degree <= 2 out.
CPoly moebius_conjugate(const Moebius& S, const CPoly& p);

/// All six sphere-roots of f: deg(f) finite roots (Aberth-Ehrlich) plus
/// (6 - deg f) copies of infinity.
std::vector<SpherePoint> roots(const CPoly& f);

/// Finite roots only, as complex numbers.
std::vector<cplx> finite_roots(const CPoly& f);

/// deg in {5,6} and all roots simple (pairwise separation above tolerance).
bool is_admissible(const CPoly& f);

}  // namespace g2k

#endif
