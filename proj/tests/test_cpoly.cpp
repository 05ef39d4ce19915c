#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "g2k/cpoly.hpp"

using namespace g2k;

namespace {

std::mt19937_64 rng(12345);

cplx rand_cplx(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return scale * cplx(u(rng), u(rng));
}

CPoly rand_quadratic() {
    CPoly p({rand_cplx(), rand_cplx(), rand_cplx()});
    return p;
}

double poly_dist(const CPoly& a, const CPoly& b) {
    double d = 0.0;
    for (int k = 0; k <= 6; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

TEST_CASE("bracket of shifted squares") {
    CPoly p({1.0, -2.0, 1.0});  // (x-1)^2
    CPoly q({1.0, 2.0, 1.0});   // (x+1)^2
    CPoly br = bracket(p, q);
    // p'q - pq' = 4(x-1)(x+1)
    CHECK(std::abs(br[0] + 4.0) < 1e-14);
    CHECK(std::abs(br[1]) < 1e-14);
    CHECK(std::abs(br[2] - 4.0) < 1e-14);
}

TEST_CASE("resultant and discriminant reference values") {
    CPoly a({-1.0, 0.0, 1.0});  // x^2 - 1
    CPoly b({-4.0, 0.0, 1.0});  // x^2 - 4
    CHECK(std::abs(res(a, b) - 9.0) < 1e-14);
    CHECK(std::abs(discr(a) - 4.0) < 1e-14);  // 0^2 - 4*(-1)(1)
    CPoly x2 = CPoly::monomial(2);
    CPoly pm({1.0, -2.0, 1.0}), pp({1.0, 2.0, 1.0});
    CHECK(std::abs(delta(x2, pm, pp) - 4.0) < 1e-14);
}

TEST_CASE("discriminant of a bracket is four times the resultant") {
    for (int trial = 0; trial < 1000; ++trial) {
        CPoly p = rand_quadratic(), q = rand_quadratic();
        cplx lhs = discr(bracket(p, q));
        cplx rhs = 4.0 * res(p, q);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("bracket identities of the hat triple") {
    for (int trial = 0; trial < 1000; ++trial) {
        CPoly p = rand_quadratic(), q = rand_quadratic(), r = rand_quadratic();
        cplx dd = delta(p, q, r);
        CPoly ph = bracket(q, r), qh = bracket(r, p), rh = bracket(p, q);

        // [p_hat, q_hat] = -2 delta r (and cyclic)
        CHECK(poly_dist(bracket(ph, qh), r * (-2.0 * dd)) <=
              1e-11 * std::max(1.0, std::abs(dd) * r.scale()));
        CHECK(poly_dist(bracket(qh, rh), p * (-2.0 * dd)) <=
              1e-11 * std::max(1.0, std::abs(dd) * p.scale()));
        CHECK(poly_dist(bracket(rh, ph), q * (-2.0 * dd)) <=
              1e-11 * std::max(1.0, std::abs(dd) * q.scale()));

        // delta of the hats = -2 delta^2
        cplx dh = delta(ph, qh, rh);
        CHECK(std::abs(dh + 2.0 * dd * dd) <= 1e-11 * std::max(1.0, std::abs(dd * dd)));

        // res of two hats picks out the discriminant of the third
        cplx lhs = res(ph, qh);
        cplx rhs = dd * dd * discr(r);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("Moebius covariance of bracket, delta, res") {
    for (int trial = 0; trial < 200; ++trial) {
        cplx a = rand_cplx(), b = rand_cplx(), c = rand_cplx(), d = rand_cplx();
        if (std::abs(a * d - b * c) < 1e-2) continue;
        Moebius S(a, b, c, d);  // normalized to ad - bc = 1 inside
        CPoly p = rand_quadratic(), q = rand_quadratic(), r = rand_quadratic();

        // with unit determinant the bracket is equivariant and delta, res invariant
        CPoly lhs = bracket(moebius_conjugate(S, p), moebius_conjugate(S, q));
        CPoly rhs = moebius_conjugate(S, bracket(p, q));
        CHECK(poly_dist(lhs, rhs) <= 1e-10 * std::max(1.0, rhs.scale()));

        cplx d1 = delta(moebius_conjugate(S, p), moebius_conjugate(S, q),
                        moebius_conjugate(S, r));
        CHECK(std::abs(d1 - delta(p, q, r)) <= 1e-10 * std::max(1.0, std::abs(d1)));

        cplx r1 = res(moebius_conjugate(S, p), moebius_conjugate(S, q));
        CHECK(std::abs(r1 - res(p, q)) <= 1e-10 * std::max(1.0, std::abs(r1)));
    }
}

TEST_CASE("root finding recovers known roots") {
    std::vector<cplx> want = {cplx(1.0, 0.0), cplx(-2.0, 0.5), cplx(0.0, 1.5),
                              cplx(3.0, -1.0), cplx(-0.5, -0.5), cplx(2.0, 2.0)};
    CPoly f = CPoly::from_roots(cplx(2.0, 1.0), want);
    std::vector<cplx> got = finite_roots(f);
    REQUIRE(got.size() == want.size());
    for (cplx w : want) {
        double best = 1e9;
        for (cplx g : got) best = std::min(best, std::abs(g - w));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("degree-5 polynomial has one root at infinity") {
    CPoly f = CPoly::from_roots(1.0, {0.0, 1.0, -1.0, cplx(0, 1), cplx(0, -1)});
    auto rts = roots(f);
    REQUIRE(rts.size() == 6);
    int n_inf = 0;
    for (const auto& r : rts) n_inf += r.infinite ? 1 : 0;
    CHECK(n_inf == 1);
}

TEST_CASE("chordal distance") {
    CHECK(chordal_dist(SpherePoint::finite(0.0), SpherePoint::inf()) == doctest::Approx(2.0));
    CHECK(chordal_dist(SpherePoint::finite(0.0), SpherePoint::finite(1.0)) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(chordal_dist(SpherePoint::inf(), SpherePoint::inf()) == doctest::Approx(0.0));
}

TEST_CASE("admissibility") {
    CPoly f6({-1, 0, 0, 0, 0, 0, 1});  // x^6 - 1
    CHECK(is_admissible(f6));
    CPoly f5 = CPoly::from_roots(1.0, {0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(is_admissible(f5));
    CPoly dbl = CPoly::from_roots(1.0, {0.0, 0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(!is_admissible(dbl));
    CPoly f4 = CPoly::from_roots(1.0, {0.0, 1.0, 2.0, 3.0});
    CHECK(!is_admissible(f4));
}

TEST_CASE("arithmetic guards") {
    CPoly x4 = CPoly::monomial(4);
    CHECK_THROWS_AS(x4 * x4, input_error);
    CHECK(CPoly::monomial(3)[3] == cplx(1.0));
    CHECK((CPoly::monomial(2) + CPoly::monomial(2) * cplx(-1.0)).is_zero());
}
