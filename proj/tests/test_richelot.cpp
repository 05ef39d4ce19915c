#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "g2k/richelot.hpp"

using namespace g2k;

namespace {

std::mt19937_64 rng(777);

cplx rand_cplx(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return scale * cplx(u(rng), u(rng));
}

/// Random sextic subordinate to three well-separated unit-ish disks.
CPoly rand_subordinate(DiskTriple& D_out) {
    std::array<cplx, 3> centers = {cplx(0.0, 0.0), cplx(4.0, 0.5), cplx(-1.0, 4.0)};
    std::vector<cplx> rts;
    for (cplx c : centers) {
        rts.push_back(c + rand_cplx(0.5));
        rts.push_back(c + rand_cplx(0.5));
    }
    for (int j = 0; j < 3; ++j) D_out[j] = Disk{centers[static_cast<size_t>(j)], 1.2, false};
    return CPoly::from_roots(1.0 + rand_cplx(0.2), rts);
}

CPoly hat_of(const std::array<CPoly, 3>& p) {
    cplx dd = delta(p[0], p[1], p[2]);
    CPoly num = bracket(p[1], p[2]) * bracket(p[2], p[0]) * bracket(p[0], p[1]);
    return num * (1.0 / (4.0 * dd));
}

}  // namespace

TEST_CASE("x^2 (x-1)^2 (x+1)^2 is a fixed point of the construction") {
    std::array<CPoly, 3> p = {CPoly::monomial(2), CPoly({1.0, -2.0, 1.0}),
                              CPoly({1.0, 2.0, 1.0})};
    CPoly f = p[0] * p[1] * p[2];
    CPoly fh = hat_of(p);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(fh[k] - f[k]) <= 1e-11 * f.scale());
}

TEST_CASE("one step preserves subordination and the degree") {
    for (int trial = 0; trial < 10; ++trial) {
        DiskTriple D;
        CPoly f = rand_subordinate(D);
        RichelotStep st = richelot_step(f, D);
        CHECK(st.f_hat.degree() == 6);
        CHECK(is_subordinate(st.f_hat, D));
        // factor l'Hopital: f = p1 p2 p3 up to roundoff
        CPoly prod = st.factors[0] * st.factors[1] * st.factors[2];
        for (int k = 0; k <= 6; ++k) CHECK(std::abs(prod[k] - f[k]) <= 1e-9 * f.scale());
    }
}

TEST_CASE("h matrix is invariant under the factor gauge torus") {
    DiskTriple D;
    CPoly f = rand_subordinate(D);
    RichelotStep st = richelot_step(f, D);
    cplx alpha = cplx(1.3, 0.4), beta = cplx(0.2, -0.8);
    cplx gamma = 1.0 / (alpha * beta);
    std::array<CPoly, 3> scaled = {st.factors[0] * alpha, st.factors[1] * beta,
                                   st.factors[2] * gamma};
    Sym2 h0 = h_matrix(st.factors), h1 = h_matrix(scaled);
    CHECK(std::abs(h0.m11 - h1.m11) <= 1e-9 * std::max(1.0, std::abs(h0.m11)));
    CHECK(std::abs(h0.m12 - h1.m12) <= 1e-9 * std::max(1.0, std::abs(h0.m12)));
    CHECK(std::abs(h0.m22 - h1.m22) <= 1e-9 * std::max(1.0, std::abs(h0.m22)));
    // delta itself is gauge invariant on the unit torus
    CHECK(std::abs(delta(scaled[0], scaled[1], scaled[2]) - st.delta_val) <=
          1e-9 * std::abs(st.delta_val));
}

TEST_CASE("tower converges quadratically") {
    for (int trial = 0; trial < 5; ++trial) {
        DiskTriple D;
        CPoly f = rand_subordinate(D);
        RichelotTower tw = iterate_tower(f, D);
        CHECK(tw.steps.size() <= 10);
        REQUIRE(!tw.gap_history.empty());
        double last = 0.0;
        for (double g : tw.gap_history.back()) last = std::max(last, g);
        CHECK(last < 5e-7);  // root-gap measurement floors near sqrt(eps)

        // fitted slope of log(gap_{n+1}) vs log(gap_n) near 2 on the usable range
        std::vector<double> lg;
        for (const auto& gaps : tw.gap_history) {
            double g = std::max({gaps[0], gaps[1], gaps[2]});
            if (g > 3e-7 && g < 0.5) lg.push_back(std::log(g));  // above the measurement floor
        }
        if (lg.size() < 3) continue;  // too few measurable gaps to fit a slope
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k + 1 < lg.size(); ++k) {
            num += lg[k + 1] * lg[k];
            den += lg[k] * lg[k];
        }
        double slope = num / den;
        CHECK(slope > 1.6);
        CHECK(slope < 2.4);
    }
}

TEST_CASE("limit polynomial has its double roots in the disks") {
    DiskTriple D;
    CPoly f = rand_subordinate(D);
    RichelotTower tw = iterate_tower(f, D);
    CHECK(tw.limit.n_finite() == 3);
    for (int j = 0; j < 3; ++j) CHECK(D[j].contains(tw.limit.t[static_cast<size_t>(j)]));
    CPoly g = tw.limit.poly();
    CHECK(g.degree() == 6);
}

TEST_CASE("degree-5 input grows to degree 6 after one step") {
    CPoly f = CPoly::from_roots(1.0, {0.0, 0.3, cplx(2.0, 0.2), cplx(2.2, -0.3), 6.0});
    DiskTriple D = find_disks(f);
    RichelotStep st = richelot_step(f, D);
    // the infinite root of the exterior pair generically comes back finite
    CHECK(st.f_hat.degree() == 6);
    CHECK(is_subordinate(st.f_hat, D));
    RichelotTower tw = iterate_tower(f, D);
    double last = 0.0;
    for (double g : tw.gap_history.back()) last = std::max(last, g);
    CHECK(last < 5e-7);  // root-gap measurement floors near sqrt(eps)
}

TEST_CASE("degenerate delta raises a certificate error") {
    // p and q proportional makes the coefficient matrix singular
    DiskTriple D;
    D[0] = Disk{cplx(0.0), 0.5, false};
    D[1] = Disk{cplx(0.05), 0.6, false};
    D[2] = Disk{cplx(4.0), 1.0, false};
    CHECK(!D.valid());  // overlapping disks are caught before delta is
    CHECK_THROWS_AS(richelot_step(CPoly({-1, 0, 0, 0, 0, 0, 1}), D), input_error);
}
