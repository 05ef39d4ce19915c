// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <cstdio>
#include <random>
#include <vector>

#include "g2k/abel.hpp"
#include "g2k/thetaref.hpp"

using namespace g2k;

namespace {

std::mt19937_64 rng(20260826);
std::uniform_real_distribution<double> uni01(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;
int n_failed = 0;

void report(int number, const char* what, bool ok) {
    std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", number, what);
    if (!ok) ++n_failed;
}

cplx rand_cplx(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return scale * cplx(u(rng), u(rng));
}

CPoly rand_quadratic() { return CPoly({rand_cplx(), rand_cplx(), rand_cplx()}); }

CPoly rand_sextic(DiskTriple& D_out) {
    std::array<cplx, 3> centers = {cplx(0.0, 0.0), cplx(4.0, 0.5) + rand_cplx(0.3),
                                   cplx(-1.0, 4.0) + rand_cplx(0.3)};
    std::vector<cplx> rts;
    for (cplx c : centers) {
        rts.push_back(c + rand_cplx(0.5));
        rts.push_back(c + rand_cplx(0.5));
    }
    for (int j = 0; j < 3; ++j) D_out[j] = Disk{centers[static_cast<size_t>(j)], 1.2, false};
    return CPoly::from_roots(1.0 + rand_cplx(0.2), rts);
}

CPoly rand_quintic(DiskTriple& D_out) {
    std::vector<cplx> rts = {rand_cplx(0.5), rand_cplx(0.5), cplx(2.5, 0.0) + rand_cplx(0.5),
                             cplx(2.5, 0.0) + rand_cplx(0.5), cplx(8.0, 0.0) + rand_cplx(0.5)};
    D_out[0] = Disk{cplx(0.0, 0.0), 0.8, false};
    D_out[1] = Disk{cplx(2.5, 0.0), 0.8, false};
    D_out[2] = Disk{cplx(1.25, 0.0), 4.0, true};
    return CPoly::from_roots(1.0 + rand_cplx(0.2), rts);
}

double poly_dist(const CPoly& a, const CPoly& b) {
    double d = 0.0;
    for (int k = 0; k <= 6; ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

double mat_dist(const Mat23c& a, const Mat23c& b) { return (a - b).cwiseAbs().maxCoeff(); }

double svec_dist(const SVec& a, const SVec& b) {
    double scale = std::max(1.0, a.s.cwiseAbs().maxCoeff());
    return (a.s - b.s).cwiseAbs().maxCoeff() / scale;
}

void criterion_1() {
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        CPoly p = rand_quadratic(), q = rand_quadratic(), r = rand_quadratic();
        cplx dd = delta(p, q, r);
        CPoly ph = bracket(q, r), qh = bracket(r, p), rh = bracket(p, q);
        auto rel = [](cplx a, cplx b) {
            return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
        };
        ok = ok && rel(discr(rh), 4.0 * res(p, q)) < 1e-11;
        ok = ok && poly_dist(bracket(ph, qh), r * (-2.0 * dd)) <
                       1e-11 * std::max(1.0, std::abs(dd) * r.scale());
        ok = ok && rel(delta(ph, qh, rh), -2.0 * dd * dd) < 1e-11;
        ok = ok && rel(res(ph, qh), dd * dd * discr(r)) < 1e-11;
    }
    for (int trial = 0; trial < 200 && ok; ++trial) {
        cplx a = rand_cplx(), b = rand_cplx(), c = rand_cplx(), d = rand_cplx();
        if (std::abs(a * d - b * c) < 1e-2) continue;
        Moebius S(a, b, c, d);
        CPoly p = rand_quadratic(), q = rand_quadratic(), r = rand_quadratic();
        CPoly lhs = bracket(moebius_conjugate(S, p), moebius_conjugate(S, q));
        CPoly rhs = moebius_conjugate(S, bracket(p, q));
        ok = ok && poly_dist(lhs, rhs) < 1e-10 * std::max(1.0, rhs.scale());
        ok = ok && std::abs(delta(moebius_conjugate(S, p), moebius_conjugate(S, q),
                                  moebius_conjugate(S, r)) -
                            delta(p, q, r)) < 1e-10 * std::max(1.0, std::abs(delta(p, q, r)));
    }
    report(1, "algebraic identity suite (brackets, delta, res, Moebius)", ok);
}

void criterion_2() {
    std::array<CPoly, 3> p = {CPoly::monomial(2), CPoly({1.0, -2.0, 1.0}),
                              CPoly({1.0, 2.0, 1.0})};
    CPoly f = p[0] * p[1] * p[2];
    CPoly num = bracket(p[1], p[2]) * bracket(p[2], p[0]) * bracket(p[0], p[1]);
    CPoly fh = num * (1.0 / (4.0 * delta(p[0], p[1], p[2])));
    bool ok = poly_dist(fh, f) < 1e-11 * f.scale();

    // a single double root persists through the iteration
    for (int trial = 0; trial < 10 && ok; ++trial) {
        DiskTriple D;
        CPoly g = rand_sextic(D);
        auto rts = finite_roots(g);
        // collapse the two roots of disk 0 into a double root
        std::vector<cplx> nrts;
        cplx dbl = D[0].center + rand_cplx(0.4);
        for (cplx r : rts)
            if (!D[0].contains(SpherePoint::finite(r))) nrts.push_back(r);
        nrts.push_back(dbl);
        nrts.push_back(dbl);
        CPoly g2 = CPoly::from_roots(g.leading(), nrts);
        CPoly cur = g2;
        for (int step = 0; step < 5 && ok; ++step) {
            RichelotStep st = richelot_step(cur, D);
            cur = st.f_hat;
            ok = ok && disk_root_gaps(cur, D)[0] < 1e-6;
        }
    }
    report(2, "fixed point and double-root persistence", ok);
}

void criterion_3() {
    bool ok = true;
    int fitted = 0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        // diametric root pairs in tightly packed disks slow the contraction
        // enough that several gap measurements land between the O(1) regime
        // and the sqrt(eps) measurement floor
        std::array<cplx, 3> ctr = {cplx(0, 0), cplx(2.55, 0.2) + rand_cplx(0.1),
                                   cplx(-0.4, 2.6) + rand_cplx(0.1)};
        double r = 1.2;
        DiskTriple D;
        std::vector<cplx> rts;
        for (int j = 0; j < 3; ++j) {
            D[static_cast<size_t>(j)] = Disk{ctr[static_cast<size_t>(j)], r, false};
            double th = 2.0 * kPi * uni01(rng);
            cplx w = (0.75 + 0.2 * uni01(rng)) * r * std::polar(1.0, th);
            rts.push_back(ctr[static_cast<size_t>(j)] + w);
            rts.push_back(ctr[static_cast<size_t>(j)] - w);
        }
        CPoly f = CPoly::from_roots(cplx(1.0) + rand_cplx(0.3), rts);
        RichelotTower tw = iterate_tower(f, D);
        ok = ok && tw.steps.size() <= 10;

        std::vector<double> lg;
        for (const auto& gaps : tw.gap_history) {
            double g = std::max({gaps[0], gaps[1], gaps[2]});
            if (g > 3e-7 && g < 3.0) lg.push_back(std::log(g));
        }
        size_t n = lg.size();
        if (n >= 4) lg.erase(lg.begin());  // first step is pre-asymptotic
        n = lg.size();
        if (n < 3) continue;
        ++fitted;
        // least squares slope of (log d_n, log d_{n+1}) pairs
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double m = static_cast<double>(n - 1);
        for (size_t k = 0; k + 1 < n; ++k) {
            sx += lg[k];
            sy += lg[k + 1];
            sxx += lg[k] * lg[k];
            sxy += lg[k] * lg[k + 1];
        }
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        ok = ok && slope > 1.9 && slope < 2.1;
    }
    ok = ok && fitted >= 25;
    report(3, "quadratic convergence of the tower (exponent 2.0 +- 0.1)", ok);
}

struct CurveData {
    CPoly f;
    DiskTriple D;
    KleinianContext ctx;
};

void criterion_4(const std::vector<CurveData>& pool) {
    bool ok = true;
    for (const auto& cd : pool) {
        if (!ok) break;
        const RichelotStep& st = cd.ctx.tower.steps.front();
        Mat23c Wf = quadrature_W(cd.f, cd.D);
        Mat23c Wh = quadrature_W(st.f_hat, cd.D);
        double dW = std::min(mat_dist(Wf, Wh), mat_dist(Wf, -Wh));
        ok = ok && dW < 1e-8 * std::max(1.0, Wf.cwiseAbs().maxCoeff());

        double sign = mat_dist(Wf, Wh) <= mat_dist(Wf, -Wh) ? 1.0 : -1.0;
        Mat23c Ef = quadrature_E(cd.f, cd.D);
        Mat23c Eh = quadrature_E(st.f_hat, cd.D);
        Mat2c H;
        H << st.h_matrix.m11, st.h_matrix.m12, st.h_matrix.m12, st.h_matrix.m22;
        ok = ok && mat_dist(Ef, 2.0 * sign * Eh + H * Wf) <
                       1e-8 * std::max(1.0, Ef.cwiseAbs().maxCoeff());
    }
    report(4, "period invariance and second-kind recursion vs quadrature", ok);
}

void criterion_5(const std::vector<CurveData>& pool) {
    bool ok = true;
    for (const auto& cd : pool) {
        const Mat2c& om = cd.ctx.periods.omega;
        ok = ok && std::abs(om(0, 1) - om(1, 0)) < 1e-9;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(om.imag());
        ok = ok && es.eigenvalues()(0) > 0.0;
        ok = ok && cd.ctx.periods.quasi_reduced;
    }
    report(5, "Riemann matrix symmetric, Im > 0, quasi-reduced", ok);
}

void criterion_6(const std::vector<CurveData>& pool) {
    bool ok = true;
    for (const auto& cd : pool) {
        for (const auto& tm : cd.ctx.transfer) ok = ok && tm.residual < 1e-9;
        // hold-out reproduction at fresh points, per step
        double wmin = cd.ctx.periods.W.colwise().norm().minCoeff();
        for (size_t n = 0; n < cd.ctx.transfer.size() && ok; ++n) {
            const RichelotStep& st = cd.ctx.tower.steps[n];
            cplx d3 = st.delta_val * st.delta_val * st.delta_val;
            for (int trial = 0; trial < 3; ++trial) {
                Vec2c z(0.5 * wmin * rand_cplx(0.5), 0.5 * wmin * rand_cplx(0.5));
                SVec lo = oracle_S_level(cd.ctx.periods, static_cast<int>(n), z);
                SVec hi = oracle_S_level(cd.ctx.periods, static_cast<int>(n) + 1, z);
                cplx pref = -std::exp(st.h_matrix.quad(z(0), z(1))) / (32.0 * d3);
                for (int comp = 0; comp < 4; ++comp) {
                    Vec4c Xs = cd.ctx.transfer[n].A[static_cast<size_t>(comp)] * hi.s;
                    cplx pred = pref * (hi.s.array() * Xs.array()).sum();
                    double scale = std::max(1.0, lo.s.cwiseAbs().maxCoeff());
                    ok = ok && std::abs(pred - lo.s(comp)) < 1e-8 * scale;
                }
            }
        }
    }
    report(6, "transfer-relation fit residuals and hold-out reproduction", ok);
}

void criterion_7(const std::vector<CurveData>& pool) {
    bool ok = true;
    double worst = 0.0;
    for (const auto& cd : pool) {
        double box = 0.5 * cd.ctx.periods.W.colwise().norm().minCoeff();
        for (int trial = 0; trial < 100 / static_cast<int>(pool.size()) + 1; ++trial) {
            Vec2c z(rand_cplx(box), rand_cplx(box));
            worst = std::max(worst, svec_dist(eval_S(cd.ctx, z), oracle_S(cd.ctx.periods, z)));
        }
    }
    ok = worst < 1e-7;
    std::printf("      max eval_S / oracle_S discrepancy: %.3e\n", worst);
    report(7, "oracle equivalence of the two evaluation paths", ok);
}

void criterion_8(const std::vector<CurveData>& pool) {
    bool ok = true;
    const CurveData& cd = pool.front();
    std::vector<Vec2c> shifts;
    std::vector<Vec2c> etas;
    for (int col = 0; col < 3; ++col) {
        shifts.push_back(cd.ctx.periods.W.col(col));
        etas.push_back(cd.ctx.periods.E.col(col));
    }
    shifts.push_back(cd.ctx.periods.W.col(0) - 2.0 * cd.ctx.periods.W.col(2));
    etas.push_back(cd.ctx.periods.E.col(0) - 2.0 * cd.ctx.periods.E.col(2));
    shifts.push_back(cd.ctx.periods.W.col(1) + cd.ctx.periods.W.col(2));
    etas.push_back(cd.ctx.periods.E.col(1) + cd.ctx.periods.E.col(2));

    for (size_t k = 0; k < shifts.size() && ok; ++k) {
        Vec2c z(rand_cplx(0.3), rand_cplx(0.3));
        const Vec2c &w = shifts[k], &eta = etas[k];
        cplx factor = std::exp(2.0 * ((eta.array() * (z + 0.5 * w).array()).sum()));
        SVec a1 = eval_S(cd.ctx, z + w), b1 = eval_S(cd.ctx, z);
        SVec a2 = oracle_S(cd.ctx.periods, z + w), b2 = oracle_S(cd.ctx.periods, z);
        for (int comp = 0; comp < 4; ++comp) {
            double s1 = std::max(1.0, std::abs(factor * b1.s(comp)));
            ok = ok && std::abs(a1.s(comp) - factor * b1.s(comp)) < 1e-7 * s1;
            double s2 = std::max(1.0, std::abs(factor * b2.s(comp)));
            ok = ok && std::abs(a2.s(comp) - factor * b2.s(comp)) < 1e-7 * s2;
        }
    }
    report(8, "quasi-periodicity with the eta automorphy factor, both paths", ok);
}

void criterion_9() {
    bool ok = true;
    DegenerateCurve g;
    g.lead = cplx(1.1, 0.25);
    g.t = {SpherePoint::finite(cplx(0.2, 0.1)), SpherePoint::finite(cplx(2.8, -0.4)),
           SpherePoint::finite(cplx(-1.9, 1.2))};

    SVec at0 = limit_S(g, Vec2c::Zero());
    ok = ok && at0.s.head<3>().cwiseAbs().maxCoeff() < 1e-9 && std::abs(at0.s(3) - 1.0) < 1e-9;

    double h = 3e-4;  // Taylor data by second differences, O(h^2) ~ 1e-7 headroom
    auto val = [&](double a, double b) { return limit_S(g, Vec2c(cplx(a), cplx(b))).s; };
    Vec4c d11 = (val(h, 0) - 2.0 * val(0, 0) + val(-h, 0)) / (h * h);
    Vec4c d12 = (val(h, h) - val(h, -h) - val(-h, h) + val(-h, -h)) / (4.0 * h * h);
    Vec4c d22 = (val(0, h) - 2.0 * val(0, 0) + val(0, -h)) / (h * h);
    ok = ok && std::abs(d11(0) - 2.0) < 1e-5 && std::abs(d12(1) - 2.0) < 1e-5 &&
         std::abs(d22(2) + 2.0) < 1e-5;

    Mat23c W = degenerate_W(g), E = degenerate_E(g);
    for (int col = 0; col < 3 && ok; ++col) {
        Vec2c z(rand_cplx(0.2), rand_cplx(0.2));
        Vec2c w = W.col(col), eta = E.col(col);
        cplx factor = std::exp(2.0 * ((eta.array() * (z + 0.5 * w).array()).sum()));
        SVec a = limit_S(g, z + w), b = limit_S(g, z);
        for (int comp = 0; comp < 4; ++comp)
            ok = ok && std::abs(a.s(comp) - factor * b.s(comp)) <
                           1e-9 * std::max(1.0, std::abs(factor * b.s(comp)));
    }
    report(9, "limit formulas: Taylor normalization and quasi-periodicity", ok);
}

void criterion_10(const KleinianContext& ctx) {
    bool ok = true;
    int done = 0;
    for (int trial = 0; trial < 200 && done < 50; ++trial) {
        Vec2c z(rand_cplx(0.4), rand_cplx(0.4));
        SVec sv = eval_S(ctx, z);
        if (std::abs(sv.s(0)) < 1e-3 * sv.s.cwiseAbs().maxCoeff()) continue;
        cplx S = sv.s(0);
        cplx p22 = sv.s(1) / S, p12 = sv.s(2) / S;
        cplx disc = std::sqrt(p22 * p22 + 4.0 * p12);
        cplx x1 = 0.5 * (p22 + disc), x2 = 0.5 * (p22 - disc);
        if (std::abs(x1 - x2) < 1e-2) continue;
        cplx d22 = (sv.ds2(1) * S - sv.s(1) * sv.ds2(0)) / (S * S);
        cplx d12 = (sv.ds2(2) * S - sv.s(2) * sv.ds2(0)) / (S * S);
        Divisor2 D{CurvePoint::finite(x1, x1 * d22 + d12), CurvePoint::finite(x2, x2 * d22 + d12)};
        if (on_curve_residual(ctx.tower.f, D.p) > 1e-7 ||
            on_curve_residual(ctx.tower.f, D.q) > 1e-7)
            continue;
        AbelResult r = abel_map(ctx, D, 1000 + static_cast<std::uint64_t>(trial));
        LatticeFit fit = lattice_reduce(r.z - z, ctx.periods.A, ctx.periods.B);
        ok = ok && fit.residual.norm() < 1e-6 && r.cert_residual < 1e-6;
        ++done;
        if (!ok) break;
    }
    ok = ok && done >= 50;

    // base class and 2-torsion behavior
    cplx xp(1.7, 0.4);
    CurvePoint P = CurvePoint::finite(xp, std::sqrt(ctx.tower.f.eval(xp)));
    ok = ok && abel_map(ctx, Divisor2{P, P.conj()}).z.norm() < 1e-10;
    auto rts = finite_roots(ctx.tower.f);
    Divisor2 tors{CurvePoint::finite(rts[0], 0.0), CurvePoint::finite(rts[3], 0.0)};
    AbelResult tr = abel_map(ctx, tors);
    LatticeFit tfit = lattice_reduce(2.0 * tr.z, ctx.periods.A, ctx.periods.B);
    ok = ok && tr.sign_ambiguous && tfit.residual.norm() < 1e-5;
    report(10, "Abel map round trip, base class, 2-torsion", ok);
}

void criterion_11(const KleinianContext& ctx) {
    bool ok = true;
    double h = 1e-5;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        Vec2c z(rand_cplx(0.7), rand_cplx(0.7));
        SVec sv = eval_S(ctx, z);
        for (int j = 0; j < 2; ++j) {
            Vec2c e = Vec2c::Zero();
            e(j) = 1.0;
            Vec4c fd = (eval_S(ctx, z + h * e).s - eval_S(ctx, z - h * e).s) / (2.0 * h);
            const Vec4c& an = (j == 0) ? sv.ds1 : sv.ds2;
            ok = ok && (an - fd).cwiseAbs().maxCoeff() <= 1e-5 * std::max(1.0, fd.cwiseAbs().maxCoeff());
        }
    }
    report(11, "analytic partials vs central differences", ok);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();

    std::vector<CurveData> pool;
    for (int k = 0; k < 20; ++k) {
        DiskTriple D;
        CPoly f = (k % 4 == 3) ? rand_quintic(D) : rand_sextic(D);
        pool.push_back(CurveData{f, D, make_context(f, D)});
    }

    criterion_4(pool);
    criterion_5(pool);
    criterion_6(pool);
    criterion_7(pool);
    criterion_8(pool);
    criterion_9();

    KleinianContext hex = make_context(CPoly({-1, 0, 0, 0, 0, 0, 1}));
    criterion_10(hex);
    criterion_11(hex);

    std::printf("%s\n", n_failed == 0 ? "ALL CRITERIA PASSED" : "ACCEPTANCE FAILED");
    return n_failed == 0 ? 0 : 1;
}
