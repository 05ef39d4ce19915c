#include "g2k/kleinian.hpp"

#include <cmath>
#include <random>

#include "g2k/thetaref.hpp"

namespace g2k {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

LimitRep limit_rep_generic(cplx c, cplx t1, cplx t2, cplx t3) {
    cplx d12 = t1 - t2, d13 = t1 - t3, d23 = t2 - t3;
    if (d12 == 0.0 || d13 == 0.0 || d23 == 0.0)
        throw input_error("limit_S: coincident double roots");
    cplx G = d12 * d13 * d23;
    cplx sc = std::sqrt(c);

    LimitRep rep;
    rep.M << (c / 2.0) * t1 * t2 * t3 * (t1 + t2 + t3), -(c / 2.0) * t1 * t2 * t3,
        -(c / 2.0) * t1 * t2 * t3, (c / 2.0) * (t1 * t2 + t1 * t3 + t2 * t3);

    // sin^2 argument of term j is (i sqrt(c)/2)(t_k - t_l)(z2 - t_j z1) = pi l_j . z
    cplx fac = cplx(0.0, 1.0) * sc / (2.0 * kPi);
    rep.l[0] = Vec2c(-t1 * fac * d23, fac * d23);
    rep.l[1] = Vec2c(-t2 * fac * d13, fac * d13);
    rep.l[2] = Vec2c(-t3 * fac * d12, fac * d12);

    std::array<cplx, 3> w = {d12 * d13, -d12 * d23, d13 * d23};  // (t_j - t_k)(t_j - t_l)
    std::array<cplx, 3> ts = {t2 + t3, t1 + t3, t1 + t2};
    std::array<cplx, 3> tp = {t2 * t3, t1 * t3, t1 * t2};
    cplx e1 = t1 + t2 + t3, e3 = t1 * t2 * t3;

    cplx pref = -4.0 / (c * G * G);
    for (int j = 0; j < 3; ++j) {
        auto ju = static_cast<size_t>(j);
        rep.coeff(0, j) = pref * w[ju];
        rep.coeff(1, j) = pref * w[ju] * ts[ju];
        rep.coeff(2, j) = -pref * w[ju] * tp[ju];
        rep.coeff(3, j) = (2.0 / (G * G)) * w[ju] * (e3 * e1 + tp[ju] * tp[ju]);
    }
    rep.alpha(3) = 1.0;
    return rep;
}

LimitRep limit_rep_inf(cplx c, cplx t1, cplx t2) {
    if (t1 == t2) throw input_error("limit_S_inf: coincident double roots");
    DegenerateCurve g;
    g.lead = c;
    g.t = {SpherePoint::finite(t1), SpherePoint::finite(t2), SpherePoint::inf()};

    LimitRep rep;
    rep.M = degenerate_M(g);

    // l_j fixed by l_j . W = row j of the integer matrix N below, so that
    // each sin^2(pi l_j z) has unit periods along the degenerate cycles
    Mat23c W = degenerate_W(g);
    Eigen::Matrix3cd N;
    N << 0, -1, 1, 1, 0, -1, -1, 1, 0;
    Mat2c Wsub;
    Wsub.col(0) = W.col(0);
    Wsub.col(1) = W.col(1);
    Mat2c WsubT = Wsub.transpose();
    for (int j = 0; j < 3; ++j)
        rep.l[static_cast<size_t>(j)] = WsubT.fullPivLu().solve(Vec2c(N(j, 0), N(j, 1)));

    // coefficients from the canonical order-2 Taylor data:
    // value = alpha + z'(alpha M)z + pi^2 sum beta_j (l_j.z)^2 + O(z^4)
    Mat4c sys;
    sys.col(0) << 1.0, rep.M(0, 0), 2.0 * rep.M(0, 1), rep.M(1, 1);
    for (int j = 0; j < 3; ++j) {
        const Vec2c& l = rep.l[static_cast<size_t>(j)];
        sys.col(j + 1) << 0.0, kPi * kPi * l(0) * l(0), 2.0 * kPi * kPi * l(0) * l(1),
            kPi * kPi * l(1) * l(1);
    }
    Mat4c targets = Mat4c::Zero();
    targets(1, 0) = 1.0;
    targets(2, 1) = 2.0;
    targets(3, 2) = -1.0;
    targets(0, 3) = 1.0;
    Eigen::FullPivLU<Mat4c> lu(sys);
    if (!lu.isInvertible())
        throw certificate_error("limit_S_inf: degenerate Taylor matching system");
    Mat4c coef = lu.solve(targets);

    for (int comp = 0; comp < 4; ++comp) {
        rep.alpha(comp) = coef(0, comp);
        for (int j = 0; j < 3; ++j) rep.coeff(comp, j) = coef(j + 1, comp);
    }
    return rep;
}

}  // namespace

LimitRep limit_rep(const DegenerateCurve& g) {
    if (g.n_finite() == 3)
        return limit_rep_generic(g.lead, g.t[0].value, g.t[1].value, g.t[2].value);
    std::array<cplx, 2> ft;
    int n = 0;
    for (const auto& t : g.t)
        if (!t.infinite) ft[static_cast<size_t>(n++)] = t.value;
    if (n != 2) throw input_error("limit_S: need at least two finite double roots");
    return limit_rep_inf(g.lead, ft[0], ft[1]);
}

SVec eval_limit_rep(const LimitRep& rep, const Vec2c& z) {
    cplx q = z(0) * (rep.M(0, 0) * z(0) + rep.M(0, 1) * z(1)) +
             z(1) * (rep.M(1, 0) * z(0) + rep.M(1, 1) * z(1));
    cplx pref = std::exp(q);
    Vec2c dq = 2.0 * (rep.M * z);

    std::array<cplx, 3> s2{}, sd{};  // sin^2 and pi*sin(2*arg) per term
    for (int j = 0; j < 3; ++j) {
        cplx arg = kPi * (rep.l[static_cast<size_t>(j)](0) * z(0) +
                          rep.l[static_cast<size_t>(j)](1) * z(1));
        cplx s = std::sin(arg);
        s2[static_cast<size_t>(j)] = s * s;
        sd[static_cast<size_t>(j)] = kPi * std::sin(2.0 * arg);
    }

    SVec out;
    for (int comp = 0; comp < 4; ++comp) {
        cplx base = rep.alpha(comp);
        cplx db1 = 0.0, db2 = 0.0;
        for (int j = 0; j < 3; ++j) {
            auto ju = static_cast<size_t>(j);
            base += rep.coeff(comp, j) * s2[ju];
            db1 += rep.coeff(comp, j) * sd[ju] * rep.l[ju](0);
            db2 += rep.coeff(comp, j) * sd[ju] * rep.l[ju](1);
        }
        out.s(comp) = pref * base;
        out.ds1(comp) = pref * (dq(0) * base + db1);
        out.ds2(comp) = pref * (dq(1) * base + db2);
    }
    return out;
}

SVec limit_S(const DegenerateCurve& g, const Vec2c& z) { return eval_limit_rep(limit_rep(g), z); }

SVec limit_S_inf(cplx c, cplx t1, cplx t2, const Vec2c& z) {
    return eval_limit_rep(limit_rep_inf(c, t1, t2), z);
}

Eigen::Matrix<cplx, 35, 1> quartic_monomials(const Vec4c& v) {
    Eigen::Matrix<cplx, 35, 1> m;
    int col = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int k = j; k < 4; ++k)
                for (int l = k; l < 4; ++l) m(col++) = v(i) * v(j) * v(k) * v(l);
    return m;
}

TransferMatrices fit_transfer_matrices(const RichelotStep& step, const PeriodData& periods,
                                       int level, double fit_tol, std::uint64_t seed) {
    const int n_samples = 40;
    const int n_quartic = 80;
    double wmin = periods.W.colwise().norm().minCoeff();
    double box = 0.5 * wmin;

    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(level) * 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);

    Eigen::Matrix<cplx, Eigen::Dynamic, 10> D(n_samples, 10);
    Eigen::Matrix<cplx, Eigen::Dynamic, 4> b(n_samples, 4);
    Eigen::Matrix<cplx, Eigen::Dynamic, 35> Q(n_quartic, 35);
    cplx d3 = step.delta_val * step.delta_val * step.delta_val;

    for (int i = 0; i < n_quartic; ++i) {
        Vec2c z(box * cplx(uni(rng), uni(rng)), box * cplx(uni(rng), uni(rng)));
        SVec hi = oracle_S_level(periods, level + 1, z);
        Q.row(i) = quartic_monomials(hi.s / hi.s.norm()).transpose();
        if (i >= n_samples) continue;
        SVec lo = oracle_S_level(periods, level, z);
        const Vec4c& s = hi.s;
        int col = 0;
        for (int a = 0; a < 4; ++a) D(i, col++) = s(a) * s(a);
        for (int a = 0; a < 4; ++a)
            for (int c = a + 1; c < 4; ++c) D(i, col++) = 2.0 * s(a) * s(c);
        cplx damp = std::exp(-step.h_matrix.quad(z(0), z(1)));
        for (int comp = 0; comp < 4; ++comp) b(i, comp) = -32.0 * d3 * damp * lo.s(comp);
    }

    Eigen::ColPivHouseholderQR<Eigen::Matrix<cplx, Eigen::Dynamic, 10>> qr(D);
    Eigen::Matrix<cplx, 10, 4> x = qr.solve(b);

    TransferMatrices tm;
    double bmax = b.cwiseAbs().maxCoeff();
    Eigen::Matrix<cplx, Eigen::Dynamic, 4> pred = D * x;
    for (int i = 0; i < n_samples; ++i)
        for (int comp = 0; comp < 4; ++comp) {
            double denom = std::max(std::abs(b(i, comp)), 1e-2 * bmax);
            tm.residual = std::max(tm.residual, std::abs(pred(i, comp) - b(i, comp)) / denom);
        }
    if (!(tm.residual < fit_tol))
        throw certificate_error("transfer relation violated: fit residual " +
                                std::to_string(tm.residual));

    Eigen::JacobiSVD<Eigen::Matrix<cplx, Eigen::Dynamic, 35>> svd(Q, Eigen::ComputeFullV);
    tm.deep_quartic = svd.matrixV().col(34);

    for (int comp = 0; comp < 4; ++comp) {
        Mat4c X = Mat4c::Zero();
        int col = 0;
        for (int a = 0; a < 4; ++a) X(a, a) = x(col++, comp);
        for (int a = 0; a < 4; ++a)
            for (int c = a + 1; c < 4; ++c) {
                X(a, c) = x(col, comp);
                X(c, a) = x(col, comp);
                ++col;
            }
        tm.A[static_cast<size_t>(comp)] = X;
    }
    return tm;
}

KleinianContext make_context(const CPoly& f, std::optional<DiskTriple> disks, double tower_tol,
                             double fit_tol, std::uint64_t seed) {
    if (!is_admissible(f)) throw input_error("make_context: polynomial not admissible");
    DiskTriple D = disks ? *disks : find_disks(f);
    if (disks && !is_subordinate(f, D))
        throw input_error("make_context: supplied disks are not subordinate to f");

    KleinianContext ctx;
    ctx.tower = iterate_tower(f, D, tower_tol);
    ctx.periods = compute_periods(ctx.tower);
    ctx.transfer.reserve(ctx.tower.steps.size());
    for (size_t n = 0; n < ctx.tower.steps.size(); ++n)
        ctx.transfer.push_back(fit_transfer_matrices(ctx.tower.steps[n], ctx.periods,
                                                     static_cast<int>(n), fit_tol, seed));
    return ctx;
}

SVec eval_S(const KleinianContext& ctx, const Vec2c& z) {
    if (ctx.transfer.size() != ctx.tower.steps.size())
        throw input_error("eval_S: context has unfitted steps");
    SVec sv = limit_S(ctx.tower.limit, z);
    for (size_t n = ctx.tower.steps.size(); n-- > 0;) {
        const RichelotStep& step = ctx.tower.steps[n];
        const TransferMatrices& tm = ctx.transfer[n];
        cplx q = step.h_matrix.quad(z(0), z(1));
        if (q.real() > 700.0)
            throw input_error("eval_S: exponential prefactor overflow, |z| too large");
        cplx d3 = step.delta_val * step.delta_val * step.delta_val;
        cplx pref = -std::exp(q) / (32.0 * d3);
        auto dqa = step.h_matrix.apply(z(0), z(1));
        cplx dq1 = 2.0 * dqa[0], dq2 = 2.0 * dqa[1];

        SVec next;
        for (int comp = 0; comp < 4; ++comp) {
            const Mat4c& X = tm.A[static_cast<size_t>(comp)];
            Vec4c Xs = X * sv.s;
            cplx quad = (sv.s.array() * Xs.array()).sum();  // bilinear, no conjugation
            next.s(comp) = pref * quad;
            next.ds1(comp) = pref * (dq1 * quad + 2.0 * (sv.ds1.array() * Xs.array()).sum());
            next.ds2(comp) = pref * (dq2 * quad + 2.0 * (sv.ds2.array() * Xs.array()).sum());
        }
        sv = next;
    }
    return sv;
}

std::array<cplx, 3> wp(const KleinianContext& ctx, const Vec2c& z) {
    SVec sv = eval_S(ctx, z);
    double scale = sv.s.cwiseAbs().maxCoeff();
    if (std::abs(sv.s(0)) < 1e-10 * scale)
        throw input_error("wp: z is near the polar set (S vanishes)");
    return {sv.s(1) / sv.s(0), sv.s(2) / sv.s(0), sv.s(3) / sv.s(0)};
}

std::array<cplx, 3> sigma_zeta(const KleinianContext& ctx, const Vec2c& z) {
    const CPoly& f = ctx.tower.f;
    if (f.degree() != 5 || std::abs(f[5] - 4.0) > 1e-12 * f.scale())
        throw input_error("sigma_zeta: curve must be in Weierstrass form (degree 5, f5 = 4)");
    SVec sv = eval_S(ctx, z);
    cplx sigma2z = sv.s(2) * sv.ds1(1) - sv.s(1) * sv.ds1(2) + sv.s(3) * sv.ds1(0) -
                   sv.s(0) * sv.ds1(3);
    double scale = sv.s.cwiseAbs().maxCoeff();
    if (std::abs(sv.s(0)) < 1e-10 * scale)
        throw input_error("sigma_zeta: z is near the polar set (S vanishes)");
    cplx zeta1 = sv.ds1(0) / (2.0 * sv.s(0));
    cplx zeta2 = sv.ds2(0) / (2.0 * sv.s(0));
    return {sigma2z, zeta1, zeta2};
}

}  // namespace g2k
