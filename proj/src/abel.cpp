#include "g2k/abel.hpp"

#include <cmath>
#include <random>

namespace g2k {

namespace {

double point_scale(const CurvePoint& p) {
    return p.infinite ? 1.0 : std::max(1.0, std::abs(p.x));
}

bool same_x(const CurvePoint& p, const CurvePoint& q) {
    if (p.infinite || q.infinite) return p.infinite && q.infinite;
    return std::abs(p.x - q.x) <= 1e-12 * std::max(point_scale(p), point_scale(q));
}

bool is_conjugate_pair(const CurvePoint& p, const CurvePoint& q) {
    if (p.infinite != q.infinite) return false;
    if (p.infinite) return std::abs(p.a + q.a) <= 1e-12 * std::max(1.0, std::abs(p.a));
    return same_x(p, q) &&
           std::abs(p.y + q.y) <= 1e-12 * std::max(1.0, std::max(std::abs(p.y), std::abs(q.y)));
}

KummerVec normalized(const KummerVec& v) { return v / v.norm(); }

/// Projective distance between two nonzero 4-vectors.
double proj_dist(const KummerVec& u, const KummerVec& v) {
    KummerVec un = normalized(u), vn = normalized(v);
    return (vn - un * un.dot(vn)).norm();
}

/// Continuous log of (x - t) along the polyline, branch tracked step by step.
cplx tracked_log(const std::vector<cplx>& path, cplx t) {
    cplx acc = 0.0;
    for (size_t seg = 0; seg + 1 < path.size(); ++seg) {
        cplx a = path[seg], b = path[seg + 1];
        int steps = 64;
        cplx prev = a - t;
        for (int k = 1; k <= steps; ++k) {
            cplx x = a + (b - a) * (static_cast<double>(k) / steps);
            cplx cur = x - t;
            acc += std::log(cur / prev);  // each ratio stays off the cut
            prev = cur;
        }
    }
    return acc;
}

}  // namespace

double on_curve_residual(const CPoly& f, const CurvePoint& p) {
    if (p.infinite) {
        cplx f6 = f[6];
        return std::abs(p.a * p.a - f6) / std::max(1.0, std::abs(f6));
    }
    cplx fx = f.eval(p.x);
    double scale = std::max({1.0, std::abs(fx), std::abs(p.y) * std::abs(p.y)});
    return std::abs(p.y * p.y - fx) / scale;
}

KummerVec kummer_coords(const CPoly& f, const Divisor2& D) {
    const CurvePoint &P = D.p, &Q = D.q;
    if (is_conjugate_pair(P, Q)) return KummerVec(0.0, 0.0, 0.0, 1.0);

    if (!P.infinite && !Q.infinite) {
        if (same_x(P, Q))
            throw input_error(
                "kummer_coords: shared x-coordinate, outside the generic domain; "
                "split the divisor through a random auxiliary point");
        cplx x1 = P.x, x2 = Q.x, y1 = P.y, y2 = Q.y;
        cplx F = 0.0;
        for (int j = 0; j <= 2; ++j) {
            cplx xj = std::pow(x1 * x2, j);
            F += xj * (2.0 * f[2 * j] + f[2 * j + 1] * (x1 + x2));
        }
        F += 2.0 * f[6] * x1 * x1 * x1 * x2 * x2 * x2;
        cplx wp11 = (F - 2.0 * y1 * y2) / (4.0 * (x1 - x2) * (x1 - x2));
        return normalized(KummerVec(1.0, x1 + x2, -x1 * x2, wp11));
    }
    if (P.infinite && Q.infinite)
        throw input_error(
            "kummer_coords: doubled infinite point, outside the generic domain; "
            "split the divisor through a random auxiliary point");

    const CurvePoint& fin = P.infinite ? Q : P;
    const CurvePoint& inf = P.infinite ? P : Q;
    cplx x1 = fin.x, y1 = fin.y, a = inf.a;
    cplx v3 = 0.25 * (f[5] * x1 * x1 + 2.0 * f[6] * x1 * x1 * x1 - 2.0 * a * y1);
    return normalized(KummerVec(0.0, 1.0, -x1, v3));
}

std::vector<KummerVec> descend_kummer(const KleinianContext& ctx, const KummerVec& v0,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<KummerVec> out;
    out.push_back(normalized(v0));

    for (size_t n = 0; n < ctx.transfer.size(); ++n) {
        const auto& X = ctx.transfer[n].A;
        const auto& quart = ctx.transfer[n].deep_quartic;
        KummerVec u = out.back();

        auto forward = [&](const KummerVec& v) {
            KummerVec q;
            for (int i = 0; i < 4; ++i) q(i) = (v.array() * (X[static_cast<size_t>(i)] * v).array()).sum();
            return q;
        };
        auto quartic_res = [&](const KummerVec& v) {
            return std::abs((quart.array() * quartic_monomials(normalized(v)).array()).sum());
        };

        // Newton on {forward(v) = lambda u, c.v = 1}. The convergence gate is
        // relative: the transfer matrices carry Delta^3 scale factors, so the
        // residual floor grows with the matrix norms.
        auto polish = [&](KummerVec v, double& res) {
            KummerVec c = v.conjugate() / v.squaredNorm();
            cplx lambda = u.dot(forward(v)) / u.squaredNorm();
            for (int it = 0; it < 60; ++it) {
                Eigen::Matrix<cplx, 5, 1> F;
                KummerVec q = forward(v);
                for (int i = 0; i < 4; ++i) F(i) = q(i) - lambda * u(i);
                F(4) = (c.array() * v.array()).sum() - 1.0;
                double scale = std::max(1.0, std::max(q.norm(), std::abs(lambda)));
                if (F.norm() < 1e-13 * scale) break;
                Eigen::Matrix<cplx, 5, 5> J = Eigen::Matrix<cplx, 5, 5>::Zero();
                for (int i = 0; i < 4; ++i) {
                    KummerVec Xv = X[static_cast<size_t>(i)] * v;
                    for (int k = 0; k < 4; ++k) J(i, k) = 2.0 * Xv(k);
                    J(i, 4) = -u(i);
                }
                for (int k = 0; k < 4; ++k) J(4, k) = c(k);
                Eigen::Matrix<cplx, 5, 1> step = J.fullPivLu().solve(F);
                for (int k = 0; k < 4; ++k) v(k) -= step(k);
                lambda -= step(4);
            }
            v = normalized(v);
            res = proj_dist(u, forward(v));
            return v;
        };

        KummerVec best = KummerVec::Zero();
        double best_align = -1.0;
        bool found = false;
        double diag_note = -1.0;

        auto consider = [&](const KummerVec& seed_v) {
            double res = 0.0;
            KummerVec v = polish(seed_v, res);
            if (res >= 1e-8) return;
            if (quartic_res(v) >= 1e-5) return;  // solves the quadrics but is off the surface
            double align = std::abs(u.dot(v));
            if (align > best_align) {
                best_align = align;
                best = v;
                found = true;
            }
        };

        // Fixed points (the base class and two-torsion classes) are their own
        // preimages, so try the incoming vector first.
        consider(u);

        // Closed-form seeds: the transfer quadrics share a congruence
        // diagonalization (theta duplication structure), so in that basis the
        // preimages are componentwise square roots up to sign.
        for (int combo = 0; combo < 4 && !found; ++combo) {
            Mat4c Np = Mat4c::Zero(), Dp = Mat4c::Zero();
            for (int i = 0; i < 4; ++i) {
                Np += cplx(gauss(rng), gauss(rng)) * X[static_cast<size_t>(i)];
                Dp += cplx(gauss(rng), gauss(rng)) * X[static_cast<size_t>(i)];
            }
            Eigen::ComplexEigenSolver<Mat4c> es(Dp.inverse() * Np);
            if (es.info() != Eigen::Success) continue;
            Mat4c T = es.eigenvectors();
            Mat4c C;
            double offdiag = 0.0;
            for (int i = 0; i < 4; ++i) {
                Mat4c M = T.transpose() * X[static_cast<size_t>(i)] * T;
                C.row(i) = M.diagonal();
                double off = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        if (a != b) off += std::norm(M(a, b));
                offdiag = std::max(offdiag, std::sqrt(off) / std::max(M.diagonal().norm(), 1e-300));
            }
            diag_note = offdiag;
            KummerVec c2 = C.fullPivLu().solve(u);
            for (int pat = 0; pat < 8; ++pat) {
                KummerVec c;
                for (int k = 0; k < 4; ++k) {
                    cplx r = std::sqrt(c2(k));
                    if (k < 3 && ((pat >> k) & 1)) r = -r;
                    c(k) = r;
                }
                consider(T * c);
            }
        }

        // Fallback: random restarts.
        for (int attempt = 0; attempt < 24 && !found; ++attempt) {
            KummerVec v;
            if (attempt == 0)
                v = u;
            else
                for (int i = 0; i < 4; ++i) v(i) = cplx(gauss(rng), gauss(rng));
            consider(normalized(v));
        }

        if (!found)
            throw convergence_error("descend_kummer: no preimage found at step " +
                                    std::to_string(n) + " (diagonalization off-diagonal " +
                                    std::to_string(diag_note) + ")");

        cplx phase = u.dot(best);  // fix the complex scale gauge
        best *= std::conj(phase) / std::abs(phase);
        out.push_back(best);
    }
    return out;
}

Vec2c degenerate_invert(const DegenerateCurve& g, const KummerVec& vN) {
    cplx alpha = vN(0), beta = vN(1), gamma = vN(2);
    if (std::abs(alpha) < 1e-10 * vN.norm())
        throw input_error(
            "degenerate_invert: leading Kummer coordinate vanishes (divisor at "
            "infinity); use the auxiliary-point decomposition");

    // roots of alpha x^2 - beta x - gamma, the stable way
    cplx disc = std::sqrt(beta * beta + 4.0 * alpha * gamma);
    cplx num = (std::abs(beta + disc) >= std::abs(beta - disc)) ? beta + disc : beta - disc;
    cplx x1, x2;
    if (std::abs(num) == 0.0) {
        x1 = x2 = 0.0;
    } else {
        x1 = num / (2.0 * alpha);
        x2 = -2.0 * gamma / num;
    }
    if (x1 == x2) return Vec2c::Zero();

    std::vector<cplx> ts;
    for (const auto& t : g.t)
        if (!t.infinite) ts.push_back(t.value);

    // straight path, with a midpoint detour if it passes too close to a pole
    double scale = std::abs(x1 - x2);
    std::vector<cplx> path = {x1, x2};
    for (int tries = 0; tries < 8; ++tries) {
        double clear = std::numeric_limits<double>::infinity();
        for (size_t seg = 0; seg + 1 < path.size(); ++seg)
            for (int k = 0; k <= 32; ++k) {
                cplx x = path[seg] + (path[seg + 1] - path[seg]) * (k / 32.0);
                for (cplx t : ts) clear = std::min(clear, std::abs(x - t));
            }
        if (clear > 1e-3 * scale) break;
        cplx mid = 0.5 * (x1 + x2);
        cplx normal = (x2 - x1) * cplx(0.0, 1.0) / scale;
        double off = 0.25 * scale * (tries / 2 + 1) * ((tries % 2 == 0) ? 1.0 : -1.0);
        path = {x1, mid + off * normal, x2};
    }

    cplx sc = std::sqrt(g.lead);
    Vec2c z = Vec2c::Zero();
    for (size_t j = 0; j < ts.size(); ++j) {
        cplx Aj = 1.0;
        for (size_t k = 0; k < ts.size(); ++k)
            if (k != j) Aj /= (ts[j] - ts[k]);
        cplx Lj = tracked_log(path, ts[j]);
        z(0) += Aj * Lj / sc;
        z(1) += Aj * ts[j] * Lj / sc;
    }
    return z;
}

namespace {

/// Max relative error of the sign identities at z for a generic divisor.
double sign_test_error(const KleinianContext& ctx, const Divisor2& D, const Vec2c& z) {
    SVec sv = eval_S(ctx, z);
    cplx S = sv.s(0);
    const CurvePoint &P = D.p, &Q = D.q;

    if (!P.infinite && !Q.infinite) {
        // d(wp22)/dz2 = (y2-y1)/(x2-x1), d(wp12)/dz2 = (x2 y1 - x1 y2)/(x1-x2)
        cplx d22 = (sv.ds2(1) * S - sv.s(1) * sv.ds2(0)) / (S * S);
        cplx d12 = (sv.ds2(2) * S - sv.s(2) * sv.ds2(0)) / (S * S);
        cplx t22 = (Q.y - P.y) / (Q.x - P.x);
        cplx t12 = (Q.x * P.y - P.x * Q.y) / (Q.x - P.x);
        double e1 = std::abs(d22 - t22) / std::max(1.0, std::abs(t22));
        double e2 = std::abs(d12 - t12) / std::max(1.0, std::abs(t12));
        return std::max(e1, e2);
    }
    // one point at infinity: differences of logarithmic derivatives
    const CurvePoint& fin = P.infinite ? Q : P;
    const CurvePoint& inf = P.infinite ? P : Q;
    cplx x = fin.x, y = fin.y, a = inf.a;
    cplx l2 = sv.ds2(1) / sv.s(1) - sv.ds2(2) / sv.s(2);
    cplx l1 = sv.ds1(1) / sv.s(1) - sv.ds1(2) / sv.s(2);
    cplx t2 = -a * x;
    cplx t1 = a * x * x - y / x;
    double e1 = std::abs(l2 - t2) / std::max(1.0, std::abs(t2));
    double e2 = std::abs(l1 - t1) / std::max(1.0, std::abs(t1));
    return std::max(e1, e2);
}

bool is_generic(const Divisor2& D) {
    const CurvePoint &P = D.p, &Q = D.q;
    if (!P.infinite && !Q.infinite) return !same_x(P, Q);
    if (P.infinite && Q.infinite) return false;
    const CurvePoint& fin = P.infinite ? Q : P;
    return std::abs(fin.x) > 1e-8 * point_scale(fin);  // the log-derivative test divides by x
}

}  // namespace

AbelResult abel_map(const KleinianContext& ctx, const Divisor2& D, std::uint64_t seed) {
    const CPoly& f = ctx.tower.f;
    if (on_curve_residual(f, D.p) > 1e-8 || on_curve_residual(f, D.q) > 1e-8)
        throw input_error("abel_map: divisor point is not on the curve");

    if (is_conjugate_pair(D.p, D.q)) return AbelResult{Vec2c::Zero(), false, 0.0};

    if (!is_generic(D)) {
        // split through a random auxiliary point R: A(D) = A(P+R) + A(Q+R^-)
        std::mt19937_64 rng(seed ^ 0xabcdef1234567890ULL);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double rscale = 1.0;
        for (cplx r : finite_roots(f)) rscale = std::max(rscale, std::abs(r));
        for (int attempt = 0; attempt < 8; ++attempt) {
            cplx xr = rscale * cplx(uni(rng), uni(rng));
            CurvePoint R = CurvePoint::finite(xr, std::sqrt(f.eval(xr)));
            Divisor2 D1{D.p, R}, D2{D.q, R.conj()};
            if (!is_generic(D1) || !is_generic(D2)) continue;
            if (is_conjugate_pair(D1.p, D1.q) || is_conjugate_pair(D2.p, D2.q)) continue;
            AbelResult r1 = abel_map(ctx, D1, seed + 101 * (attempt + 1));
            AbelResult r2 = abel_map(ctx, D2, seed + 211 * (attempt + 1));
            AbelResult out;
            out.z = r1.z + r2.z;
            out.sign_ambiguous = r1.sign_ambiguous || r2.sign_ambiguous;
            out.cert_residual = std::max(r1.cert_residual, r2.cert_residual);
            return out;
        }
        throw convergence_error("abel_map: auxiliary-point decomposition failed");
    }

    KummerVec v0 = kummer_coords(f, D);
    std::vector<KummerVec> vs = descend_kummer(ctx, v0, seed);
    Vec2c zN = degenerate_invert(ctx.tower.limit, vs.back());

    double err_plus = sign_test_error(ctx, D, zN);
    double err_minus = sign_test_error(ctx, D, -zN);

    AbelResult out;
    out.z = (err_plus <= err_minus) ? zN : -zN;
    out.sign_ambiguous = (err_plus < ctx.cert_tol && err_minus < ctx.cert_tol);
    if (std::min(err_plus, err_minus) > ctx.cert_tol)
        throw certificate_error("abel_map: sign identities fail at both candidate signs (" +
                                std::to_string(std::min(err_plus, err_minus)) + ")");

    SVec sv = eval_S(ctx, out.z);
    out.cert_residual = proj_dist(v0, sv.s);
    if (out.cert_residual > ctx.cert_tol)
        throw certificate_error("abel_map: Kummer proportionality certificate failed (" +
                                std::to_string(out.cert_residual) + ")");
    return out;
}

}  // namespace g2k
