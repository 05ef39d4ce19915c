#include "g2k/periods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace g2k {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// sqrt of the leading coefficient; every column of W and E carries the same
// branch, which only flips the overall sign of the period lattice basis.
cplx lead_sqrt(const DegenerateCurve& g) { return std::sqrt(g.lead); }

cplx gap_product(const DegenerateCurve& g, int j) {
    cplx prod = 1.0;
    for (int k = 0; k < 3; ++k) {
        if (k == j) continue;
        if (g.t[static_cast<size_t>(k)].infinite) continue;
        prod *= g.t[static_cast<size_t>(j)].value - g.t[static_cast<size_t>(k)].value;
    }
    return prod;
}

}  // namespace

Mat23c degenerate_W(const DegenerateCurve& g) {
    Mat23c W = Mat23c::Zero();
    cplx sc = lead_sqrt(g);
    int inf_col = -1;
    for (int j = 0; j < 3; ++j) {
        if (g.t[static_cast<size_t>(j)].infinite) {
            inf_col = j;
            continue;
        }
        cplx tj = g.t[static_cast<size_t>(j)].value;
        cplx res_fac = cplx(0.0, 2.0 * kPi) / (sc * gap_product(g, j));
        W(0, j) = res_fac;
        W(1, j) = res_fac * tj;
    }
    if (inf_col >= 0) {
        // residues over all three circles sum to zero
        int a = (inf_col + 1) % 3, b = (inf_col + 2) % 3;
        W.col(inf_col) = -(W.col(a) + W.col(b));
    }
    return W;
}

Mat23c degenerate_E(const DegenerateCurve& g) {
    CPoly f = g.poly();
    Mat23c E = Mat23c::Zero();
    cplx sc = lead_sqrt(g);
    int inf_col = -1;
    for (int j = 0; j < 3; ++j) {
        if (g.t[static_cast<size_t>(j)].infinite) {
            inf_col = j;
            continue;
        }
        cplx tj = g.t[static_cast<size_t>(j)].value;
        cplx rho1 = f[3] * tj + 2.0 * f[4] * tj * tj + 3.0 * f[5] * tj * tj * tj +
                    4.0 * f[6] * tj * tj * tj * tj;
        cplx rho2 = f[5] * tj * tj + 2.0 * f[6] * tj * tj * tj;
        cplx res_fac = -cplx(0.0, 2.0 * kPi) / (4.0 * sc * gap_product(g, j));
        E(0, j) = res_fac * rho1;
        E(1, j) = res_fac * rho2;
    }
    if (inf_col >= 0) {
        int a = (inf_col + 1) % 3, b = (inf_col + 2) % 3;
        E.col(inf_col) = -(E.col(a) + E.col(b));
    }
    return E;
}

Mat2c degenerate_M(const DegenerateCurve& g) {
    if (g.n_finite() == 3) {
        cplx t1 = g.t[0].value, t2 = g.t[1].value, t3 = g.t[2].value;
        cplx e1 = t1 + t2 + t3;
        cplx e2 = t1 * t2 + t1 * t3 + t2 * t3;
        cplx e3 = t1 * t2 * t3;
        Mat2c M;
        M << e3 * e1, -e3, -e3, e2;
        return M * (g.lead / 2.0);
    }
    // one point at infinity: recover M from E = M W on two finite columns
    Mat23c W = degenerate_W(g), E = degenerate_E(g);
    Mat2c Ws, Es;
    int col = 0;
    for (int j = 0; j < 3 && col < 2; ++j) {
        if (g.t[static_cast<size_t>(j)].infinite) continue;
        Ws.col(col) = W.col(j);
        Es.col(col) = E.col(j);
        ++col;
    }
    return Es * Ws.inverse();
}

Mat2c b_periods(const CPoly& f, const DiskTriple& D) {
    std::vector<cplx> rts = finite_roots(f);
    std::array<std::vector<cplx>, 3> by_disk;
    for (cplx r : rts)
        for (int j = 0; j < 3; ++j)
            if (D[j].contains(SpherePoint::finite(r))) by_disk[static_cast<size_t>(j)].push_back(r);

    auto segment = [&](int da, int db) -> Vec2c {
        // pick the closest root pair across the two disks, then the bend
        // that keeps the path farthest from the remaining branch points
        cplx best_a = 0.0, best_b = 0.0;
        double best_d = std::numeric_limits<double>::infinity();
        for (cplx ra : by_disk[static_cast<size_t>(da)])
            for (cplx rb : by_disk[static_cast<size_t>(db)]) {
                double dd = std::abs(ra - rb);
                if (dd < best_d) {
                    best_d = dd;
                    best_a = ra;
                    best_b = rb;
                }
            }
        if (!std::isfinite(best_d)) throw input_error("b_periods: empty disk");

        double best_bend = 0.0, best_clear = -1.0;
        for (double bend : {0.0, 0.35, -0.35, 0.7, -0.7, 1.2, -1.2}) {
            double clear = std::numeric_limits<double>::infinity();
            for (int s = 1; s < 24; ++s) {
                double u = static_cast<double>(s) / 24.0;
                cplx x = best_a + (best_b - best_a) * (u * (1.0 + cplx(0.0, bend) * (1.0 - u)));
                for (cplx r : rts) {
                    if (r == best_a || r == best_b) continue;
                    clear = std::min(clear, std::abs(x - r));
                }
            }
            if (clear > best_clear) {
                best_clear = clear;
                best_bend = bend;
            }
        }
        return branch_cycle_period(f, best_a, best_b, best_bend);
    };

    Mat2c B;
    B.col(0) = segment(0, 1);
    B.col(1) = segment(1, 2);
    return B;
}

bool is_quasi_reduced(const Mat2c& omega) {
    Eigen::Matrix2d Y = omega.imag();
    Y = 0.5 * (Y + Y.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Y);
    double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
    if (lmin <= 0.0) return false;

    auto norm2 = [&](double k1, double k2) {
        return Y(0, 0) * k1 * k1 + 2.0 * Y(0, 1) * k1 * k2 + Y(1, 1) * k2 * k2;
    };
    const double reps[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, -1.0}};
    int radius = static_cast<int>(std::ceil(std::sqrt(2.0 * lmax / lmin))) + 2;
    for (auto& k : reps) {
        double base = norm2(k[0], k[1]);
        for (int m1 = -radius; m1 <= radius; ++m1)
            for (int m2 = -radius; m2 <= radius; ++m2) {
                if (m1 == 0 && m2 == 0) continue;
                // k + 2m = -k carries the same norm and is excluded by definition
                if (k[0] + 2.0 * m1 == -k[0] && k[1] + 2.0 * m2 == -k[1]) continue;
                double cand = norm2(k[0] + 2.0 * m1, k[1] + 2.0 * m2);
                if (cand <= base * (1.0 + 1e-12)) return false;
            }
    }
    return true;
}

PeriodData compute_periods(const RichelotTower& tower) {
    PeriodData P;
    P.W = degenerate_W(tower.limit);

    size_t n_steps = tower.steps.size();
    P.E_levels.assign(n_steps + 1, Mat23c::Zero());
    P.E_levels[n_steps] = degenerate_E(tower.limit);
    for (size_t n = n_steps; n-- > 0;) {
        const Sym2& h = tower.steps[n].h_matrix;
        Mat2c H;
        H << h.m11, h.m12, h.m12, h.m22;
        P.E_levels[n] = 2.0 * P.E_levels[n + 1] + H * P.W;
    }
    P.E = P.E_levels[0];

    P.A = P.W.leftCols<2>();
    P.etaA = P.E.leftCols<2>();
    if (std::abs(P.A.determinant()) < 1e-14 * P.A.norm() * P.A.norm())
        throw certificate_error("compute_periods: singular a-period matrix");

    Mat2c Btilde = b_periods(tower.f, tower.disks);
    Mat2c omega_t = P.A.inverse() * Btilde;

    // symplectic completion: the true b-cycles are an integer recombination
    // B = Btilde U + A V with U unimodular; Im(omega_t U) must already be
    // symmetric, V absorbs the (integer) asymmetry of the real part.
    double best_score = std::numeric_limits<double>::infinity();
    bool found = false;
    Mat2c best_omega;
    for (int u11 = -3; u11 <= 3; ++u11)
        for (int u12 = -3; u12 <= 3; ++u12)
            for (int u21 = -3; u21 <= 3; ++u21)
                for (int u22 = -3; u22 <= 3; ++u22) {
                    int det = u11 * u22 - u12 * u21;
                    if (det != 1 && det != -1) continue;
                    Mat2c U;
                    U << cplx(u11), cplx(u12), cplx(u21), cplx(u22);
                    Mat2c Om = omega_t * U;
                    double im_asym = std::abs(Om(0, 1).imag() - Om(1, 0).imag());
                    if (im_asym > 1e-7) continue;
                    double re_asym = Om(0, 1).real() - Om(1, 0).real();
                    double v = std::round(re_asym);
                    if (std::abs(re_asym - v) > 1e-7) continue;
                    Om(0, 1) -= v;  // V = [[0, -v], [0, 0]]
                    Om = 0.5 * (Om + Om.transpose()).eval();
                    Eigen::Matrix2d Y = Om.imag();
                    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Y);
                    if (es.eigenvalues()(0) <= 0.0) continue;
                    // prefer the quasi-reduced representative, then small norm
                    double score = Om.norm() - (is_quasi_reduced(Om) ? 1e6 : 0.0);
                    if (score < best_score) {
                        best_score = score;
                        best_omega = Om;
                        found = true;
                    }
                }
    if (!found)
        throw convergence_error(
            "compute_periods: no unimodular recombination of the b-periods "
            "gives a symmetric Riemann matrix with Im > 0");

    P.omega = best_omega;
    P.B = P.A * P.omega;
    P.quasi_reduced = is_quasi_reduced(P.omega);
    return P;
}

LatticeFit lattice_reduce(const Vec2c& z, const Mat2c& A, const Mat2c& B) {
    Eigen::Matrix4d L;
    Eigen::Vector4d rhs;
    for (int j = 0; j < 2; ++j) {
        L(0, j) = A(0, j).real();
        L(1, j) = A(1, j).real();
        L(2, j) = A(0, j).imag();
        L(3, j) = A(1, j).imag();
        L(0, j + 2) = B(0, j).real();
        L(1, j + 2) = B(1, j).real();
        L(2, j + 2) = B(0, j).imag();
        L(3, j + 2) = B(1, j).imag();
    }
    rhs << z(0).real(), z(1).real(), z(0).imag(), z(1).imag();
    Eigen::Vector4d n = L.fullPivLu().solve(rhs);

    LatticeFit fit;
    Vec2c acc = z;
    for (int j = 0; j < 4; ++j) {
        int nj = static_cast<int>(std::lround(n(j)));
        fit.coeffs[static_cast<size_t>(j)] = nj;
        const Mat2c& C = (j < 2) ? A : B;
        acc -= static_cast<double>(nj) * C.col(j % 2);
    }
    fit.residual = acc;
    return fit;
}

}  // namespace g2k
