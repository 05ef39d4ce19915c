#include "g2k/thetaref.hpp"

#include <cmath>

namespace g2k {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double lambda_min(const Mat2c& omega) {
    Eigen::Matrix2d Y = omega.imag();
    Y = 0.5 * (Y + Y.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Y);
    return es.eigenvalues()(0);
}

}  // namespace

int truncation_radius(const Mat2c& omega, double im_z_bound) {
    double lmin = lambda_min(omega);
    if (lmin <= 0.0) throw input_error("theta series: Im(omega) not positive definite");
    // |term| <= exp(-(pi/2) lmin |m|^2 + 2 pi b |m|); solve for exponent < -43
    double b = im_z_bound;
    double a = 0.5 * kPi * lmin;
    double R = (2.0 * kPi * b + std::sqrt(4.0 * kPi * kPi * b * b + 4.0 * a * 43.0)) / (2.0 * a);
    // slack for the polynomial factors of the differentiated series
    int radius = static_cast<int>(std::ceil(R)) + 3;
    if (radius > 512)
        throw convergence_error("theta series: truncation radius estimate diverges");
    return radius;
}

ThetaEval r2_basis_full(const std::array<int, 2>& rep, const Mat2c& omega, const Vec2c& z) {
    double imz = std::max(std::abs(z(0).imag()), std::abs(z(1).imag()));
    int R = truncation_radius(omega, imz);
    int K = R / 2 + 1;

    cplx r1(static_cast<double>(rep[0])), r2(static_cast<double>(rep[1]));
    cplx rep_quad = omega(0, 0) * r1 * r1 + 2.0 * omega(0, 1) * r1 * r2 + omega(1, 1) * r2 * r2;

    ThetaEval out;
    const cplx twopii(0.0, 2.0 * kPi);
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2) {
            double m1 = rep[0] + 2.0 * k1, m2 = rep[1] + 2.0 * k2;
            cplx mTWm = omega(0, 0) * m1 * m1 + 2.0 * omega(0, 1) * m1 * m2 + omega(1, 1) * m2 * m2;
            cplx term = std::exp(cplx(0.0, 0.5 * kPi) * (mTWm - rep_quad) +
                                 twopii * (m1 * z(0) + m2 * z(1)));
            out.val += term;
            out.grad(0) += twopii * m1 * term;
            out.grad(1) += twopii * m2 * term;
            out.hess(0, 0) += twopii * twopii * m1 * m1 * term;
            out.hess(0, 1) += twopii * twopii * m1 * m2 * term;
            out.hess(1, 1) += twopii * twopii * m2 * m2 * term;
        }
    out.hess(1, 0) = out.hess(0, 1);
    return out;
}

cplx r2_basis_eval(const std::array<int, 2>& rep, const Mat2c& omega, const Vec2c& z) {
    return r2_basis_full(rep, omega, z).val;
}

SVec oracle_S_level(const PeriodData& periods, int level, const Vec2c& z) {
    if (level < 0 || static_cast<size_t>(level) >= periods.E_levels.size())
        throw input_error("oracle_S_level: level outside tower range");

    Mat2c A = periods.A;
    Mat2c Ainv = A.inverse();
    Mat2c etaA = periods.E_levels[static_cast<size_t>(level)].leftCols<2>();
    Mat2c omega_n = std::pow(2.0, level) * periods.omega;

    Mat2c M = etaA * Ainv;
    M = 0.5 * (M + M.transpose()).eval();  // quasi-periodicity forces symmetry

    // Coset representatives in quasi-reduced position: every |c_m| <= 1,
    // so the basis stays conditioned when omega is scaled up the tower.
    // (1,1) would let the m = (1,-1) coefficient blow up exponentially.
    static const std::array<std::array<int, 2>, 4> kReps = {{{0, 0}, {1, 0}, {0, 1}, {1, -1}}};

    Vec2c w = Ainv * z;
    std::array<ThetaEval, 4> at_w, at_0;
    for (int r = 0; r < 4; ++r) {
        at_w[static_cast<size_t>(r)] = r2_basis_full(kReps[static_cast<size_t>(r)], omega_n, w);
        at_0[static_cast<size_t>(r)] =
            r2_basis_full(kReps[static_cast<size_t>(r)], omega_n, Vec2c::Zero());
    }

    // order-2 Taylor data of T(phi_r): constant a, quadratic form a*M + Q
    // with Q = (1/2) Ainv' Hess(phi_r)(0) Ainv; rows (const, z1^2, z1 z2, z2^2)
    Mat4c taylor;
    for (int r = 0; r < 4; ++r) {
        cplx a = at_0[static_cast<size_t>(r)].val;
        Mat2c Q = a * M + 0.5 * Ainv.transpose() * at_0[static_cast<size_t>(r)].hess * Ainv;
        taylor(0, r) = a;
        taylor(1, r) = Q(0, 0);
        taylor(2, r) = Q(0, 1) + Q(1, 0);
        taylor(3, r) = Q(1, 1);
    }
    Mat4c targets = Mat4c::Zero();  // columns: S, S22, S12, S11
    targets(1, 0) = 1.0;
    targets(2, 1) = 2.0;
    targets(3, 2) = -1.0;
    targets(0, 3) = 1.0;

    Eigen::FullPivLU<Mat4c> lu(taylor);
    if (!lu.isInvertible())
        throw certificate_error("oracle_S: singular Taylor matrix (wrong omega or A)");
    Mat4c alpha = lu.solve(targets);

    cplx q = z(0) * (M(0, 0) * z(0) + M(0, 1) * z(1)) + z(1) * (M(1, 0) * z(0) + M(1, 1) * z(1));
    cplx pref = std::exp(q);
    Vec2c dq = 2.0 * (M * z);

    SVec out;
    for (int comp = 0; comp < 4; ++comp)
        for (int r = 0; r < 4; ++r) {
            const ThetaEval& th = at_w[static_cast<size_t>(r)];
            cplx c = alpha(r, comp);
            // grad of phi(Ainv z) in z is Ainv' grad(phi)(w)
            Vec2c g = Ainv.transpose() * th.grad;
            out.s(comp) += c * pref * th.val;
            out.ds1(comp) += c * pref * (dq(0) * th.val + g(0));
            out.ds2(comp) += c * pref * (dq(1) * th.val + g(1));
        }
    return out;
}

SVec oracle_S(const PeriodData& periods, const Vec2c& z) {
    return oracle_S_level(periods, 0, z);
}

}  // namespace g2k
