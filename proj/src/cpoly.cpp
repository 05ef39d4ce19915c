#include "g2k/cpoly.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace g2k {

namespace {

double abs2(cplx z) { return std::norm(z); }

void require_deg2(const CPoly& p, const char* who) {
    if (p.degree() > 2) {
        throw input_error(std::string(who) + ": input of degree > 2");
    }
}

}  // namespace

double chordal_dist(const SpherePoint& a, const SpherePoint& b) {
    if (a.infinite && b.infinite) return 0.0;
    if (a.infinite) return 2.0 / std::sqrt(1.0 + abs2(b.value));
    if (b.infinite) return 2.0 / std::sqrt(1.0 + abs2(a.value));
    return 2.0 * std::abs(a.value - b.value) /
           std::sqrt((1.0 + abs2(a.value)) * (1.0 + abs2(b.value)));
}

CPoly::CPoly(std::vector<cplx> coeffs) : c_{} {
    if (coeffs.size() > 7) throw input_error("CPoly: degree > 6 unsupported");
    std::copy(coeffs.begin(), coeffs.end(), c_.begin());
}

CPoly CPoly::monomial(int power, cplx coeff) {
    if (power < 0 || power > 6) throw input_error("CPoly::monomial: bad power");
    CPoly p;
    p[power] = coeff;
    return p;
}

CPoly CPoly::from_roots(cplx lead, const std::vector<cplx>& roots) {
    if (roots.size() > 6) throw input_error("CPoly::from_roots: degree > 6");
    CPoly p = CPoly::monomial(0, lead);
    for (cplx r : roots) {
        CPoly lin({-r, 1.0});
        p = p * lin;
    }
    return p;
}

int CPoly::degree() const {
    for (int j = 6; j >= 0; --j) {
        if (c_[static_cast<size_t>(j)] != cplx(0.0)) return j;
    }
    return -1;
}

cplx CPoly::leading() const {
    int d = degree();
    return d < 0 ? cplx(0.0) : c_[static_cast<size_t>(d)];
}

cplx CPoly::eval(cplx x) const {
    cplx v = 0.0;
    for (int j = 6; j >= 0; --j) v = v * x + c_[static_cast<size_t>(j)];
    return v;
}

CPoly CPoly::derivative() const {
    CPoly d;
    for (int j = 1; j <= 6; ++j) d[j - 1] = c_[static_cast<size_t>(j)] * double(j);
    return d;
}

double CPoly::scale() const {
    double s = 0.0;
    for (const cplx& v : c_) s = std::max(s, std::abs(v));
    return s;
}

CPoly CPoly::operator+(const CPoly& o) const {
    CPoly r;
    for (int j = 0; j <= 6; ++j) r[j] = (*this)[j] + o[j];
    return r;
}

CPoly CPoly::operator-(const CPoly& o) const {
    CPoly r;
    for (int j = 0; j <= 6; ++j) r[j] = (*this)[j] - o[j];
    return r;
}

CPoly CPoly::operator*(const CPoly& o) const {
    if (degree() + o.degree() > 6) throw input_error("CPoly: product degree > 6");
    CPoly r;
    for (int j = 0; j <= 6; ++j) {
        if ((*this)[j] == cplx(0.0)) continue;
        for (int k = 0; j + k <= 6; ++k) r[j + k] += (*this)[j] * o[k];
    }
    return r;
}

CPoly CPoly::operator*(cplx s) const {
    CPoly r;
    for (int j = 0; j <= 6; ++j) r[j] = (*this)[j] * s;
    return r;
}

Moebius::Moebius(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
    cplx det = a * d - b * c;
    if (det == cplx(0.0)) throw input_error("Moebius: singular matrix");
    cplx s = std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
}

CPoly bracket(const CPoly& p, const CPoly& q) {
    require_deg2(p, "bracket");
    require_deg2(q, "bracket");
    CPoly r = p.derivative() * q - p * q.derivative();
    return r;
}

cplx discr(const CPoly& p) {
    require_deg2(p, "discr");
    return p[1] * p[1] - 4.0 * p[0] * p[2];
}

cplx res(const CPoly& p, const CPoly& q) {
    require_deg2(p, "res");
    require_deg2(q, "res");
    cplx a = p[2] * q[0] - p[0] * q[2];
    return a * a + (p[2] * q[1] - p[1] * q[2]) * (p[0] * q[1] - p[1] * q[0]);
}

cplx delta(const CPoly& p, const CPoly& q, const CPoly& r) {
    require_deg2(p, "delta");
    require_deg2(q, "delta");
    require_deg2(r, "delta");
    return p[0] * (q[1] * r[2] - q[2] * r[1]) - q[0] * (p[1] * r[2] - p[2] * r[1]) +
           r[0] * (p[1] * q[2] - p[2] * q[1]);
}

CPoly moebius_conjugate(const Moebius& S, const CPoly& p) {
    require_deg2(p, "moebius_conjugate");
    // (cx+d)^2 p((ax+b)/(cx+d)) = p0 (cx+d)^2 + p1 (ax+b)(cx+d) + p2 (ax+b)^2
    CPoly num({S.b, S.a});
    CPoly den({S.d, S.c});
    return den * den * p[0] + num * den * p[1] + num * num * p[2];
}

namespace {

// Aberth-Ehrlich simultaneous iteration on the monic normalization of f.
std::vector<cplx> aberth_roots(const CPoly& f) {
    int n = f.degree();
    std::vector<cplx> a(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) a[static_cast<size_t>(j)] = f[j] / f.leading();

    auto eval = [&](cplx x, cplx& p, cplx& dp) {
        p = a[static_cast<size_t>(n)];
        dp = 0.0;
        for (int j = n - 1; j >= 0; --j) {
            dp = dp * x + p;
            p = p * x + a[static_cast<size_t>(j)];
        }
    };

    // Cauchy-type radius for initial guesses.
    double radius = 0.0;
    for (int j = 0; j < n; ++j) {
        radius = std::max(radius, std::pow(std::abs(a[static_cast<size_t>(j)]),
                                           1.0 / double(n - j)));
    }
    radius = std::max(radius, 0.5);

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const double tol = 1e-14;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<cplx> z(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            double ang = 2.0 * M_PI * (double(j) + 0.3) / double(n) +
                         (attempt > 0 ? unif(rng) : 0.25);
            double rad = radius * (1.0 + (attempt > 0 ? 0.5 * unif(rng) : 0.0));
            z[static_cast<size_t>(j)] = std::polar(rad, ang);
        }
        bool ok = false;
        for (int iter = 0; iter < 200; ++iter) {
            double move = 0.0;
            for (int j = 0; j < n; ++j) {
                cplx p, dp;
                eval(z[static_cast<size_t>(j)], p, dp);
                cplx newton = (dp == cplx(0.0)) ? cplx(0.0) : p / dp;
                cplx sum = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == j) continue;
                    cplx d = z[static_cast<size_t>(j)] - z[static_cast<size_t>(k)];
                    if (d == cplx(0.0)) d = cplx(1e-14, 1e-14);
                    sum += 1.0 / d;
                }
                cplx denom = 1.0 - newton * sum;
                cplx w = (denom == cplx(0.0)) ? newton : newton / denom;
                z[static_cast<size_t>(j)] -= w;
                move = std::max(move, std::abs(w) / (1.0 + std::abs(z[static_cast<size_t>(j)])));
            }
            if (move < tol) {
                ok = true;
                break;
            }
        }
        (void)ok;  // clustered roots stall the move criterion at ~sqrt(eps);
                   // the residual test below is the real acceptance gate
        // Residual check against the coefficient scale near each root.
        bool good = true;
        for (int j = 0; j < n; ++j) {
            cplx p, dp;
            eval(z[static_cast<size_t>(j)], p, dp);
            double sc = 1.0;
            double ax = std::abs(z[static_cast<size_t>(j)]);
            double xp = 1.0;
            for (int k = 0; k <= n; ++k) {
                sc = std::max(sc, std::abs(a[static_cast<size_t>(k)]) * xp);
                xp *= ax;
            }
            if (std::abs(p) > 1e-10 * sc) {
                good = false;
                break;
            }
        }
        if (good) return z;
    }
    std::ostringstream msg;
    msg << "roots: Aberth-Ehrlich iteration failed to converge for degree " << n;
    throw convergence_error(msg.str());
}

}  // namespace

std::vector<cplx> finite_roots(const CPoly& f) {
    int d = f.degree();
    if (d < 0) throw input_error("roots: zero polynomial");
    if (d == 0) return {};
    return aberth_roots(f);
}

std::vector<SpherePoint> roots(const CPoly& f) {
    std::vector<SpherePoint> out;
    for (cplx r : finite_roots(f)) out.push_back(SpherePoint::finite(r));
    while (out.size() < 6) out.push_back(SpherePoint::inf());
    return out;
}

bool is_admissible(const CPoly& f) {
    int d = f.degree();
    if (d != 5 && d != 6) return false;
    std::vector<cplx> r = finite_roots(f);
    double maxmag = 0.0;
    for (cplx x : r) maxmag = std::max(maxmag, std::abs(x));
    double sep_tol = 1e-9 * (maxmag + 1.0);
    for (size_t i = 0; i < r.size(); ++i) {
        for (size_t j = i + 1; j < r.size(); ++j) {
            if (std::abs(r[i] - r[j]) <= sep_tol) return false;
        }
    }
    return true;
}

}  // namespace g2k
