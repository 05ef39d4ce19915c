#include "g2k/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace g2k {

namespace {

// Square root continuation: the branch of sqrt(w) nearest to the previous
// value on the path.
cplx tracked_sqrt(cplx w, cplx prev) {
    cplx s = std::sqrt(w);
    return (std::abs(s - prev) <= std::abs(s + prev)) ? s : -s;
}

bool point_clear_of_disks(cplx x, const DiskTriple& D, double margin) {
    for (int j = 0; j < 3; ++j) {
        const Disk& dk = D[j];
        double d = std::abs(x - dk.center);
        bool inside = dk.exterior ? d > dk.radius - margin : d < dk.radius + margin;
        if (inside) return false;
    }
    return true;
}

// Polyline from a to b that detours around every finite disk; both branch
// sheets live on the disk complement, so a connector that dips inside a
// disk (between its two roots) would silently swap sheets.
void build_clear_path(std::vector<cplx>& path, cplx a, cplx b, const DiskTriple& D, int depth) {
    if (depth <= 6) {
        for (int k = 0; k < 3; ++k) {
            const Disk& dk = D[k];
            if (dk.exterior) continue;  // chords between interior points stay interior
            cplx ab = b - a;
            if (std::abs(ab) == 0.0) break;
            double t = std::clamp(((dk.center - a) / ab).real(), 0.0, 1.0);
            cplx nearest = a + ab * t;
            double margin = dk.radius * 1.05;
            if (t > 0.0 && t < 1.0 && std::abs(nearest - dk.center) < margin &&
                std::abs(a - dk.center) >= margin - 1e-12 &&
                std::abs(b - dk.center) >= margin - 1e-12) {
                cplx dir = nearest - dk.center;
                if (std::abs(dir) < 1e-12 * dk.radius) dir = ab * cplx(0.0, 1.0);
                dir /= std::abs(dir);
                cplx wp = dk.center + dir * dk.radius * 1.35;
                build_clear_path(path, a, wp, D, depth + 1);
                build_clear_path(path, wp, b, D, depth + 1);
                return;
            }
        }
    }
    path.push_back(b);
}

// A base point outside all three (slightly inflated) disks, used to anchor
// one global branch of sqrt(f).
cplx find_base_point(const DiskTriple& D) {
    std::vector<cplx> candidates;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            if (j == k) continue;
            candidates.push_back(0.5 * (D[j].center + D[k].center));
        }
        for (int q = 0; q < 8; ++q) {
            double ang = 2.0 * M_PI * q / 8.0;
            candidates.push_back(D[j].center + std::polar(D[j].radius * 1.5, ang));
            candidates.push_back(D[j].center + std::polar(D[j].radius * 0.5, ang));
        }
    }
    candidates.push_back(cplx(0.0));
    for (cplx c : candidates) {
        if (point_clear_of_disks(c, D, 1e-9)) return c;
    }
    throw convergence_error("contour_integrals: no base point clear of the disks found");
}

// Straight-line branch continuation of sqrt(f) from (x0, y0) to x1.
cplx continue_branch(const CPoly& f, cplx x0, cplx y0, cplx x1, int steps = 512) {
    cplx y = y0;
    for (int k = 1; k <= steps; ++k) {
        cplx x = x0 + (x1 - x0) * (double(k) / steps);
        y = tracked_sqrt(f.eval(x), y);
    }
    return y;
}

// One contour with branch tracking, trapezoid rule (spectrally accurate for
// periodic analytic integrands), doubling nodes until converged.
Vec2c circle_integral(const CPoly& f, const Disk& dk, cplx y_start,
                      const std::function<cplx(cplx, int)>& numerator) {
    double orient = dk.exterior ? -1.0 : 1.0;
    Vec2c prev = Vec2c::Zero();
    for (int n = 256; n <= (1 << 16); n *= 2) {
        Vec2c acc = Vec2c::Zero();
        cplx y = y_start;
        for (int k = 0; k < n; ++k) {
            double th = orient * 2.0 * M_PI * k / n;
            cplx x = dk.center + std::polar(dk.radius, th);
            y = tracked_sqrt(f.eval(x), y);
            cplx dx = cplx(0.0, orient) * std::polar(dk.radius, th);
            acc(0) += numerator(x, 0) / y * dx;
            acc(1) += numerator(x, 1) / y * dx;
        }
        acc *= 2.0 * M_PI / n;
        if (n > 256 && (acc - prev).norm() <= 1e-13 * (1.0 + acc.norm())) return acc;
        prev = acc;
    }
    return prev;
}

}  // namespace

Mat23c contour_integrals(const CPoly& f, const DiskTriple& D,
                         const std::function<cplx(cplx, int)>& numerator) {
    if (!is_subordinate(f, D)) {
        throw input_error("contour_integrals: polynomial is not subordinate to the disks");
    }
    cplx base = find_base_point(D);
    cplx y_base = std::sqrt(f.eval(base));

    Mat23c out;
    for (int j = 0; j < 3; ++j) {
        const Disk& dk = D[j];
        // Anchor the branch at angle 0 of this circle: continue from the
        // shared base point to a standoff just off the circle (detouring
        // around every finite disk, including this one), descend radially,
        // then track along the arc to angle 0.
        double rs = dk.exterior ? dk.radius / 1.3 : dk.radius * 1.3;
        double psi = 0.0;
        for (int q = 0; q < 16; ++q) {
            double cand = 2.0 * M_PI * q / 16.0;
            if (point_clear_of_disks(dk.center + std::polar(rs, cand), D, 1e-9)) {
                psi = cand;
                break;
            }
        }
        cplx standoff = dk.center + std::polar(rs, psi);
        std::vector<cplx> path{base};
        build_clear_path(path, base, standoff, D, 0);
        path.push_back(dk.center + std::polar(dk.radius, psi));
        cplx y = y_base;
        for (size_t k = 0; k + 1 < path.size(); ++k) {
            y = continue_branch(f, path[k], y, path[k + 1]);
        }
        // Arc from angle psi back to angle 0 along the contour itself.
        if (psi != 0.0) {
            const int arc_steps = 1024;
            for (int k = 1; k <= arc_steps; ++k) {
                double th = psi * (1.0 - double(k) / arc_steps);
                y = tracked_sqrt(f.eval(dk.center + std::polar(dk.radius, th)), y);
            }
        }
        out.col(j) = circle_integral(f, dk, y, numerator);
    }
    return out;
}

Mat23c quadrature_W(const CPoly& f, const DiskTriple& D) {
    return contour_integrals(f, D, [](cplx x, int row) { return row == 0 ? cplx(1.0) : x; });
}

Mat23c quadrature_E(const CPoly& f, const DiskTriple& D) {
    cplx f3 = f[3], f4 = f[4], f5 = f[5], f6 = f[6];
    auto rho = [=](cplx x, int row) {
        if (row == 0) return x * (f3 + x * (2.0 * f4 + x * (3.0 * f5 + x * 4.0 * f6)));
        return x * x * (f5 + 2.0 * f6 * x);
    };
    return -0.25 * contour_integrals(f, D, rho);
}

namespace {

// Composite Gauss-Legendre nodes/weights on [0,1], 16-point panels.
struct GL16 {
    static const std::array<double, 8> x;  // positive abscissae on [-1,1]
    static const std::array<double, 8> w;
};

const std::array<double, 8> GL16::x = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
const std::array<double, 8> GL16::w = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

}  // namespace

Vec2c branch_cycle_period(const CPoly& f, cplx root_a, cplx root_b, double bend) {
    // Deflate the two endpoint roots: f = (x - a)(x - b) h(x).
    int d = f.degree();
    std::vector<cplx> coef(static_cast<size_t>(d) + 1);
    for (int j = 0; j <= d; ++j) coef[static_cast<size_t>(j)] = f[j];
    auto deflate = [&coef](cplx r) {
        std::vector<cplx> out(coef.size() - 1);
        cplx carry = coef.back();
        for (size_t j = coef.size() - 1; j-- > 0;) {
            out[j] = carry;
            carry = coef[j] + carry * r;
        }
        coef = out;
    };
    deflate(root_a);
    deflate(root_b);
    CPoly h(coef);

    cplx dab = root_b - root_a;
    const cplx imu(0.0, bend);

    // x(s) = a + dab * u (1 + i bend (1 - u)), u = sin^2(pi s / 2).  The
    // endpoint square roots reduce to sin(pi s)/2 exactly, so the remaining
    // integrand is analytic in s.
    auto geometry = [&](double s, cplx& x, cplx& pref) {
        double u = std::sin(M_PI * s / 2.0);
        u *= u;
        x = root_a + dab * (u * (1.0 + imu * (1.0 - u)));
        cplx corr = (1.0 + imu * (1.0 - u)) * (1.0 - imu * u);
        pref = M_PI * (1.0 + imu - 2.0 * imu * u) / (cplx(0.0, 1.0) * std::sqrt(corr));
    };

    Vec2c prev = Vec2c::Zero();
    for (int panels = 4; panels <= 4096; panels *= 2) {
        Vec2c acc = Vec2c::Zero();
        cplx ytrack = std::sqrt(h.eval(root_a));  // branch anchor at s = 0
        for (int p = 0; p < panels; ++p) {
            double lo = double(p) / panels, hi = double(p + 1) / panels;
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            // Ordered nodes within the panel for sequential branch tracking.
            std::array<double, 16> nodes;
            std::array<double, 16> wts;
            for (int q = 0; q < 8; ++q) {
                nodes[static_cast<size_t>(q)] = mid - half * GL16::x[static_cast<size_t>(7 - q)];
                wts[static_cast<size_t>(q)] = half * GL16::w[static_cast<size_t>(7 - q)];
                nodes[static_cast<size_t>(8 + q)] = mid + half * GL16::x[static_cast<size_t>(q)];
                wts[static_cast<size_t>(8 + q)] = half * GL16::w[static_cast<size_t>(q)];
            }
            for (int q = 0; q < 16; ++q) {
                cplx x, pref;
                geometry(nodes[static_cast<size_t>(q)], x, pref);
                ytrack = tracked_sqrt(h.eval(x), ytrack);
                cplx val = pref / ytrack * wts[static_cast<size_t>(q)];
                acc(0) += val;
                acc(1) += val * x;
            }
        }
        if (panels > 4 && (acc - prev).norm() <= 1e-13 * (1.0 + acc.norm())) {
            return 2.0 * acc;
        }
        prev = acc;
    }
    return 2.0 * prev;
}

}  // namespace g2k
