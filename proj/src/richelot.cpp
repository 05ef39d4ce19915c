#include "g2k/richelot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace g2k {

CPoly DegenerateCurve::poly() const {
    std::vector<cplx> rts;
    for (const SpherePoint& tj : t) {
        if (!tj.infinite) {
            rts.push_back(tj.value);
            rts.push_back(tj.value);
        }
    }
    return CPoly::from_roots(lead, rts);
}

int DegenerateCurve::n_finite() const {
    int n = 0;
    for (const SpherePoint& tj : t) {
        if (!tj.infinite) ++n;
    }
    return n;
}

cplx mu_coeff(const std::array<CPoly, 3>& p, int j, int k, int l, int m) {
    CPoly ph = bracket(p[1], p[2]);
    CPoly qh = bracket(p[2], p[0]);
    CPoly rh = bracket(p[0], p[1]);
    return ph[j] * p[0][k] * p[0][l] * p[1][m] * p[2][m] +
           qh[j] * p[1][k] * p[1][l] * p[0][m] * p[2][m] +
           rh[j] * p[2][k] * p[2][l] * p[0][m] * p[1][m];
}

Sym2 h_matrix(const std::array<CPoly, 3>& p) {
    cplx dlt = delta(p[0], p[1], p[2]);
    if (dlt == cplx(0.0)) throw input_error("h_matrix: delta(p1,p2,p3) = 0");
    cplx psi0 = 4.0 * mu_coeff(p, 0, 0, 0, 2) + mu_coeff(p, 2, 1, 1, 0) +
                mu_coeff(p, 2, 0, 0, 1);
    cplx psi2 = -4.0 * mu_coeff(p, 2, 2, 2, 0) - mu_coeff(p, 0, 1, 1, 2) -
                mu_coeff(p, 0, 2, 2, 1);
    cplx sym0 = p[0][0] * p[1][1] * p[2][1] + p[0][1] * p[1][0] * p[2][1] +
                p[0][1] * p[1][1] * p[2][0];
    cplx sym2 = p[0][2] * p[1][1] * p[2][1] + p[0][1] * p[1][2] * p[2][1] +
                p[0][1] * p[1][1] * p[2][2];
    Sym2 h;
    h.m11 = (sym0 + psi0 / dlt) / 8.0;
    h.m12 = -mu_coeff(p, 1, 0, 2, 1) / dlt / 8.0;
    h.m22 = (sym2 - psi2 / dlt) / 8.0;
    return h;
}

std::array<double, 3> disk_root_gaps(const CPoly& f, const DiskTriple& D) {
    std::vector<SpherePoint> rts = roots(f);
    std::array<double, 3> gaps{};
    for (int j = 0; j < 3; ++j) {
        std::vector<SpherePoint> mine;
        for (const SpherePoint& r : rts) {
            if (D[j].contains(r)) mine.push_back(r);
        }
        if (mine.size() != 2) throw input_error("disk_root_gaps: not subordinate");
        if (D[j].exterior || mine[0].infinite || mine[1].infinite) {
            gaps[static_cast<size_t>(j)] = chordal_dist(mine[0], mine[1]);
        } else {
            gaps[static_cast<size_t>(j)] = std::abs(mine[0].value - mine[1].value);
        }
    }
    return gaps;
}

RichelotStep richelot_step(const CPoly& f, const DiskTriple& D) {
    RichelotStep step;
    step.f = f;
    step.factors = factor_by_disks(f, D);
    step.delta_val = delta(step.factors[0], step.factors[1], step.factors[2]);
    if (step.delta_val == cplx(0.0)) {
        throw certificate_error("richelot_step: delta = 0 for a subordinate factorization");
    }
    CPoly ph = bracket(step.factors[1], step.factors[2]);
    CPoly qh = bracket(step.factors[2], step.factors[0]);
    CPoly rh = bracket(step.factors[0], step.factors[1]);
    step.f_hat = (ph * qh * rh) * (1.0 / (4.0 * step.delta_val));
    step.h_matrix = h_matrix(step.factors);
    step.root_gaps = disk_root_gaps(f, D);
    return step;
}

RichelotTower iterate_tower(const CPoly& f, const DiskTriple& D, double tol, int max_iter) {
    RichelotTower tower;
    tower.f = f;
    tower.disks = D;

    // Scale used so the stopping tolerance is relative to O(1) roots.
    double root_scale = 0.0;
    for (const SpherePoint& r : roots(f)) {
        if (!r.infinite) root_scale = std::max(root_scale, std::abs(r.value));
    }
    root_scale = std::max(root_scale, 1.0);

    CPoly cur = f;
    // Root gaps are only measurable down to ~sqrt(eps): below that the
    // computed roots of an eps-accurate coefficient vector scatter.  Once
    // the measured gap is < 1e-4 the quadratic contraction puts the true
    // gap below round-off after two more steps, so finish with a fixed
    // number of extra steps instead of chasing an unmeasurable tolerance.
    int extra_left = -1;
    for (int n = 0; n <= max_iter; ++n) {
        std::array<double, 3> gaps = disk_root_gaps(cur, D);
        tower.gap_history.push_back(gaps);
        double worst = 0.0;
        for (int j = 0; j < 3; ++j) {
            double g = gaps[static_cast<size_t>(j)];
            if (!D[j].exterior) g /= root_scale;
            worst = std::max(worst, g);
        }
        if (extra_left < 0 && worst < std::max(tol, 1e-4)) {
            extra_left = (tol < 1e-8) ? 2 : 1;
        } else if (extra_left > 0) {
            --extra_left;
        }
        if (worst < tol || extra_left == 0) {
            // Snap each root pair to its midpoint.  Cluster midpoints from
            // the root finder are only ~sqrt(eps)-accurate, while the double
            // root is a well-conditioned simple zero of f', so polish it
            // there with Newton.
            std::vector<SpherePoint> rts = roots(cur);
            CPoly df = cur.derivative();
            CPoly d2f = df.derivative();
            for (int j = 0; j < 3; ++j) {
                std::vector<SpherePoint> mine;
                for (const SpherePoint& r : rts) {
                    if (D[j].contains(r)) mine.push_back(r);
                }
                if (mine[0].infinite || mine[1].infinite) {
                    tower.limit.t[static_cast<size_t>(j)] = SpherePoint::inf();
                } else {
                    cplx mid = 0.5 * (mine[0].value + mine[1].value);
                    cplx t = mid;
                    for (int it = 0; it < 50; ++it) {
                        cplx den = d2f.eval(t);
                        if (den == cplx(0.0)) break;
                        cplx stepn = df.eval(t) / den;
                        t -= stepn;
                        if (std::abs(stepn) < 1e-15 * (1.0 + std::abs(t))) break;
                    }
                    if (!D[j].contains(SpherePoint::finite(t))) t = mid;
                    tower.limit.t[static_cast<size_t>(j)] = SpherePoint::finite(t);
                }
            }
            tower.limit.lead = cur.leading();
            return tower;
        }
        if (n == max_iter) break;
        RichelotStep step = richelot_step(cur, D);
        cur = step.f_hat;
        tower.steps.push_back(std::move(step));
    }

    std::ostringstream msg;
    msg << "iterate_tower: no convergence in " << max_iter << " steps; gap history:";
    for (const auto& g : tower.gap_history) {
        msg << " [" << g[0] << ", " << g[1] << ", " << g[2] << "]";
    }
    throw convergence_error(msg.str());
}

}  // namespace g2k
