#include "g2k/disks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace g2k {

namespace {

bool disks_disjoint(const Disk& a, const Disk& b, double margin) {
    if (a.exterior && b.exterior) return false;
    if (!a.exterior && !b.exterior) {
        return std::abs(a.center - b.center) >= a.radius + b.radius + margin;
    }
    const Disk& fin = a.exterior ? b : a;
    const Disk& ext = a.exterior ? a : b;
    // The finite disk must sit strictly inside the complement circle.
    return std::abs(fin.center - ext.center) + fin.radius <= ext.radius - margin;
}

}  // namespace

bool DiskTriple::valid(double margin) const {
    int n_ext = 0;
    for (const Disk& dk : d) {
        if (dk.radius <= 0.0) return false;
        if (dk.exterior) ++n_ext;
    }
    if (n_ext > 1) return false;
    return disks_disjoint(d[0], d[1], margin) && disks_disjoint(d[0], d[2], margin) &&
           disks_disjoint(d[1], d[2], margin);
}

bool is_subordinate(const CPoly& f, const DiskTriple& D) {
    if (f.is_zero()) throw input_error("is_subordinate: zero polynomial");
    std::vector<SpherePoint> rts = roots(f);
    for (int j = 0; j < 3; ++j) {
        int count = 0;
        for (const SpherePoint& r : rts) {
            if (D[j].contains(r)) ++count;
        }
        if (count != 2) return false;
    }
    return true;
}

namespace {

// The 15 perfect matchings of {0,...,5} into three pairs.
std::vector<std::array<std::array<int, 2>, 3>> all_matchings() {
    std::vector<std::array<std::array<int, 2>, 3>> out;
    for (int a = 1; a < 6; ++a) {
        std::array<int, 4> rest{};
        int k = 0;
        for (int j = 1; j < 6; ++j) {
            if (j != a) rest[static_cast<size_t>(k++)] = j;
        }
        for (int b = 1; b < 4; ++b) {
            std::array<std::array<int, 2>, 3> m;
            m[0] = {0, a};
            m[1] = {rest[0], rest[static_cast<size_t>(b)]};
            int c = 0;
            std::array<int, 2> last{};
            for (int j = 1; j < 4; ++j) {
                if (j != b) last[static_cast<size_t>(c++)] = rest[static_cast<size_t>(j)];
            }
            m[2] = last;
            out.push_back(m);
        }
    }
    return out;
}

struct BuiltTriple {
    DiskTriple triple;
    bool ok = false;
};

// Disks for one matching: finite pairs get a circle around the Euclidean
// midpoint, a pair containing infinity gets an exterior disk.
BuiltTriple build_disks(const std::vector<SpherePoint>& rts,
                        const std::array<std::array<int, 2>, 3>& match, double pad) {
    BuiltTriple bt;
    // Euclidean gap from the members of pair j to every root outside it.
    auto pair_gap = [&](int j) {
        double gap = std::numeric_limits<double>::infinity();
        for (int idx : match[static_cast<size_t>(j)]) {
            const SpherePoint& u = rts[static_cast<size_t>(idx)];
            if (u.infinite) continue;
            for (int k = 0; k < 3; ++k) {
                if (k == j) continue;
                for (int other : match[static_cast<size_t>(k)]) {
                    const SpherePoint& v = rts[static_cast<size_t>(other)];
                    if (v.infinite) continue;
                    gap = std::min(gap, std::abs(u.value - v.value));
                }
            }
        }
        return gap;
    };

    for (int j = 0; j < 3; ++j) {
        const SpherePoint& u = rts[static_cast<size_t>(match[static_cast<size_t>(j)][0])];
        const SpherePoint& v = rts[static_cast<size_t>(match[static_cast<size_t>(j)][1])];
        Disk dk;
        if (u.infinite || v.infinite) {
            const SpherePoint& fin = u.infinite ? v : u;
            // Exterior disk centered at the centroid of the remaining roots.
            cplx centroid = 0.0;
            int n = 0;
            double r_in = 0.0;
            for (int k = 0; k < 3; ++k) {
                if (k == j) continue;
                for (int other : match[static_cast<size_t>(k)]) {
                    centroid += rts[static_cast<size_t>(other)].value;
                    ++n;
                }
            }
            centroid /= double(n);
            for (int k = 0; k < 3; ++k) {
                if (k == j) continue;
                for (int other : match[static_cast<size_t>(k)]) {
                    r_in = std::max(r_in,
                                    std::abs(rts[static_cast<size_t>(other)].value - centroid));
                }
            }
            double r_out = fin.infinite ? std::numeric_limits<double>::infinity()
                                        : std::abs(fin.value - centroid);
            if (r_out <= r_in) return bt;
            dk.center = centroid;
            dk.radius = std::isinf(r_out) ? 2.0 * r_in + 1.0 : std::sqrt(r_in * r_out);
            dk.exterior = true;
        } else {
            double gap = pair_gap(j);
            if (!std::isfinite(gap)) gap = 1.0;
            dk.center = 0.5 * (u.value + v.value);
            dk.radius = 0.5 * std::abs(u.value - v.value) + pad * gap;
            dk.exterior = false;
        }
        bt.triple[j] = dk;
    }
    bt.ok = true;
    return bt;
}

}  // namespace

DiskTriple find_disks(const CPoly& f) {
    if (!is_admissible(f)) throw input_error("find_disks: polynomial is not admissible");
    std::vector<SpherePoint> rts = roots(f);

    struct Candidate {
        double score;
        std::array<std::array<int, 2>, 3> match;
    };
    std::vector<Candidate> cands;
    for (const auto& m : all_matchings()) {
        double max_diam = 0.0;
        double min_gap = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 3; ++j) {
            const SpherePoint& u = rts[static_cast<size_t>(m[static_cast<size_t>(j)][0])];
            const SpherePoint& v = rts[static_cast<size_t>(m[static_cast<size_t>(j)][1])];
            max_diam = std::max(max_diam, chordal_dist(u, v));
            for (int k = j + 1; k < 3; ++k) {
                for (int iu : m[static_cast<size_t>(j)]) {
                    for (int iv : m[static_cast<size_t>(k)]) {
                        min_gap = std::min(min_gap,
                                           chordal_dist(rts[static_cast<size_t>(iu)],
                                                        rts[static_cast<size_t>(iv)]));
                    }
                }
            }
        }
        if (min_gap <= 0.0) continue;
        cands.push_back({max_diam / min_gap, m});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.score < b.score; });

    for (const Candidate& cand : cands) {
        for (double pad : {0.4, 0.25, 0.15, 0.07, 0.02}) {
            BuiltTriple bt = build_disks(rts, cand.match, pad);
            if (!bt.ok) continue;
            if (!bt.triple.valid()) continue;
            if (is_subordinate(f, bt.triple)) return bt.triple;
        }
    }
    throw convergence_error(
        "find_disks: heuristic found no subordinating disk triple; supply disks explicitly");
}

std::array<CPoly, 3> factor_by_disks(const CPoly& f, const DiskTriple& D) {
    if (!is_subordinate(f, D)) {
        throw input_error("factor_by_disks: polynomial is not subordinate to the disks");
    }
    std::vector<SpherePoint> rts = roots(f);
    std::array<CPoly, 3> p;
    for (int j = 0; j < 3; ++j) {
        std::vector<cplx> mine;
        for (const SpherePoint& r : rts) {
            if (!r.infinite && D[j].contains(r)) mine.push_back(r.value);
        }
        p[static_cast<size_t>(j)] = CPoly::from_roots(1.0, mine);
    }
    p[2] = p[2] * f.leading();

    // Polish the split by Newton on the coefficient match f = p1 p2 p3.
    // The factorization into disk-separated factors is well-conditioned in
    // the coefficients even when a factor's own roots nearly collide, so
    // this removes the cluster noise of the root-based initial factors.
    int d3 = p[2].degree();
    int neq = f.degree() + 1;  // == d3 + 5 unknowns: b1,c1,b2,c2 and p3
    Eigen::MatrixXcd J(neq, neq);
    Eigen::VectorXcd r(neq);
    for (int iter = 0; iter < 12; ++iter) {
        CPoly prod = p[0] * p[1] * p[2];
        double worst = 0.0;
        for (int j = 0; j < neq; ++j) {
            r(j) = f[j] - prod[j];
            worst = std::max(worst, std::abs(r(j)));
        }
        if (worst < 1e-15 * f.scale()) break;
        std::array<CPoly, 4> dq = {CPoly::monomial(1) * (p[1] * p[2]), p[1] * p[2],
                                   CPoly::monomial(1) * (p[0] * p[2]), p[0] * p[2]};
        for (int col = 0; col < 4; ++col) {
            for (int j = 0; j < neq; ++j) J(j, col) = dq[static_cast<size_t>(col)][j];
        }
        CPoly p01 = p[0] * p[1];
        for (int k = 0; k <= d3; ++k) {
            CPoly dp3 = CPoly::monomial(k) * p01;
            for (int j = 0; j < neq; ++j) J(j, 4 + k) = dp3[j];
        }
        Eigen::VectorXcd du = J.fullPivLu().solve(r);
        if (!du.allFinite()) break;
        p[0][1] += du(0);
        p[0][0] += du(1);
        p[1][1] += du(2);
        p[1][0] += du(3);
        for (int k = 0; k <= d3; ++k) p[2][k] += du(4 + k);
    }
    return p;
}

}  // namespace g2k
