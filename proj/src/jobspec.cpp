#include "g2k/jobspec.hpp"

#include "g2k/thetaref.hpp"

namespace g2k {

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw input_error("expected a complex number as [re, im], got " + j.dump());
    return cplx(j[0].get<double>(), j[1].get<double>());
}

json poly_to_json(const CPoly& f) {
    json out = json::array();
    for (int k = 0; k <= std::max(f.degree(), 0); ++k) out.push_back(complex_to_json(f[k]));
    return out;
}

CPoly poly_from_json(const json& j) {
    if (!j.is_array() || j.empty() || j.size() > 7)
        throw input_error("polynomial must be an array of 1..7 complex coefficients");
    std::vector<cplx> coeffs;
    for (const auto& c : j) coeffs.push_back(complex_from_json(c));
    return CPoly(coeffs);
}

json disks_to_json(const DiskTriple& D) {
    json out = json::array();
    for (int k = 0; k < 3; ++k)
        out.push_back(json{{"kind", D[k].exterior ? "exterior" : "interior"},
                           {"center", complex_to_json(D[k].center)},
                           {"radius", D[k].radius}});
    return out;
}

DiskTriple disks_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw input_error("disks must be an array of 3 objects");
    DiskTriple D;
    for (int k = 0; k < 3; ++k) {
        const json& d = j[static_cast<size_t>(k)];
        if (!d.is_object() || !d.contains("center") || !d.contains("radius"))
            throw input_error("disk needs center and radius: " + d.dump());
        D[k].center = complex_from_json(d["center"]);
        D[k].radius = d["radius"].get<double>();
        std::string kind = d.value("kind", "interior");
        if (kind != "interior" && kind != "exterior")
            throw input_error("disk kind must be interior or exterior");
        D[k].exterior = (kind == "exterior");
        if (!(D[k].radius > 0.0)) throw input_error("disk radius must be positive");
    }
    return D;
}

json point_to_json(const Vec2c& z) {
    return json::array({complex_to_json(z(0)), complex_to_json(z(1))});
}

Vec2c point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw input_error("point must be [z1, z2]");
    return Vec2c(complex_from_json(j[0]), complex_from_json(j[1]));
}

namespace {

json mat_to_json(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

CurvePoint curve_point_from_json(const json& j) {
    if (j.is_object() && j.contains("inf")) return CurvePoint::at_infinity(complex_from_json(j["inf"]));
    if (j.is_array() && j.size() == 2)
        return CurvePoint::finite(complex_from_json(j[0]), complex_from_json(j[1]));
    throw input_error("divisor point must be [x, y] or {\"inf\": a}: " + j.dump());
}

}  // namespace

json svec_to_json(const SVec& sv, bool derivatives) {
    json out;
    out["s"] = json::array();
    for (int k = 0; k < 4; ++k) out["s"].push_back(complex_to_json(sv.s(k)));
    if (derivatives) {
        out["ds1"] = json::array();
        out["ds2"] = json::array();
        for (int k = 0; k < 4; ++k) {
            out["ds1"].push_back(complex_to_json(sv.ds1(k)));
            out["ds2"].push_back(complex_to_json(sv.ds2(k)));
        }
    }
    return out;
}

JobSpec parse_jobspec(const json& j) {
    if (!j.is_object() || !j.contains("polynomial"))
        throw input_error("job must be an object with a \"polynomial\" field");
    JobSpec job;
    job.polynomial = poly_from_json(j["polynomial"]);
    if (j.contains("disks")) job.disks = disks_from_json(j["disks"]);
    if (j.contains("points"))
        for (const auto& p : j["points"]) job.points.push_back(point_from_json(p));
    if (j.contains("divisor")) {
        const json& d = j["divisor"];
        if (!d.is_array() || d.size() != 2) throw input_error("divisor must be a pair of points");
        job.divisor = Divisor2{curve_point_from_json(d[0]), curve_point_from_json(d[1])};
    }
    if (j.contains("method")) {
        std::string m = j["method"].get<std::string>();
        if (m == "richelot")
            job.method = JobSpec::Method::richelot;
        else if (m == "theta")
            job.method = JobSpec::Method::theta;
        else if (m == "both")
            job.method = JobSpec::Method::both;
        else
            throw input_error("method must be richelot, theta or both");
    }
    job.derivatives = j.value("derivatives", false);
    job.weierstrass = j.value("weierstrass", false);
    job.tower_tol = j.value("tower_tol", 1e-13);
    job.fit_tol = j.value("fit_tol", 1e-9);
    job.cert_tol = j.value("cert_tol", 1e-6);
    job.seed = j.value("seed", std::uint64_t{1});
    if (!(job.tower_tol > 0.0 && job.fit_tol > 0.0 && job.cert_tol > 0.0))
        throw input_error("tolerances must be positive");
    return job;
}

namespace {

RichelotTower build_tower(const JobSpec& job) {
    if (!is_admissible(job.polynomial)) throw input_error("polynomial is not admissible");
    DiskTriple D = job.disks ? *job.disks : find_disks(job.polynomial);
    if (job.disks && !is_subordinate(job.polynomial, D))
        throw input_error("supplied disks are not subordinate to the polynomial");
    return iterate_tower(job.polynomial, D, job.tower_tol);
}

json tower_to_json(const RichelotTower& tower) {
    json steps = json::array();
    for (const auto& st : tower.steps)
        steps.push_back(json{{"f_hat", poly_to_json(st.f_hat)},
                             {"delta", complex_to_json(st.delta_val)},
                             {"root_gaps", st.root_gaps}});
    json lim;
    lim["lead"] = complex_to_json(tower.limit.lead);
    lim["t"] = json::array();
    for (const auto& t : tower.limit.t)
        lim["t"].push_back(t.infinite ? json("inf") : complex_to_json(t.value));
    return json{{"disks", disks_to_json(tower.disks)},
                {"steps", steps},
                {"limit", lim}};
}

}  // namespace

json run_iterate(const JobSpec& job) {
    RichelotTower tower = build_tower(job);
    return json{{"tower", tower_to_json(tower)}};
}

json run_periods(const JobSpec& job) {
    RichelotTower tower = build_tower(job);
    PeriodData P = compute_periods(tower);
    return json{{"tower", tower_to_json(tower)},
                {"W", mat_to_json(P.W)},
                {"E", mat_to_json(P.E)},
                {"A", mat_to_json(P.A)},
                {"B", mat_to_json(P.B)},
                {"eta_A", mat_to_json(P.etaA)},
                {"omega", mat_to_json(P.omega)},
                {"quasi_reduced", P.quasi_reduced}};
}

json run_eval(const JobSpec& job) {
    bool want_richelot = job.method != JobSpec::Method::theta;
    bool want_theta = job.method != JobSpec::Method::richelot;

    std::optional<KleinianContext> ctx;
    std::optional<PeriodData> periods;
    if (want_richelot) {
        ctx = make_context(job.polynomial, job.disks, job.tower_tol, job.fit_tol, job.seed);
        ctx->cert_tol = job.cert_tol;
        periods = ctx->periods;
    } else {
        RichelotTower tower = build_tower(job);
        periods = compute_periods(tower);
    }

    json pts = json::array();
    double max_disc = 0.0;
    for (const Vec2c& z : job.points) {
        json rec;
        rec["z"] = point_to_json(z);
        std::optional<SVec> sr, st;
        if (want_richelot) {
            sr = eval_S(*ctx, z);
            rec["richelot"] = svec_to_json(*sr, job.derivatives);
        }
        if (want_theta) {
            st = oracle_S(*periods, z);
            rec["theta"] = svec_to_json(*st, job.derivatives);
        }
        if (sr && st) {
            double scale = std::max(sr->s.cwiseAbs().maxCoeff(), st->s.cwiseAbs().maxCoeff());
            double disc = scale > 0.0 ? (sr->s - st->s).cwiseAbs().maxCoeff() / scale : 0.0;
            rec["discrepancy"] = disc;
            max_disc = std::max(max_disc, disc);
        }
        const SVec& sv = sr ? *sr : *st;
        double scale = sv.s.cwiseAbs().maxCoeff();
        if (std::abs(sv.s(0)) >= 1e-10 * scale) {
            rec["wp"] = json::array({complex_to_json(sv.s(1) / sv.s(0)),
                                     complex_to_json(sv.s(2) / sv.s(0)),
                                     complex_to_json(sv.s(3) / sv.s(0))});
        } else {
            rec["wp"] = nullptr;  // near the polar set
        }
        if (job.weierstrass && want_richelot) {
            auto szz = sigma_zeta(*ctx, z);
            rec["sigma2z"] = complex_to_json(szz[0]);
            rec["zeta"] = json::array({complex_to_json(szz[1]), complex_to_json(szz[2])});
        }
        pts.push_back(rec);
    }

    json out;
    out["points"] = pts;
    out["quasi_reduced"] = periods->quasi_reduced;
    if (want_richelot && want_theta) out["max_discrepancy"] = max_disc;
    if (want_richelot) {
        json res = json::array();
        for (const auto& tm : ctx->transfer) res.push_back(tm.residual);
        out["fit_residuals"] = res;
    }
    return out;
}

json run_abel(const JobSpec& job) {
    if (!job.divisor) throw input_error("abel job needs a \"divisor\" field");
    KleinianContext ctx = make_context(job.polynomial, job.disks, job.tower_tol, job.fit_tol,
                                       job.seed);
    ctx.cert_tol = job.cert_tol;
    AbelResult r = abel_map(ctx, *job.divisor, job.seed);
    return json{{"z", point_to_json(r.z)},
                {"sign_ambiguous", r.sign_ambiguous},
                {"cert_residual", r.cert_residual}};
}

}  // namespace g2k
