#ifndef G2K_JOBSPEC_HPP
#define G2K_JOBSPEC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "g2k/abel.hpp"

namespace g2k {

using json = nlohmann::json;

struct JobSpec {
    CPoly polynomial;
    std::optional<DiskTriple> disks;
    std::vector<Vec2c> points;
    enum class Method { richelot, theta, both };
    Method method = Method::richelot;
    bool derivatives = false;
    bool weierstrass = false;
    double tower_tol = 1e-13;
    double fit_tol = 1e-9;
    double cert_tol = 1e-6;
    std::uint64_t seed = 1;
    std::optional<Divisor2> divisor;
};

// JSON conventions: complex numbers as [re, im], polynomials as arrays of
// complex with index = power, disks as {kind: interior|exterior,
// center: [re, im], radius}, z points as pairs of complex.
json complex_to_json(cplx v);
cplx complex_from_json(const json& j);
json poly_to_json(const CPoly& f);
CPoly poly_from_json(const json& j);
json disks_to_json(const DiskTriple& D);
DiskTriple disks_from_json(const json& j);
json point_to_json(const Vec2c& z);
Vec2c point_from_json(const json& j);
json svec_to_json(const SVec& sv, bool derivatives);

/// Parse a job from JSON; throws input_error on malformed content.
JobSpec parse_jobspec(const json& j);

json run_periods(const JobSpec& job);
json run_iterate(const JobSpec& job);
json run_eval(const JobSpec& job);
json run_abel(const JobSpec& job);

}  // namespace g2k

#endif
