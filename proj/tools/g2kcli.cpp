#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "g2k/jobspec.hpp"

namespace {

struct CommonOpts {
    std::string input;
    std::string disks_file;
    std::string out_file;
    std::string method;
    bool derivatives = false;
    bool weierstrass = false;
    double tol_tower = -1.0, tol_fit = -1.0, tol_cert = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("input", o.input, "job JSON file")->required();
    cmd->add_option("--disks", o.disks_file, "disk triple JSON file (overrides job)");
    cmd->add_option("--out", o.out_file, "write the JSON report here instead of stdout");
    cmd->add_option("--tol-tower", o.tol_tower, "tower convergence tolerance");
    cmd->add_option("--tol-fit", o.tol_fit, "transfer-matrix fit tolerance");
    cmd->add_option("--tol-cert", o.tol_cert, "certificate tolerance");
    cmd->add_option("--seed", o.seed, "RNG seed for sampling")->each([&](const std::string&) {
        o.seed_set = true;
    });
}

g2k::JobSpec load_job(const CommonOpts& o) {
    std::ifstream in(o.input);
    if (!in) throw g2k::input_error("cannot open input file: " + o.input);
    g2k::json j;
    try {
        j = g2k::json::parse(in);
    } catch (const g2k::json::parse_error& e) {
        throw g2k::input_error(std::string("malformed JSON in ") + o.input + ": " + e.what());
    }
    g2k::JobSpec job = g2k::parse_jobspec(j);
    if (!o.disks_file.empty()) {
        std::ifstream din(o.disks_file);
        if (!din) throw g2k::input_error("cannot open disks file: " + o.disks_file);
        try {
            job.disks = g2k::disks_from_json(g2k::json::parse(din));
        } catch (const g2k::json::parse_error& e) {
            throw g2k::input_error(std::string("malformed JSON in ") + o.disks_file + ": " +
                                   e.what());
        }
    }
    if (!o.method.empty()) {
        if (o.method == "richelot")
            job.method = g2k::JobSpec::Method::richelot;
        else if (o.method == "theta")
            job.method = g2k::JobSpec::Method::theta;
        else
            job.method = g2k::JobSpec::Method::both;
    }
    if (o.derivatives) job.derivatives = true;
    if (o.weierstrass) job.weierstrass = true;
    if (o.tol_tower > 0.0) job.tower_tol = o.tol_tower;
    if (o.tol_fit > 0.0) job.fit_tol = o.tol_fit;
    if (o.tol_cert > 0.0) job.cert_tol = o.tol_cert;
    if (o.seed_set) job.seed = o.seed;
    return job;
}

void emit(const g2k::json& report, const CommonOpts& o) {
    if (o.out_file.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(o.out_file);
        if (!out) throw g2k::input_error("cannot open output file: " + o.out_file);
        out << report.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genus-2 Kleinian function evaluator"};
    app.require_subcommand(1);

    CommonOpts op, oe, oa, oi;
    CLI::App* periods = app.add_subcommand("periods", "period matrices and Riemann matrix");
    add_common(periods, op);
    CLI::App* eval = app.add_subcommand("eval", "evaluate S, S_jk, wp (and sigma/zeta)");
    add_common(eval, oe);
    eval->add_option("--method", oe.method, "richelot|theta|both")
        ->check(CLI::IsMember({"richelot", "theta", "both"}));
    eval->add_flag("--derivatives", oe.derivatives, "include first partials");
    eval->add_flag("--weierstrass", oe.weierstrass, "include sigma(2z) and zeta");
    CLI::App* abel = app.add_subcommand("abel", "Abel map of a degree-2 divisor");
    add_common(abel, oa);
    CLI::App* iterate = app.add_subcommand("iterate", "run the isogeny tower only");
    add_common(iterate, oi);

    CLI11_PARSE(app, argc, argv);

    try {
        if (periods->parsed()) emit(g2k::run_periods(load_job(op)), op);
        if (eval->parsed()) emit(g2k::run_eval(load_job(oe)), oe);
        if (abel->parsed()) emit(g2k::run_abel(load_job(oa)), oa);
        if (iterate->parsed()) emit(g2k::run_iterate(load_job(oi)), oi);
    } catch (const g2k::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const g2k::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const g2k::certificate_error& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
