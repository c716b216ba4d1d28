// Command-line front end: solve one model with any method, reproduce the
// reference tables, compute the wasted-space distribution, or run the
// simulators. Exit codes: 0 success, 2 usage/validation, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "psalloc/asymptotics.hpp"
#include "psalloc/closed_form_m1.hpp"
#include "psalloc/closed_form_m2.hpp"
#include "psalloc/ctmc.hpp"
#include "psalloc/model.hpp"
#include "psalloc/simulate.hpp"
#include "psalloc/spectral.hpp"
#include "psalloc/table_io.hpp"
#include "psalloc/wasted_space.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace psalloc;

struct OutputTarget {
    std::string path = "-";
    std::ofstream file;
    std::ostream& stream() {
        if (path == "-") return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
        }
        return file;
    }
};

std::string sig3(double v) {
    // three significant figures, paper-style
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

JointDistribution solve_by_method(const std::string& method, const ModelParams& p,
                                  const SolverConfig& cfg, const std::string& closure) {
    if (method == "ctmc") return solve_stationary(p, cfg, closure_from_name(closure));
    if (method == "closed") {
        const int R = cfg.R > 0 ? cfg.R : default_truncation(p);
        if (p.m == 1) return m1::full_distribution(p.rho, R, cfg);
        if (p.m == 2) return m2::full_distribution(p.rho, R, cfg);
        throw ValidationError(ValidationError::Code::bad_config,
                              "closed forms exist for m = 1 and m = 2 only");
    }
    if (method == "spectral") return solve_spectral(p, cfg);
    if (method == "asymptotic-ht" || method == "asymptotic-tail") {
        const int R = cfg.R > 0 ? cfg.R : default_truncation(p);
        JointDistribution d = make_distribution(p, R, Method::asymptotic);
        const double eps = 1.0 - p.rho;
        for (int r = 0; r <= R; ++r)
            for (int k = 0; k <= p.m; ++k) {
                if (r < 1) continue;  // both expansions need r >= 1
                d.at(k, r) = (method == "asymptotic-ht")
                                 ? heavy_traffic_pi(p.m, k, eps, r, 2).value
                                 : tail_pi(p.m, k, p.rho, r);
            }
        return d;
    }
    throw ValidationError(ValidationError::Code::bad_config, "unknown method: " + method);
}

void write_table(OutputTarget& out, const JointDistribution& d, const std::string& format) {
    if (format == "csv")
        write_csv(out.stream(), d);
    else if (format == "json")
        write_json(out.stream(), d);
    else
        throw ValidationError(ValidationError::Code::bad_config, "format must be csv or json");
}

int cmd_solve(int m, double rho, const std::string& method, int rmax, double tol,
              const std::string& outpath, const std::string& format, const std::string& closure) {
    ModelParams p = validate_params({m, rho});
    SolverConfig cfg;
    cfg.R = rmax;
    cfg.tol_rel = tol;
    OutputTarget out;
    out.path = outpath;
    write_table(out, solve_by_method(method, p, cfg, closure), format);
    return 0;
}

// Heavy-traffic table: rho = 1-eps, m = 3, Y = 1, exact vs 1- and 2-term values.
int cmd_table1(const std::string& outpath, const std::string& format) {
    if (format != "text" && format != "csv")
        throw ValidationError(ValidationError::Code::bad_config, "format must be text or csv");
    const int m = 3;
    OutputTarget out;
    out.path = outpath;
    auto& os = out.stream();
    const double epss[] = {0.1, 0.05, 0.02, 0.01};
    std::ostringstream csv;
    csv << "eps,k,exact,one_term,two_term\n";
    if (format == "text") {
        os << "eps        k   exact       one-term    two-term\n";
    }
    for (double eps : epss) {
        const ModelParams p{m, 1.0 - eps};
        const int r = int(std::lround(1.0 / eps));
        JointDistribution d = solve_stationary(p);
        for (int k = 0; k <= m; ++k) {
            const double exact = d.pi(k, r);
            const auto one = heavy_traffic_pi(m, k, eps, r, 1);
            const auto two = heavy_traffic_pi(m, k, eps, r, 2);
            csv << eps << ',' << k << ',' << sig3(exact) << ',' << sig3(one.value) << ','
                << (two.negative ? std::string("<0") : sig3(two.value)) << "\n";
            if (format == "text") {
                char line[128];
                std::snprintf(line, sizeof line, "%-10g %-3d %-11s %-11s %s\n", eps, k,
                              sig3(exact).c_str(), sig3(one.value).c_str(),
                              two.negative ? "<0" : sig3(two.value).c_str());
                os << line;
            }
        }
    }
    if (format != "text") os << csv.str();
    return 0;
}

// Fixed-rho tail table: rho = 0.5, m = 3, r in {5,...,50}, exact vs tail law.
int cmd_table2(const std::string& outpath, const std::string& format) {
    if (format != "text" && format != "csv")
        throw ValidationError(ValidationError::Code::bad_config, "format must be text or csv");
    const int m = 3;
    const double rho = 0.5;
    OutputTarget out;
    out.path = outpath;
    auto& os = out.stream();
    SolverConfig cfg;
    cfg.R = 80;
    JointDistribution d = solve_stationary({m, rho}, cfg);
    if (format == "text")
        os << "r    k   exact       asymptotic\n";
    else
        os << "r,k,exact,asymptotic\n";
    for (int r : {5, 10, 20, 30, 40, 50}) {
        for (int k = 0; k <= m; ++k) {
            const double exact = d.pi(k, r);
            const double asym = tail_pi(m, k, rho, r);
            if (format == "text") {
                char line[96];
                std::snprintf(line, sizeof line, "%-4d %-3d %-11s %s\n", r, k,
                              sig3(exact).c_str(), sig3(asym).c_str());
                os << line;
            } else {
                os << r << ',' << k << ',' << sig3(exact) << ',' << sig3(asym) << "\n";
            }
        }
    }
    return 0;
}

int cmd_wasted(double rho, int lmax, const std::string& method, double tol, int threads,
               const std::string& outpath) {
    if (lmax < 0) throw ValidationError(ValidationError::Code::bad_config, "lmax must be >= 0");
    WastedSpaceConfig cfg;
    cfg.method = method_from_name(method);
    cfg.tol_rel = tol;
    cfg.threads = threads;
    WastedSpaceDistribution w = w_pmf(validate_params({1, rho}).rho, lmax, cfg);
    OutputTarget out;
    out.path = outpath;
    out.stream() << to_json_string(w);
    const auto band = coffman_mitrani_band(rho);
    std::cerr << "E[W] = " << w.mean << "  heavy-traffic band [" << band.lower << ", "
              << band.upper << "] " << (w.cm_bound_ok ? "pass" : "fail (expected away from rho=1)")
              << "\n";
    return 0;
}

int cmd_simulate(const std::string& mode, int m, double rho, std::uint64_t seed,
                 std::int64_t events, int reps, int threads, const std::string& outpath) {
    SimConfig cfg;
    cfg.seed = seed;
    cfg.sample_events = events;
    cfg.replications = reps;
    cfg.threads = threads;
    SimulationSummary s;
    if (mode == "aggregate")
        s = simulate_aggregate(validate_params({m, rho}), cfg);
    else if (mode == "detailed")
        s = simulate_detailed(validate_params({std::max(1, m), rho}).rho, cfg, std::max(1, m));
    else
        throw ValidationError(ValidationError::Code::bad_config,
                              "mode must be aggregate or detailed");
    OutputTarget out;
    out.path = outpath;
    out.stream() << to_json_string(s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"processor-sharing storage allocation: stationary distributions"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread cap (0 = default)");

    auto* solve = app.add_subcommand("solve", "solve one model and write the pi table");
    int m = 1, rmax = 0;
    double rho = 0.5, tol = 1e-12;
    std::string method = "ctmc", outpath = "-", format = "csv", closure = "asymptotic";
    solve->add_option("--m", m, "primary spaces")->required();
    solve->add_option("--rho", rho, "traffic intensity")->required();
    solve->add_option("--method", method,
                      "ctmc|closed|spectral|asymptotic-ht|asymptotic-tail");
    solve->add_option("--rmax", rmax, "truncation level (0 = auto)");
    solve->add_option("--tol", tol, "relative tolerance");
    solve->add_option("--out", outpath, "output path or -");
    solve->add_option("--format", format, "csv|json");
    solve->add_option("--closure", closure, "asymptotic|geometric|zero");

    auto* t1 = app.add_subcommand("table1", "heavy-traffic comparison grid (m=3, Y=1)");
    std::string t1out = "-", t1fmt = "text";
    t1->add_option("--out", t1out);
    t1->add_option("--format", t1fmt, "text|csv");

    auto* t2 = app.add_subcommand("table2", "fixed-rho tail comparison grid (m=3, rho=0.5)");
    std::string t2out = "-", t2fmt = "text";
    t2->add_option("--out", t2out);
    t2->add_option("--format", t2fmt, "text|csv");

    auto* wasted = app.add_subcommand("wasted", "wasted-space distribution");
    double wrho = 0.5, wtol = 1e-10;
    int lmax = 20;
    std::string wmethod = "ctmc", wout = "-";
    wasted->add_option("--rho", wrho)->required();
    wasted->add_option("--lmax", lmax);
    wasted->add_option("--method", wmethod, "ctmc|spectral");
    wasted->add_option("--tol", wtol);
    wasted->add_option("--out", wout);

    auto* sim = app.add_subcommand("simulate", "stochastic simulation");
    std::string smode = "aggregate", sout = "-";
    int sm = 1, sreps = 4;
    double srho = 0.5;
    std::uint64_t sseed = 0x5eed;
    std::int64_t sevents = 2'000'000;
    sim->add_option("--mode", smode, "aggregate|detailed");
    sim->add_option("--m", sm, "primary spaces (view split in detailed mode)");
    sim->add_option("--rho", srho)->required();
    sim->add_option("--seed", sseed);
    sim->add_option("--events", sevents, "measured events per replication");
    sim->add_option("--reps", sreps);
    sim->add_option("--out", sout);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (solve->parsed()) return cmd_solve(m, rho, method, rmax, tol, outpath, format, closure);
        if (t1->parsed()) return cmd_table1(t1out, t1fmt);
        if (t2->parsed()) return cmd_table2(t2out, t2fmt);
        if (wasted->parsed()) return cmd_wasted(wrho, lmax, wmethod, wtol, threads, wout);
        if (sim->parsed())
            return cmd_simulate(smode, sm, srho, sseed, sevents, sreps, threads, sout);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
