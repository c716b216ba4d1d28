#include "psalloc/table_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace psalloc {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const JointDistribution& d) {
    os << "# psalloc joint distribution\n";
    os << "# m=" << d.params.m << " rho=" << fmt17(d.params.rho) << " R=" << d.R
       << " method=" << method_name(d.method) << " tol=" << fmt17(d.tol)
       << " flushed=" << d.flushed << "\n";
    if (d.method != Method::asymptotic)
        os << "# normalization_residual=" << fmt17(normalization_residual(d)) << "\n";
    os << "k,r,pi\n";
    for (int r = 0; r <= d.R; ++r)
        for (int k = 0; k <= d.params.m; ++k)
            os << k << ',' << r << ',' << fmt17(d.pi(k, r)) << "\n";
}

JointDistribution read_csv(std::istream& is) {
    std::string line;
    ModelParams p;
    int R = -1, flushed = 0;
    Method method = Method::ctmc;
    double tol = 0.0;
    std::vector<std::array<double, 3>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tok;
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "m") p.m = std::stoi(val);
                else if (key == "rho") p.rho = std::stod(val);
                else if (key == "R") R = std::stoi(val);
                else if (key == "method") method = method_from_name(val);
                else if (key == "tol") tol = std::stod(val);
                else if (key == "flushed") flushed = std::stoi(val);
            }
            continue;
        }
        if (line.rfind("k,r,", 0) == 0) continue;
        double k, r, pi;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &k, &r, &pi) == 3)
            rows.push_back({k, r, pi});
    }
    if (R < 0) throw NumericalError("read_csv: missing metadata header");
    JointDistribution d = make_distribution(p, R, method);
    d.tol = tol;
    d.flushed = flushed;
    for (const auto& row : rows) d.at(int(row[0]), int(row[1])) = row[2];
    return d;
}

void write_json(std::ostream& os, const JointDistribution& d) {
    nlohmann::json j;
    j["meta"] = {{"m", d.params.m},     {"rho", d.params.rho}, {"R", d.R},
                 {"method", method_name(d.method)}, {"tol", d.tol},
                 {"flushed", d.flushed}};
    if (d.method != Method::asymptotic)
        j["meta"]["normalization_residual"] = normalization_residual(d);
    auto rows = nlohmann::json::array();
    for (int r = 0; r <= d.R; ++r)
        for (int k = 0; k <= d.params.m; ++k)
            rows.push_back({k, r, d.pi(k, r)});
    j["rows"] = std::move(rows);
    os << j.dump(2) << "\n";
}

JointDistribution read_json(std::istream& is) {
    nlohmann::json j;
    is >> j;
    const auto& meta = j.at("meta");
    ModelParams p{meta.at("m").get<int>(), meta.at("rho").get<double>()};
    JointDistribution d = make_distribution(p, meta.at("R").get<int>(),
                                            method_from_name(meta.at("method").get<std::string>()));
    d.tol = meta.at("tol").get<double>();
    d.flushed = meta.value("flushed", 0);
    for (const auto& row : j.at("rows"))
        d.at(row[0].get<int>(), row[1].get<int>()) = row[2].get<double>();
    return d;
}

std::string to_json_string(const SimulationSummary& s) {
    nlohmann::json j;
    j["m"] = s.params.m;
    j["rho"] = s.params.rho;
    j["seed"] = s.seed;
    j["events"] = s.events;
    j["total_time"] = s.total_time;
    j["r_cap"] = s.r_cap;
    j["overflow_mass"] = s.overflow_mass;
    j["mean_n"] = s.mean_n;
    j["mean_n_ci99"] = s.mean_n_ci99;
    auto tbl = nlohmann::json::array();
    for (int r = 0; r <= s.r_cap; ++r)
        for (int k = 0; k <= s.params.m; ++k) {
            const double v = s.pi_hat_at(k, r);
            if (v > 0.0) tbl.push_back({k, r, v, s.count_at(k, r)});
        }
    j["pi_hat"] = std::move(tbl);
    j["inspection_samples"] = s.count_total;
    if (s.w_total > 0) {
        j["mean_w"] = s.mean_w;
        j["mean_w_ci99"] = s.mean_w_ci99;
        auto w = nlohmann::json::array();
        for (std::size_t L = 0; L < s.w_counts.size(); ++L)
            if (s.w_counts[L] > 0) w.push_back({L, s.w_counts[L]});
        j["w_counts"] = std::move(w);
        j["w_samples"] = s.w_total;
    }
    return j.dump(2) + "\n";
}

std::string to_json_string(const WastedSpaceDistribution& w) {
    nlohmann::json j;
    j["rho"] = w.rho;
    j["lmax"] = w.lmax;
    j["jmax"] = w.jmax;
    j["pmf"] = w.pmf;
    j["mean"] = w.mean;
    j["tail_mass"] = w.tail_mass;
    j["discarded_j_mass"] = w.discarded_j_mass;
    j["coffman_mitrani_ok"] = w.cm_bound_ok;
    return j.dump(2) + "\n";
}

}  // namespace psalloc
