#include "psalloc/simulate.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "psalloc/rng.hpp"
#include "psalloc/special.hpp"

namespace psalloc {

namespace {

struct RepAccum {
    std::vector<double> tw;         // time-weighted occupancy
    double overflow_time = 0.0;
    std::vector<std::int64_t> counts;
    std::int64_t count_total = 0;
    std::int64_t count_overflow = 0;
    std::vector<std::int64_t> w_counts;
    std::int64_t w_total = 0;
    double time = 0.0;
    double n_time_integral = 0.0;   // integral of N dt, for mean occupancy
    double w_sum = 0.0;             // sum of sampled W
};

int default_rcap(double rho) {
    // covers the occupancy range with geometric tail below ~1e-12
    return std::max(25, int(std::ceil(std::log(1e-12) / std::log(rho))));
}

void validate_sim(const SimConfig& cfg) {
    if (cfg.sample_events < 1)
        throw ValidationError(ValidationError::Code::bad_config, "sample_events >= 1");
    if (cfg.replications < 1)
        throw ValidationError(ValidationError::Code::bad_config, "replications >= 1");
    if (cfg.warmup_events < 0)
        throw ValidationError(ValidationError::Code::bad_config, "warmup_events >= 0");
    if (!(cfg.sample_spacing > 0.0))
        throw ValidationError(ValidationError::Code::bad_config, "sample_spacing > 0");
}

// aggregate chain replication
RepAccum run_aggregate_rep(const ModelParams& p, const SimConfig& cfg, int rcap, int rep) {
    Xoshiro256pp rng(cfg.seed ^ std::uint64_t(rep));
    RepAccum acc;
    acc.tw.assign(std::size_t(rcap + 1) * (p.m + 1), 0.0);
    acc.counts.assign(acc.tw.size(), 0);
    int k = 0, r = 0;
    double t = 0.0;
    double next_sample = -1.0;
    const std::int64_t total_events = cfg.warmup_events + cfg.sample_events;
    for (std::int64_t ev = 0; ev < total_events; ++ev) {
        if (ev == cfg.warmup_events) {
            t = 0.0;
            next_sample = cfg.sample_spacing;
        }
        const int N = k + r;
        const double rate = p.rho + (N > 0 ? 1.0 : 0.0);
        const double dt = rng.exponential(rate);
        if (ev >= cfg.warmup_events) {
            if (r <= rcap)
                acc.tw[std::size_t(r) * (p.m + 1) + k] += dt;
            else
                acc.overflow_time += dt;
            acc.n_time_integral += N * dt;
            while (next_sample <= t + dt) {
                if (r <= rcap) {
                    acc.counts[std::size_t(r) * (p.m + 1) + k] += 1;
                } else {
                    acc.count_overflow += 1;
                }
                acc.count_total += 1;
                next_sample += cfg.sample_spacing;
            }
            acc.time += dt;
        }
        t += dt;
        if (rng.uniform01() <= p.rho / rate) {
            if (k < p.m)
                ++k;
            else
                ++r;
        } else {
            // departure: primary with probability k/N
            if (rng.uniform01() * N <= k)
                --k;
            else
                --r;
        }
    }
    return acc;
}

// detailed occupied-set replication
RepAccum run_detailed_rep(double rho, const SimConfig& cfg, int rcap, int view_m, int rep) {
    Xoshiro256pp rng(cfg.seed ^ std::uint64_t(rep));
    RepAccum acc;
    acc.tw.assign(std::size_t(rcap + 1) * (view_m + 1), 0.0);
    acc.counts.assign(acc.tw.size(), 0);
    acc.w_counts.assign(64, 0);

    std::vector<int> occ;        // occupied indices, arbitrary order
    std::vector<char> is_occ(64, 0);  // 1-based
    int max_s = 0;
    int n_primary = 0;           // occupied indices <= view_m
    int lowest_free = 1;
    double t = 0.0;
    double next_sample = -1.0;
    const std::int64_t total_events = cfg.warmup_events + cfg.sample_events;
    for (std::int64_t ev = 0; ev < total_events; ++ev) {
        if (ev == cfg.warmup_events) {
            t = 0.0;
            next_sample = cfg.sample_spacing;
        }
        const int N = int(occ.size());
        const double rate = rho + (N > 0 ? 1.0 : 0.0);
        const double dt = rng.exponential(rate);
        if (ev >= cfg.warmup_events) {
            const int r2 = N - n_primary;
            if (r2 <= rcap)
                acc.tw[std::size_t(r2) * (view_m + 1) + n_primary] += dt;
            else
                acc.overflow_time += dt;
            acc.n_time_integral += N * dt;
            while (next_sample <= t + dt) {
                const int W = (N > 0) ? max_s - N : 0;
                if (std::size_t(W) >= acc.w_counts.size()) acc.w_counts.resize(W + 1, 0);
                acc.w_counts[W] += 1;
                acc.w_total += 1;
                acc.w_sum += W;
                if (r2 <= rcap)
                    acc.counts[std::size_t(r2) * (view_m + 1) + n_primary] += 1;
                else
                    acc.count_overflow += 1;
                acc.count_total += 1;
                next_sample += cfg.sample_spacing;
            }
            acc.time += dt;
        }
        t += dt;
        if (rng.uniform01() <= rho / rate) {
            const int idx = lowest_free;
            if (std::size_t(idx) >= is_occ.size()) is_occ.resize(2 * idx, 0);
            is_occ[idx] = 1;
            occ.push_back(idx);
            max_s = std::max(max_s, idx);
            if (idx <= view_m) ++n_primary;
            while (std::size_t(lowest_free) < is_occ.size() && is_occ[lowest_free])
                ++lowest_free;
        } else {
            const std::size_t j = std::size_t(rng.uniform01() * N);
            const int idx = occ[std::min(j, occ.size() - 1)];
            occ[std::min(j, occ.size() - 1)] = occ.back();
            occ.pop_back();
            is_occ[idx] = 0;
            if (idx <= view_m) --n_primary;
            lowest_free = std::min(lowest_free, idx);
            if (idx == max_s) {
                while (max_s > 0 && !is_occ[max_s]) --max_s;
            }
        }
    }
    return acc;
}

SimulationSummary merge(const ModelParams& view, const SimConfig& cfg, int rcap,
                        std::vector<RepAccum>& reps, bool detailed) {
    SimulationSummary s;
    s.params = view;
    s.seed = cfg.seed;
    s.r_cap = rcap;
    s.events = (cfg.warmup_events + cfg.sample_events) * std::int64_t(cfg.replications);
    s.pi_hat.assign(std::size_t(rcap + 1) * (view.m + 1), 0.0);
    s.counts.assign(s.pi_hat.size(), 0);
    std::size_t wmax = 0;
    for (const auto& a : reps) wmax = std::max(wmax, a.w_counts.size());
    s.w_counts.assign(wmax, 0);
    for (const auto& a : reps) {  // replication order: thread-count independent
        s.total_time += a.time;
        s.overflow_mass += a.overflow_time;
        for (std::size_t i = 0; i < s.pi_hat.size(); ++i) {
            s.pi_hat[i] += a.tw[i];
            s.counts[i] += a.counts[i];
        }
        s.count_total += a.count_total;
        s.count_overflow += a.count_overflow;
        for (std::size_t i = 0; i < a.w_counts.size(); ++i) s.w_counts[i] += a.w_counts[i];
        s.w_total += a.w_total;
        s.rep_mean_n.push_back(a.n_time_integral / a.time);
        if (detailed) s.rep_mean_w.push_back(a.w_total > 0 ? a.w_sum / a.w_total : 0.0);
    }
    for (auto& v : s.pi_hat) v /= s.total_time;
    s.overflow_mass /= s.total_time;

    auto ci = [&](const std::vector<double>& xs, double& mean, double& half) {
        mean = 0.0;
        for (double x : xs) mean += x;
        mean /= double(xs.size());
        if (xs.size() < 2) {
            half = 0.0;
            return;
        }
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= double(xs.size() - 1);
        half = t_critical_99(int(xs.size()) - 1) * std::sqrt(var / double(xs.size()));
    };
    ci(s.rep_mean_n, s.mean_n, s.mean_n_ci99);
    if (detailed) ci(s.rep_mean_w, s.mean_w, s.mean_w_ci99);
    return s;
}

}  // namespace

SimulationSummary simulate_aggregate(const ModelParams& params_in, const SimConfig& cfg) {
    const ModelParams params = validate_params(params_in);
    validate_sim(cfg);
    const int rcap = cfg.r_cap > 0 ? cfg.r_cap : default_rcap(params.rho);
    std::vector<RepAccum> reps(cfg.replications);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.threads != 1) \
    num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
    for (int i = 0; i < cfg.replications; ++i) reps[i] = run_aggregate_rep(params, cfg, rcap, i);
    return merge(params, cfg, rcap, reps, false);
}

JointDistribution to_distribution(const SimulationSummary& s) {
    JointDistribution d = make_distribution(s.params, s.r_cap, Method::empirical);
    for (std::size_t i = 0; i < s.pi_hat.size(); ++i) d.values[i] = s.pi_hat[i];
    d.tol = s.overflow_mass;
    return d;
}

SimulationSummary simulate_detailed(double rho, const SimConfig& cfg, int view_m) {
    validate_params({std::max(view_m, 1), rho});
    if (view_m < 1)
        throw ValidationError(ValidationError::Code::m_out_of_range, "view_m >= 1");
    validate_sim(cfg);
    const int rcap = cfg.r_cap > 0 ? cfg.r_cap : default_rcap(rho);
    std::vector<RepAccum> reps(cfg.replications);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.threads != 1) \
    num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
    for (int i = 0; i < cfg.replications; ++i)
        reps[i] = run_detailed_rep(rho, cfg, rcap, view_m, i);
    return merge({view_m, rho}, cfg, rcap, reps, true);
}

}  // namespace psalloc
