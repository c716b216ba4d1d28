#pragma once

#include <cstdint>
#include <vector>

#include "psalloc/model.hpp"

namespace psalloc {

struct SimConfig {
    std::uint64_t seed = 0x5eedULL;
    std::int64_t warmup_events = 200'000;   // discarded per replication
    std::int64_t sample_events = 2'000'000; // measured events per replication
    int replications = 4;
    double sample_spacing = 25.0;  // model-time between inspection samples;
                                   // large enough that samples decorrelate
    int r_cap = 0;                 // occupancy table height; 0 = derive from rho
    int threads = 0;               // 0 = OpenMP default, 1 = serial reference
};

/// Results of one simulation run (all replications merged in index order, so
/// the summary is identical for any thread count).
struct SimulationSummary {
    ModelParams params;            // m is the primary/secondary split in view
    std::uint64_t seed = 0;
    std::int64_t events = 0;
    double total_time = 0.0;
    int r_cap = 0;

    // time-weighted occupancy fractions; sums to 1 together with overflow
    std::vector<double> pi_hat;    // (r_cap+1) x (m+1), index r*(m+1)+k
    double overflow_mass = 0.0;    // time fraction spent above r_cap

    // inspection-epoch counts (decorrelated state samples for chi-square use)
    std::vector<std::int64_t> counts;
    std::int64_t count_total = 0;
    std::int64_t count_overflow = 0;

    // detailed mode only: wasted-space samples at inspection epochs
    std::vector<std::int64_t> w_counts;
    std::int64_t w_total = 0;

    // per-replication means and their 99% confidence half-widths
    std::vector<double> rep_mean_n;
    std::vector<double> rep_mean_w;
    double mean_n = 0.0, mean_n_ci99 = 0.0;
    double mean_w = 0.0, mean_w_ci99 = 0.0;

    double pi_hat_at(int k, int r) const { return pi_hat[std::size_t(r) * (params.m + 1) + k]; }
    std::int64_t count_at(int k, int r) const { return counts[std::size_t(r) * (params.m + 1) + k]; }
};

/// Event simulation of the aggregate (N1, N2) chain: arrivals at rate rho
/// enter a free primary space if one exists, otherwise the secondary tier;
/// the unit-rate server is shared, so departures remove a primary customer
/// with probability k/N. Deterministic for a given seed; replication i uses
/// the stream seed ^ i.
SimulationSummary simulate_aggregate(const ModelParams& params, const SimConfig& cfg);

/// Event simulation tracking the exact set of occupied space indices:
/// arrivals take the lowest free index, the departing customer is uniform
/// over those present. Wasted space W = max(S) - |S| is sampled at
/// inspection epochs. view_m sets the primary/secondary split used for the
/// reported (N1, N2) table.
SimulationSummary simulate_detailed(double rho, const SimConfig& cfg, int view_m = 1);

/// Time-weighted occupancy fractions as a JointDistribution (method =
/// empirical, tol = the overflow mass beyond r_cap).
JointDistribution to_distribution(const SimulationSummary& s);

}  // namespace psalloc
