// Wall-clock comparison of the serial reference paths against their OpenMP
// counterparts: simulation replications, the wasted-space model family, and
// the m = 2 double-integral sweep. Results must agree (the tests check
// bit-identity); this target only reports timings.

#include <chrono>
#include <cstdio>

#include "psalloc/closed_form_m2.hpp"
#include "psalloc/simulate.hpp"
#include "psalloc/wasted_space.hpp"

using clk = std::chrono::steady_clock;

static double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F, typename G>
static void bench(const char* name, F&& serial, G&& parallel) {
    auto t0 = clk::now();
    serial();
    auto t1 = clk::now();
    parallel();
    auto t2 = clk::now();
    const double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::printf("%-28s serial %8.3fs   omp %8.3fs   speedup %.2fx\n", name, ts, tp, ts / tp);
}

int main() {
    using namespace psalloc;

    {
        SimConfig cfg;
        cfg.sample_events = 2'000'000;
        cfg.replications = 8;
        auto run = [&](int threads) {
            SimConfig c = cfg;
            c.threads = threads;
            simulate_aggregate({3, 0.5}, c);
        };
        bench("simulate_aggregate x8", [&] { run(1); }, [&] { run(0); });
    }
    {
        SimConfig cfg;
        cfg.sample_events = 1'000'000;
        cfg.replications = 8;
        auto run = [&](int threads) {
            SimConfig c = cfg;
            c.threads = threads;
            simulate_detailed(0.5, c, 2);
        };
        bench("simulate_detailed x8", [&] { run(1); }, [&] { run(0); });
    }
    {
        auto run = [&](int threads) {
            WastedSpaceConfig c;
            c.threads = threads;
            w_pmf(0.6, 25, c);
        };
        bench("w_pmf family (rho=0.6)", [&] { run(1); }, [&] { run(0); });
    }
    {
        auto run = [&](int threads) { m2::full_distribution(0.5, 20, {}, threads); };
        bench("m2 integral sweep (R=20)", [&] { run(1); }, [&] { run(0); });
    }
    return 0;
}
