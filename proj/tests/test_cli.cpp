#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "psalloc/table_io.hpp"

namespace {

std::string binary() {
    const char* p = std::getenv("PSALLOC_BIN");
    REQUIRE_MESSAGE(p != nullptr, "PSALLOC_BIN must point at the CLI binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("exit codes: 0 success, 2 usage/validation") {
    CHECK(run("solve --m 1 --rho 0.5 --rmax 20 --out /tmp/psalloc_t1.csv") == 0);
    CHECK(run("solve --m 1 --rho 1.5 --out /tmp/psalloc_t2.csv") == 2);
    CHECK(run("solve --m 0 --rho 0.5") == 2);
    CHECK(run("wasted --rho 0.5 --lmax -1") == 2);
    CHECK(run("nonsense") == 2);
}

TEST_CASE("solve writes a parseable csv with the right shape") {
    REQUIRE(run("solve --m 2 --rho 0.5 --method ctmc --rmax 30 --format csv --out /tmp/psalloc_t3.csv") == 0);
    std::ifstream f("/tmp/psalloc_t3.csv");
    auto d = psalloc::read_csv(f);
    CHECK(d.params.m == 2);
    CHECK(d.R == 30);
    CHECK(d.pi(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("solve reproduces a tail-grid cell at full precision") {
    REQUIRE(run("solve --m 3 --rho 0.5 --method ctmc --rmax 80 --format csv --out /tmp/psalloc_t35.csv") == 0);
    std::ifstream f("/tmp/psalloc_t35.csv");
    auto d = psalloc::read_csv(f);
    CHECK(d.pi(3, 5) == doctest::Approx(1.65e-3).epsilon(3e-3));
    CHECK(d.pi(0, 5) == doctest::Approx(2.29e-5).epsilon(3e-3));
}

TEST_CASE("closed and ctmc methods agree row by row") {
    REQUIRE(run("solve --m 2 --rho 0.5 --method closed --rmax 20 --format json --out /tmp/psalloc_t4.json") == 0);
    REQUIRE(run("solve --m 2 --rho 0.5 --method ctmc --rmax 60 --format json --out /tmp/psalloc_t5.json") == 0);
    std::ifstream a("/tmp/psalloc_t4.json"), b("/tmp/psalloc_t5.json");
    auto da = psalloc::read_json(a), db = psalloc::read_json(b);
    for (int r = 0; r <= 20; ++r)
        for (int k = 0; k <= 2; ++k)
            if (db.pi(k, r) > 1e-12)
                CHECK(da.pi(k, r) == doctest::Approx(db.pi(k, r)).epsilon(1e-8));
}

TEST_CASE("table2 prints the expected grid") {
    REQUIRE(run("table2 --format csv --out /tmp/psalloc_t6.csv") == 0);
    const std::string out = slurp("/tmp/psalloc_t6.csv");
    CHECK(out.find("9.38e-05") != std::string::npos);  // tail value at k=0, r=5
    CHECK(out.find("1.95e-03") != std::string::npos);  // k=3, r=5
}

TEST_CASE("table1 marks the negative two-term cells") {
    REQUIRE(run("table1 --format csv --out /tmp/psalloc_t7.csv") == 0);
    const std::string out = slurp("/tmp/psalloc_t7.csv");
    CHECK(out.find("<0") != std::string::npos);
    CHECK(out.find("1.03e-06") != std::string::npos);  // eps=0.05, k=0 two-term
}

TEST_CASE("simulate with a fixed seed is byte-identical across runs") {
    const std::string cmd =
        "simulate --mode aggregate --m 1 --rho 0.5 --seed 99 --events 200000 --reps 2";
    REQUIRE(run(cmd + " --out /tmp/psalloc_s1.json") == 0);
    REQUIRE(run(cmd + " --out /tmp/psalloc_s2.json") == 0);
    CHECK(slurp("/tmp/psalloc_s1.json") == slurp("/tmp/psalloc_s2.json"));
}

TEST_CASE("wasted summarizes to a near-unit total") {
    REQUIRE(run("wasted --rho 0.5 --lmax 20 --out /tmp/psalloc_w1.json") == 0);
    const std::string out = slurp("/tmp/psalloc_w1.json");
    CHECK(out.find("\"mean\"") != std::string::npos);
    CHECK(out.find("\"tail_mass\"") != std::string::npos);
    auto j = nlohmann::json::parse(out);
    double total = 0.0;
    for (double p : j.at("pmf")) total += p;
    CHECK(total >= 0.999);
    CHECK(total <= 1.0 + 1e-9);
}
