// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] must point at the CLI binary (used by the determinism
// criterion).

#include <exitweight/bsc.hpp>
#include <exitweight/code.hpp>
#include <exitweight/exit_mu.hpp>
#include <exitweight/io.hpp>
#include <exitweight/spectrum.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace ew = exitweight;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
              << detail << '\n';
    if (!ok) ++failures;
}

std::vector<double> linspace(double a, double b, int pts) {
    std::vector<double> g(pts);
    for (int i = 0; i < pts; ++i) g[i] = a + (b - a) * i / (pts - 1);
    return g;
}

double binomial_tail_half(int w, double p) {
    double s = 0.0;
    for (int j = 0; j <= w; ++j) {
        if (2 * j < w) continue;
        double binom = 1.0;
        for (int t = 0; t < j; ++t) binom = binom * (w - t) / (t + 1);
        s += binom * std::pow(p, j) * std::pow(1.0 - p, w - j);
    }
    return s;
}

// message-space spectrum oracle, independent of the Gray-code path
std::vector<long long> spectrum_oracle(const ew::BinaryCode& c) {
    std::vector<long long> counts(c.n() + 1, 0);
    for (std::uint64_t msg = 0; msg < (std::uint64_t{1} << c.k()); ++msg) {
        ew::word_t cw = 0;
        for (int i = 0; i < c.k(); ++i)
            if ((msg >> i) & 1) cw ^= c.generator().row(i)[0];
        ++counts[std::popcount(cw)];
    }
    return counts;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion1() {
    const auto grid = linspace(0.0, 1.0, 101);
    std::vector<ew::BinaryCode> codes = {
        ew::repetition_code(4), ew::rm_code(1, 3), ew::rm_code(1, 4),
        ew::random_code(12, 6, 101), ew::random_code(12, 6, 202)};
    double worst = 0.0;
    for (const auto& c : codes)
        worst = std::max(worst, ew::verify_exit_mu_identity(c, grid));
    report(1, worst <= 1e-9,
           "identity max grid discrepancy = " + ew::fmt(worst) + " (<= 1e-9)");
}

void criterion2() {
    bool ok = true;
    for (auto [r, m] : {std::pair{1, 3}, {1, 4}, {2, 4}, {2, 5}}) {
        auto code = ew::rm_code(r, m);
        auto lhs = ew::weight_distribution_exact(ew::dual(code));
        auto rhs = ew::macwilliams(ew::weight_distribution_exact(code));
        if (lhs.counts != rhs.counts) ok = false;
    }
    report(2, ok, "dual enumeration equals MacWilliams transform for "
                  "RM(1,3), RM(1,4), RM(2,4), RM(2,5)");
}

void criterion3() {
    auto rm13 = ew::weight_distribution_exact(ew::rm_code(1, 3));
    const std::vector<long long> expect = {1, 0, 0, 0, 14, 0, 0, 0, 1};
    bool ok = true;
    for (int i = 0; i <= 8; ++i)
        if (rm13.counts[i] != expect[i]) ok = false;
    // independent oracle for the frozen values
    auto oracle = spectrum_oracle(ew::rm_code(1, 3));
    for (int i = 0; i <= 8; ++i)
        if (oracle[i] != expect[i]) ok = false;

    auto rm25 = ew::weight_distribution_exact(ew::rm_code(2, 5));
    ok = ok && rm25.counts[0] == 1 && rm25.total() == (ew::BigInt(1) << 16) &&
         rm25.symmetric() && rm25.min_distance() == 8;
    report(3, ok, "RM(1,3) spectrum = (1,0,0,0,14,0,0,0,1); RM(2,5): a_0=1, "
                  "sum=2^16, symmetric, d=8");
}

void criterion4() {
    int violations = 0;
    for (int w = 1; w <= 20; ++w)
        for (int pi = 1; pi <= 9; ++pi) {
            const double p = 0.05 * pi;
            if (ew::sanov_term(w, p) < binomial_tail_half(w, p)) ++violations;
        }
    report(4, violations == 0,
           "sanov_term >= exact binomial tail, w in 1..20, p in 0.05..0.45; "
           "violations = " + std::to_string(violations));
}

void criterion5() {
    const auto grid = ew::parse_grid("0:0.5:501", 0.0, 0.5);
    const auto rows = ew::figure1_curves(grid);
    bool ok = rows.front().capacity == 1.0 && rows.front().critical == 1.0 &&
              std::abs(rows.back().capacity) <= 1e-12 &&
              std::abs(rows.back().critical) <= 1e-12;
    const auto& mid = rows[250]; // p = 0.25
    ok = ok && std::abs(mid.p - 0.25) <= 1e-12 &&
         std::abs(mid.capacity - 0.18872) <= 1e-3 &&
         std::abs(mid.critical - 0.0986) <= 1e-3;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i)
        if (!(rows[i].critical < rows[i].capacity)) ok = false;
    report(5, ok, "figure curves: endpoints exact, 1-H(0.25) and "
                  "critical_rate(0.25) within 1e-3, critical < capacity at "
                  "every interior point");
}

void criterion6() {
    auto rm25 = ew::rm_code(2, 5);
    auto sim = ew::simulate_bsc(rm25, 0.02, 100000, 31415, 2);
    auto ub = ew::union_bound(ew::weight_distribution(rm25), 0.02);
    const double se =
        std::sqrt(sim.estimate * (1.0 - sim.estimate) / sim.trials);
    const bool ok1 = sim.estimate <= ub.value + 3.0 * se;

    const double exact = binomial_tail_half(5, 0.3);
    auto rep = ew::simulate_bsc(ew::repetition_code(5), 0.3, 100000, 2718, 2);
    const double sigma = std::sqrt(exact * (1.0 - exact) / rep.trials);
    const bool ok2 = std::abs(rep.estimate - exact) <= 4.0 * sigma;

    report(6, ok1 && ok2,
           "RM(2,5)@p=0.02: estimate " + ew::fmt(sim.estimate) +
               " <= union bound " + ew::fmt(ub.value) +
               (ub.vacuous ? " (vacuous)" : "") + " + 3se; rep[5,1]@p=0.3: |" +
               ew::fmt(rep.estimate) + " - " + ew::fmt(exact) + "| <= 4 sigma");
}

void criterion7() {
    const auto grid = linspace(0.0, 1.0, 41);
    ew::ExitCurveConfig exact_cfg;
    auto c8 = ew::exit_curve(ew::rm_code(1, 3), grid, exact_cfg);

    ew::ExitCurveConfig mc_cfg;
    mc_cfg.mode = ew::CurveMode::monte_carlo;
    mc_cfg.samples = 100000;
    mc_cfg.seed = 7;
    mc_cfg.threads = ew::default_threads();
    auto c32 = ew::exit_curve(ew::rm_code(2, 5), grid, mc_cfg);
    auto c128 = ew::exit_curve(ew::rm_code(3, 7), grid, mc_cfg);

    auto t8 = ew::threshold_estimate(c8);
    auto t32 = ew::threshold_estimate(c32);
    auto t128 = ew::threshold_estimate(c128);

    bool ok = t8.in_grid && t32.in_grid && t128.in_grid;
    ok = ok && std::abs(t128.p_star - 0.5) <= 0.1;
    ok = ok && t8.width > t32.width && t32.width > t128.width;
    report(7, ok,
           "rate-1/2 family thresholds: p*(n=128) = " + ew::fmt(t128.p_star) +
               " in 0.5 +/- 0.1; widths " + ew::fmt(t8.width) + " > " +
               ew::fmt(t32.width) + " > " + ew::fmt(t128.width));
}

void criterion8() {
    bool ok = true;
    std::ostringstream trend;
    trend << "max-slack trend:";
    for (int m = 3; m <= 6; ++m) {
        auto rep = ew::bound_report(ew::rm_code(1, m));
        bool has_zero_row = false;
        for (const auto& r : rep.rows)
            if (r.i == 0 && r.eps1 == 0.0 && r.log2_ai == 0.0) has_zero_row = true;
        ok = ok && has_zero_row && !rep.rows.empty();
        trend << " m=" << m << ":" << ew::fmt(rep.max_eps1);
    }
    report(8, ok, "bound reports for RM(1,3..6) with eps_0 = 0 rows; " + trend.str());
}

void criterion9(const std::string& cli) {
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string base = "/tmp/ew_accept";
    bool ok = true;
    ok &= run("exit --rm 2 4 --mc --samples 20000 --seed 11 --grid 0.2:0.8:7 "
              "--threads 1 --out " + base + "_a");
    ok &= run("exit --rm 2 4 --mc --samples 20000 --seed 11 --grid 0.2:0.8:7 "
              "--threads 3 --out " + base + "_b");
    ok &= slurp(base + "_a.exit.csv") == slurp(base + "_b.exit.csv");
    ok &= !slurp(base + "_a.exit.csv").empty();

    ok &= run("bsc --rm 1 3 --p 0.1 --trials 20000 --seed 3 --threads 1 "
              "--format json --out " + base + "_c");
    ok &= run("bsc --rm 1 3 --p 0.1 --trials 20000 --seed 3 --threads 4 "
              "--format json --out " + base + "_d");
    ok &= slurp(base + "_c.sim.json") == slurp(base + "_d.sim.json");
    ok &= !slurp(base + "_c.sim.json").empty();
    report(9, ok, "MC and simulation outputs byte-identical across thread counts");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli-binary>\n";
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(argv[1]);
    const auto secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT")
              << " (" << ew::fmt(secs) << " s)\n";
    return failures == 0 ? 0 : 1;
}
