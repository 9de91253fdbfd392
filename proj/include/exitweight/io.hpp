#pragma once

// CSV/JSON emission for spectra, bound reports, curves, and simulation
// results, plus the "start:end:points" grid syntax. All numeric formatting
// is locale-independent and reproducible byte-for-byte.

#include "bsc.hpp"
#include "exit_mu.hpp"
#include "spectrum.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace exitweight {

inline constexpr int schema_version = 1;

/// Shortest round-trippable decimal representation.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            std::sscanf(shorter, "%lf", &back);
            if (back == v) return shorter;
        }
    }
    return buf;
}

/// Inclusive grid "start:end:points" with points >= 2, inside [lo, hi].
inline std::vector<double> parse_grid(const std::string& spec, double lo = 0.0,
                                      double hi = 1.0) {
    double a = 0.0, b = 0.0;
    long pts = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &a, &b, &pts, &extra) != 3)
        throw parameter_error("grid: expected start:end:points, got \"" + spec + "\"");
    if (pts < 2 || a >= b || a < lo || b > hi)
        throw parameter_error("grid: need lo <= start < end <= hi and points >= 2");
    std::vector<double> g(pts);
    for (long i = 0; i < pts; ++i)
        g[i] = a + (b - a) * double(i) / double(pts - 1);
    g.front() = a;
    g.back() = b;
    return g;
}

// ---- CSV ----

inline void write_spectrum_csv(std::ostream& os, const WeightDistribution& wd) {
    os << "i,a_i\n";
    for (int i = 0; i <= wd.n; ++i) os << i << ',' << wd.counts[i] << '\n';
}

inline void write_bound_report_csv(std::ostream& os, const BoundReport& rep) {
    os << "i,istar,log2_ai,bound1,bound2,branch,eps1,eps2\n";
    for (const auto& r : rep.rows)
        os << r.i << ',' << r.istar << ',' << fmt(r.log2_ai) << ','
           << fmt(r.bound1) << ',' << fmt(r.bound2) << ',' << r.branch << ','
           << fmt(r.eps1) << ',' << fmt(r.eps2) << '\n';
}

inline void write_exit_curve_csv(std::ostream& os, const CurveSamples& c) {
    os << "p,h,stderr\n";
    for (std::size_t i = 0; i < c.grid.size(); ++i)
        os << fmt(c.grid[i]) << ',' << fmt(c.values[i]) << ',' << fmt(c.stderrs[i])
           << '\n';
}

inline void write_mu_table_csv(std::ostream& os, const SubsetSweep& sw,
                               const std::vector<double>& grid) {
    os << "lambda,mu,dmu,identity_rhs\n";
    for (double l : grid) {
        const double rhs = sw.n * (1.0 - exit_avg_exact(sw, 1.0 - l));
        os << fmt(l) << ',' << fmt(mu_exact(sw, l)) << ','
           << fmt(mu_derivative_exact(sw, l)) << ',' << fmt(rhs) << '\n';
    }
}

inline void write_figure1_csv(std::ostream& os,
                              const std::vector<Figure1Row>& rows) {
    os << "p,capacity,critical_rate\n";
    for (const auto& r : rows)
        os << fmt(r.p) << ',' << fmt(r.capacity) << ',' << fmt(r.critical) << '\n';
}

inline void write_union_bound_sweep_csv(std::ostream& os,
                                        const WeightDistribution& wd,
                                        const std::vector<double>& grid) {
    os << "p,bound,vacuous_flag\n";
    for (double p : grid) {
        auto ub = union_bound(wd, p);
        os << fmt(p) << ',' << fmt(ub.value) << ',' << (ub.vacuous ? 1 : 0) << '\n';
    }
}

// ---- JSON ----

inline nlohmann::json spectrum_json(const WeightDistribution& wd) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["n"] = wd.n;
    j["k"] = wd.k;
    std::vector<std::string> counts;
    for (const auto& a : wd.counts) counts.push_back(a.str());
    j["counts"] = counts;
    return j;
}

inline nlohmann::json bound_report_json(const BoundReport& rep) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["n"] = rep.n;
    j["k"] = rep.k;
    j["rate"] = rep.rate;
    j["theta"] = rep.theta;
    j["max_eps1"] = rep.max_eps1;
    j["max_eps2"] = rep.max_eps2;
    auto rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"i", r.i},
                        {"istar", r.istar},
                        {"a_i", r.a_i.str()},
                        {"log2_ai", r.log2_ai},
                        {"bound1", r.bound1},
                        {"bound2", r.bound2},
                        {"branch", r.branch},
                        {"eps1", r.eps1},
                        {"eps2", r.eps2}});
    }
    j["rows"] = rows;
    return j;
}

inline nlohmann::json curve_json(const CurveSamples& c) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["code"] = c.code_name;
    j["mode"] = c.mode == CurveMode::exact ? "exact" : "mc";
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["grid"] = c.grid;
    j["values"] = c.values;
    j["stderr"] = c.stderrs;
    return j;
}

inline nlohmann::json sim_result_json(const SimResult& r) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["p"] = r.p;
    j["trials"] = r.trials;
    j["errors"] = r.errors;
    j["estimate"] = r.estimate;
    j["ci95"] = {r.ci95_lo, r.ci95_hi};
    j["seed"] = r.seed;
    j["tie_policy"] = "tie-is-error";
    return j;
}

} // namespace exitweight
