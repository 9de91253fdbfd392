// Command-line front end: constructs codes, runs the spectrum / EXIT / BSC
// experiments, and emits reproducible CSV or JSON tables.

#include <CLI11.hpp>

#include <exitweight/bsc.hpp>
#include <exitweight/code.hpp>
#include <exitweight/exit_mu.hpp>
#include <exitweight/io.hpp>
#include <exitweight/spectrum.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace ew = exitweight;

namespace {

struct CodeSpec {
    std::vector<int> rm; // r m
    std::string file;

    ew::BinaryCode build() const {
        if (!rm.empty() && !file.empty())
            throw ew::parameter_error("give exactly one of --rm and --code");
        if (!rm.empty()) return ew::rm_code(rm[0], rm[1]);
        if (!file.empty()) return ew::load_gm_file(file);
        throw ew::parameter_error("a code is required: --rm r m or --code file.gm");
    }
};

void add_code_options(CLI::App* cmd, CodeSpec& spec) {
    cmd->add_option("--rm", spec.rm, "Reed-Muller parameters r m")->expected(2);
    cmd->add_option("--code", spec.file, "generator matrix file (.gm format)");
}

unsigned thread_default() {
    if (const char* env = std::getenv("EXITWEIGHT_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return ew::default_threads();
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw ew::parameter_error("cannot open output file " + path);
    return f;
}

// Writes to "<prefix><suffix>" when a prefix is given, else to stdout with a
// section banner.
void emit(const std::string& prefix, const std::string& suffix,
          const std::function<void(std::ostream&)>& writer) {
    if (prefix.empty()) {
        std::cout << "# --- " << suffix << " ---\n";
        writer(std::cout);
    } else {
        auto f = open_out(prefix + suffix);
        writer(*f);
    }
}

int run_spectrum(const CodeSpec& spec, const std::string& format,
                 const std::string& out, bool pretty, int cutoff) {
    const auto code = spec.build();
    const auto wd = ew::weight_distribution(code, cutoff);
    const auto rep = ew::bound_report(code, cutoff);
    const std::string ext = format == "json" ? ".json" : ".csv";
    emit(out, ".spectrum" + ext, [&](std::ostream& os) {
        if (format == "json") os << ew::spectrum_json(wd).dump(2) << '\n';
        else ew::write_spectrum_csv(os, wd);
    });
    emit(out, ".bounds" + ext, [&](std::ostream& os) {
        if (format == "json") os << ew::bound_report_json(rep).dump(2) << '\n';
        else ew::write_bound_report_csv(os, rep);
    });
    if (pretty) {
        std::cout << code.name() << ": [" << code.n() << ',' << code.k()
                  << "] rate " << ew::fmt(code.rate()) << ", d = "
                  << wd.min_distance() << ", max slack eps1 = "
                  << ew::fmt(rep.max_eps1) << '\n';
    }
    return 0;
}

int run_exit(const CodeSpec& spec, const std::string& grid_spec, bool mc,
             std::uint64_t samples, std::optional<std::uint64_t> seed,
             unsigned threads, bool verify_lemma, const std::string& format,
             const std::string& out, bool pretty) {
    const auto code = spec.build();
    const auto grid = ew::parse_grid(grid_spec);

    ew::ExitCurveConfig cfg;
    cfg.mode = mc ? ew::CurveMode::monte_carlo : ew::CurveMode::exact;
    cfg.samples = samples;
    cfg.threads = threads;
    if (mc) {
        if (!seed) throw ew::parameter_error("--seed is required in MC mode");
        cfg.seed = *seed;
    }
    const auto curve = ew::exit_curve(code, grid, cfg);
    const std::string ext = format == "json" ? ".json" : ".csv";
    emit(out, ".exit" + ext, [&](std::ostream& os) {
        if (format == "json") os << ew::curve_json(curve).dump(2) << '\n';
        else {
            if (mc)
                os << "# code=" << code.name() << " mode=mc samples=" << samples
                   << " seed=" << cfg.seed << '\n';
            ew::write_exit_curve_csv(os, curve);
        }
    });

    double discrepancy = 0.0;
    if (!mc) {
        const auto sw = ew::subset_sweep(code);
        emit(out, ".mu" + ext, [&](std::ostream& os) {
            if (format == "json") {
                nlohmann::json j;
                j["schema_version"] = ew::schema_version;
                j["code"] = code.name();
                auto rows = nlohmann::json::array();
                for (double l : grid)
                    rows.push_back({{"lambda", l},
                                    {"mu", ew::mu_exact(sw, l)},
                                    {"dmu", ew::mu_derivative_exact(sw, l)},
                                    {"identity_rhs",
                                     sw.n * (1.0 - ew::exit_avg_exact(sw, 1.0 - l))}});
                j["rows"] = rows;
                os << j.dump(2) << '\n';
            } else {
                ew::write_mu_table_csv(os, sw, grid);
            }
        });
        discrepancy = ew::verify_exit_mu_identity(code, grid);
        std::cout << "identity_max_discrepancy," << ew::fmt(discrepancy) << '\n';
    }

    const auto th = ew::threshold_estimate(curve);
    if (th.in_grid)
        std::cout << "threshold,p_star=" << ew::fmt(th.p_star) << ",width="
                  << ew::fmt(th.width) << ",p_star_err=" << ew::fmt(th.p_star_err)
                  << '\n';
    else
        std::cout << "threshold,outside_grid\n";
    if (pretty)
        std::cout << code.name() << ": " << (mc ? "MC" : "exact")
                  << " EXIT curve over " << grid.size() << " points\n";

    if (verify_lemma) {
        if (mc) throw ew::parameter_error("--verify-lemma requires exact mode");
        if (discrepancy > 1e-9) {
            std::cerr << "identity check FAILED: discrepancy "
                      << ew::fmt(discrepancy) << " > 1e-9\n";
            return 1;
        }
    }
    return 0;
}

int run_bsc(const CodeSpec& spec, bool figure1, const std::string& grid_spec,
            double p, std::uint64_t trials, std::optional<std::uint64_t> seed,
            unsigned threads, const std::string& format, const std::string& out,
            bool pretty) {
    const std::string ext = format == "json" ? ".json" : ".csv";
    if (figure1) {
        const auto grid = ew::parse_grid(grid_spec.empty() ? "0:0.5:501" : grid_spec,
                                         0.0, 0.5);
        const auto rows = ew::figure1_curves(grid);
        emit(out, ".figure1" + ext, [&](std::ostream& os) {
            if (format == "json") {
                nlohmann::json j;
                j["schema_version"] = ew::schema_version;
                auto arr = nlohmann::json::array();
                for (const auto& r : rows)
                    arr.push_back({{"p", r.p},
                                   {"capacity", r.capacity},
                                   {"critical_rate", r.critical}});
                j["rows"] = arr;
                os << j.dump(2) << '\n';
            } else {
                ew::write_figure1_csv(os, rows);
            }
        });
        return 0;
    }

    const auto code = spec.build();
    if (!seed) throw ew::parameter_error("--seed is required for simulation");
    const auto res = ew::simulate_bsc(code, p, trials, *seed, threads);
    const auto wd = ew::weight_distribution(code);
    const auto ub = ew::union_bound(wd, p);
    const auto chk = ew::union_bound_hypothesis(wd, p);
    emit(out, ".sim" + ext, [&](std::ostream& os) {
        if (format == "json") {
            auto j = ew::sim_result_json(res);
            j["code"] = code.name();
            j["union_bound"] = ub.value;
            j["union_bound_vacuous"] = ub.vacuous;
            j["growth_constant_c"] = chk.c;
            j["growth_hypothesis_met"] = chk.hypothesis_met;
            j["d_over_log2n"] = chk.d_over_log2n;
            os << j.dump(2) << '\n';
        } else {
            os << "p,trials,errors,estimate,ci95_lo,ci95_hi,seed,union_bound,"
                  "vacuous_flag\n"
               << ew::fmt(res.p) << ',' << res.trials << ',' << res.errors << ','
               << ew::fmt(res.estimate) << ',' << ew::fmt(res.ci95_lo) << ','
               << ew::fmt(res.ci95_hi) << ',' << res.seed << ','
               << ew::fmt(ub.value) << ',' << (ub.vacuous ? 1 : 0) << '\n';
        }
    });
    if (pretty)
        std::cout << code.name() << " @ p=" << ew::fmt(p) << ": estimate "
                  << ew::fmt(res.estimate) << " in [" << ew::fmt(res.ci95_lo)
                  << ", " << ew::fmt(res.ci95_hi) << "], union bound "
                  << ew::fmt(ub.value) << (ub.vacuous ? " (vacuous)" : "") << '\n';
    return 0;
}

int run_bounds(const CodeSpec& spec, double rstar, double cc, double tt,
               const std::string& format, const std::string& out, bool pretty,
               int cutoff) {
    const auto code = spec.build();
    const auto rep = ew::bound_report(code, cutoff);
    const std::string ext = format == "json" ? ".json" : ".csv";
    const double rs = rstar > 0.0 ? rstar : code.rate();
    emit(out, ".bounds" + ext, [&](std::ostream& os) {
        if (format == "json") {
            auto j = ew::bound_report_json(rep);
            j["rstar"] = rs;
            auto arr = nlohmann::json::array();
            for (const auto& r : rep.rows)
                arr.push_back({{"i", r.i},
                               {"min_dist_regime", ew::bound_min_dist_regime(r.i, rs)},
                               {"min_dist_regime_istar",
                                ew::bound_min_dist_regime_istar(r.i, rep.n, rs)}});
            j["min_dist_regime"] = arr;
            if (cc > 0.0 && tt > 0.0)
                j["a_of_R_c_t"] = ew::a_of_R_c_t(code.rate(), cc, tt);
            os << j.dump(2) << '\n';
        } else {
            os << "i,istar,log2_ai,bound1,bound2,branch,eps1,eps2,mindist_i,"
                  "mindist_istar\n";
            for (const auto& r : rep.rows)
                os << r.i << ',' << r.istar << ',' << ew::fmt(r.log2_ai) << ','
                   << ew::fmt(r.bound1) << ',' << ew::fmt(r.bound2) << ','
                   << r.branch << ',' << ew::fmt(r.eps1) << ',' << ew::fmt(r.eps2)
                   << ',' << ew::fmt(ew::bound_min_dist_regime(r.i, rs)) << ','
                   << ew::fmt(ew::bound_min_dist_regime_istar(r.i, rep.n, rs)) << '\n';
        }
    });
    if (pretty) {
        std::cout << code.name() << ": max slack eps1 = " << ew::fmt(rep.max_eps1)
                  << ", eps2 = " << ew::fmt(rep.max_eps2) << '\n';
        if (cc > 0.0 && tt > 0.0)
            std::cout << "a(R=" << ew::fmt(code.rate()) << ",c=" << ew::fmt(cc)
                      << ",t=" << ew::fmt(tt) << ") = "
                      << ew::fmt(ew::a_of_R_c_t(code.rate(), cc, tt)) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight spectra, EXIT functions and BSC bounds for binary "
                 "linear codes"};
    app.require_subcommand(1);

    std::string format = "csv", out, grid_spec = "0:1:101", bsc_grid;
    bool pretty = false, mc = false, verify_lemma = false, figure1 = false;
    std::uint64_t samples = 100000, trials = 100000;
    std::optional<std::uint64_t> seed;
    unsigned threads = thread_default();
    int cutoff = ew::default_enum_cutoff_k;
    double p = 0.0, rstar = 0.0, cc = 0.0, tt = 0.0;
    CodeSpec spec_spectrum, spec_exit, spec_bsc, spec_bounds;

    auto* sp = app.add_subcommand("spectrum", "weight distribution and bound report");
    add_code_options(sp, spec_spectrum);
    sp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sp->add_option("--out", out, "output file prefix");
    sp->add_option("--cutoff", cutoff, "enumeration cutoff on dimension");
    sp->add_flag("--pretty", pretty);

    auto* ex = app.add_subcommand("exit", "EXIT curves, mu, and the identity check");
    add_code_options(ex, spec_exit);
    ex->add_option("--grid", grid_spec, "start:end:points within [0,1]");
    ex->add_flag("--mc", mc, "Monte Carlo mode");
    ex->add_option("--samples", samples, "MC samples per grid point");
    ex->add_option("--seed", seed, "master seed (required for MC)");
    ex->add_option("--threads", threads);
    ex->add_flag("--verify-lemma", verify_lemma,
                 "fail if the identity discrepancy exceeds 1e-9");
    ex->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    ex->add_option("--out", out);
    ex->add_flag("--pretty", pretty);

    auto* bs = app.add_subcommand("bsc", "ML simulation, union bound, rate curves");
    add_code_options(bs, spec_bsc);
    bs->add_option("--p", p, "crossover probability in [0, 1/2]");
    bs->add_option("--trials", trials);
    bs->add_option("--seed", seed);
    bs->add_option("--threads", threads);
    bs->add_flag("--figure1", figure1, "emit capacity vs critical-rate table");
    bs->add_option("--grid", bsc_grid, "start:end:points within [0, 1/2]");
    bs->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    bs->add_option("--out", out);
    bs->add_flag("--pretty", pretty);

    auto* bd = app.add_subcommand("bounds", "spectrum bound evaluators");
    add_code_options(bd, spec_bounds);
    bd->add_option("--rstar", rstar, "rate parameter for the distance-regime bound");
    bd->add_option("--c", cc, "minimum-distance exponent in (0,1]");
    bd->add_option("--t", tt, "threshold-sharpness exponent");
    bd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    bd->add_option("--out", out);
    bd->add_option("--cutoff", cutoff);
    bd->add_flag("--pretty", pretty);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) return run_spectrum(spec_spectrum, format, out, pretty, cutoff);
        if (ex->parsed())
            return run_exit(spec_exit, grid_spec, mc, samples, seed, threads,
                            verify_lemma, format, out, pretty);
        if (bs->parsed())
            return run_bsc(spec_bsc, figure1, bsc_grid, p, trials, seed, threads,
                           format, out, pretty);
        if (bd->parsed())
            return run_bounds(spec_bounds, rstar, cc, tt, format, out, pretty, cutoff);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
