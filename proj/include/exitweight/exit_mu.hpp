#pragma once

// EXIT functions on the BEC, the corank functional mu(lambda), its exact
// polynomial derivative, and the identity dmu/dlambda = n(1 - h(1-lambda)).
//
// Exact mode sweeps all 2^n coordinate subsets once per code and stores the
// weight-resolved counts, so mu, its derivative, and every per-bit EXIT
// function are then exact polynomial evaluations on any grid.

#include "code.hpp"
#include "mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace exitweight {

inline constexpr int default_exact_cutoff_n = 20;

/// Weight-resolved subset statistics of a code's binary matroid.
struct SubsetSweep {
    int n = 0;
    int k = 0;
    // corank_sum[w] = sum of f(S) over subsets of size w
    std::vector<double> corank_sum;
    // unrec[i][w] = #{S : |S|=w, i not in S, column i not in span(S)}
    std::vector<std::vector<double>> unrec;
};

/// One DFS over all 2^n subsets, carrying the column-space basis.
inline SubsetSweep subset_sweep(const BinaryCode& code,
                                int cutoff_n = default_exact_cutoff_n) {
    const int n = code.n(), k = code.k();
    if (n > cutoff_n)
        throw cutoff_error("subset_sweep: n=" + std::to_string(n) +
                           " above exact cutoff " + std::to_string(cutoff_n));
    SubsetSweep sw;
    sw.n = n;
    sw.k = k;
    sw.corank_sum.assign(n + 1, 0.0);
    sw.unrec.assign(n, std::vector<double>(n, 0.0));

    std::uint64_t in_mask = 0;
    auto rec = [&](auto&& self, int depth, const Gf2Basis64& basis, int size) -> void {
        if (depth == n) {
            sw.corank_sum[size] += size - static_cast<int>(basis.rank());
            for (int i = 0; i < n; ++i) {
                if ((in_mask >> i) & 1) continue;
                if (!basis.contains(code.column(i))) sw.unrec[i][size] += 1.0;
            }
            return;
        }
        self(self, depth + 1, basis, size); // exclude coordinate `depth`
        Gf2Basis64 b2 = basis;
        b2.insert(code.column(depth));
        in_mask |= std::uint64_t{1} << depth;
        self(self, depth + 1, b2, size + 1);
        in_mask &= ~(std::uint64_t{1} << depth);
    };
    rec(rec, 0, Gf2Basis64{}, 0);
    return sw;
}

/// mu(lambda) = E_{S~lambda} f(S), exact.
inline double mu_exact(const SubsetSweep& sw, double lambda) {
    double s = 0.0;
    for (int w = 0; w <= sw.n; ++w) {
        if (sw.corank_sum[w] == 0.0) continue;
        s += sw.corank_sum[w] * std::pow(lambda, w) * std::pow(1.0 - lambda, sw.n - w);
    }
    return s;
}

/// d mu / d lambda, exact polynomial derivative. Endpoint terms with a zero
/// coefficient factor are dropped exactly, never evaluated as 0^(-1).
inline double mu_derivative_exact(const SubsetSweep& sw, double lambda) {
    double s = 0.0;
    const int n = sw.n;
    for (int w = 0; w <= n; ++w) {
        const double a = sw.corank_sum[w];
        if (a == 0.0) continue;
        if (w > 0)
            s += a * w * std::pow(lambda, w - 1) * std::pow(1.0 - lambda, n - w);
        if (w < n)
            s -= a * (n - w) * std::pow(lambda, w) * std::pow(1.0 - lambda, n - w - 1);
    }
    return s;
}

/// EXIT function of bit i on BEC(p), exact. The sum runs over unerased sets
/// R not containing i, with inclusion probability lambda = 1-p.
inline double exit_bit_exact(const SubsetSweep& sw, int i, double p) {
    const double lambda = 1.0 - p;
    double s = 0.0;
    for (int w = 0; w < sw.n; ++w) {
        if (sw.unrec[i][w] == 0.0) continue;
        s += sw.unrec[i][w] * std::pow(lambda, w) * std::pow(1.0 - lambda, sw.n - 1 - w);
    }
    return s;
}

inline double exit_avg_exact(const SubsetSweep& sw, double p) {
    double s = 0.0;
    for (int i = 0; i < sw.n; ++i) s += exit_bit_exact(sw, i, p);
    return s / sw.n;
}

/// Max over the grid of |dmu/dlambda - n(1 - h(1-lambda))|, both exact.
inline double verify_exit_mu_identity(const BinaryCode& code,
                             const std::vector<double>& grid,
                             int cutoff_n = default_exact_cutoff_n) {
    const SubsetSweep sw = subset_sweep(code, cutoff_n);
    double worst = 0.0;
    for (double lambda : grid) {
        const double lhs = mu_derivative_exact(sw, lambda);
        const double rhs = code.n() * (1.0 - exit_avg_exact(sw, 1.0 - lambda));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo estimate of mu(lambda): sample S coordinate-wise, average f(S).
inline McEstimate mu_mc(const BinaryCode& code, double lambda,
                        std::uint64_t samples, std::uint64_t seed,
                        unsigned threads = 1) {
    if (samples == 0) throw parameter_error("mu_mc: zero-sample config");
    if (!code.has_packed_columns())
        throw cutoff_error("mu_mc: requires k <= 64");
    const int n = code.n();
    const std::uint64_t label =
        splitmix64(0x6d75ULL ^ (std::uint64_t(std::llround(lambda * (1ULL << 32)))));
    std::vector<double> bsum(mc_block_count, 0.0), bsq(mc_block_count, 0.0);
    run_blocks(samples, threads, [&](std::size_t b, std::uint64_t trials) {
        std::mt19937_64 rng(substream_seed(seed, label, b));
        std::bernoulli_distribution keep(lambda);
        Gf2Basis64 basis;
        for (std::uint64_t t = 0; t < trials; ++t) {
            basis.clear();
            int size = 0;
            for (int j = 0; j < n; ++j) {
                if (keep(rng)) {
                    ++size;
                    basis.insert(code.column(j));
                }
            }
            const double f = size - static_cast<int>(basis.rank());
            bsum[b] += f;
            bsq[b] += f * f;
        }
    });
    double s = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < mc_block_count; ++b) { s += bsum[b]; s2 += bsq[b]; }
    const double mean = s / samples;
    const double var = std::max(0.0, s2 / samples - mean * mean);
    return {mean, std::sqrt(var / samples)};
}

namespace detail {

// Per-sample average-EXIT indicator count: for a kept set U, counts the
// coordinates i with column i outside span(U \ {i}). Kept coordinates are
// classified through the kernel of the kept-column matrix: i in U is
// unrecoverable iff it appears in no GF(2) dependency among U's columns.
class ExitSampler {
  public:
    explicit ExitSampler(const BinaryCode& code)
        : code_(code), n_(code.n()), cw_((n_ + 63) / 64),
          combos_(64, std::vector<word_t>(cw_)), dep_(cw_), kept_(cw_) {
        if (!code.has_packed_columns())
            throw cutoff_error("exit MC: requires k <= 64");
    }

    /// Returns the unrecoverable-coordinate count in [0, n].
    int sample(std::mt19937_64& rng, double keep_prob) {
        std::bernoulli_distribution keep(keep_prob);
        std::fill(dep_.begin(), dep_.end(), word_t{0});
        std::fill(kept_.begin(), kept_.end(), word_t{0});
        for (auto& p : pivot_at_) p = -1;
        nbasis_ = 0;

        std::vector<word_t> combo(cw_);
        for (int j = 0; j < n_; ++j) {
            if (!keep(rng)) continue;
            kept_[j / 64] |= word_t{1} << (j % 64);
            word_t v = code_.column(j);
            std::fill(combo.begin(), combo.end(), word_t{0});
            combo[j / 64] |= word_t{1} << (j % 64);
            bool became_pivot = false;
            while (v != 0) {
                const int lead = 63 - std::countl_zero(v);
                const int at = pivot_at_[lead];
                if (at < 0) {
                    pivot_at_[lead] = nbasis_;
                    basis_[nbasis_] = v;
                    combos_[nbasis_] = combo;
                    ++nbasis_;
                    became_pivot = true;
                    break;
                }
                v ^= basis_[at];
                for (std::size_t w = 0; w < cw_; ++w) combo[w] ^= combos_[at][w];
            }
            if (!became_pivot) {
                // column reduced to zero: combo is a dependency containing j
                for (std::size_t w = 0; w < cw_; ++w) dep_[w] |= combo[w];
            }
        }

        int count = 0;
        // kept coordinates: unrecoverable iff not in any dependency support
        for (std::size_t w = 0; w < cw_; ++w)
            count += std::popcount(kept_[w] & ~dep_[w]);
        // erased coordinates: unrecoverable iff column outside span(U)
        for (int i = 0; i < n_; ++i) {
            if ((kept_[i / 64] >> (i % 64)) & 1) continue;
            if (!in_span(code_.column(i))) ++count;
        }
        return count;
    }

  private:
    bool in_span(word_t v) const {
        while (v != 0) {
            const int lead = 63 - std::countl_zero(v);
            const int at = pivot_at_[lead];
            if (at < 0) return false;
            v ^= basis_[at];
        }
        return true;
    }

    const BinaryCode& code_;
    int n_;
    std::size_t cw_;
    word_t basis_[64] = {};
    std::vector<std::vector<word_t>> combos_;
    int pivot_at_[64] = {};
    int nbasis_ = 0;
    std::vector<word_t> dep_, kept_;
};

} // namespace detail

/// Monte Carlo estimate of the average EXIT function h(p).
inline McEstimate exit_avg_mc(const BinaryCode& code, double p,
                              std::uint64_t samples, std::uint64_t seed,
                              unsigned threads = 1) {
    if (samples == 0) throw parameter_error("exit_avg_mc: zero-sample config");
    const int n = code.n();
    const std::uint64_t label =
        splitmix64(0x65786974ULL ^ std::uint64_t(std::llround(p * (1ULL << 32))));
    std::vector<double> bsum(mc_block_count, 0.0), bsq(mc_block_count, 0.0);
    run_blocks(samples, threads, [&](std::size_t b, std::uint64_t trials) {
        std::mt19937_64 rng(substream_seed(seed, label, b));
        detail::ExitSampler sampler(code);
        for (std::uint64_t t = 0; t < trials; ++t) {
            const double frac = double(sampler.sample(rng, 1.0 - p)) / n;
            bsum[b] += frac;
            bsq[b] += frac * frac;
        }
    });
    double s = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < mc_block_count; ++b) { s += bsum[b]; s2 += bsq[b]; }
    const double mean = s / samples;
    const double var = std::max(0.0, s2 / samples - mean * mean);
    return {mean, std::sqrt(var / samples)};
}

/// Monte Carlo estimate of a single bit's EXIT function h_i(p): frequency of
/// column i falling outside the span of a sampled unerased set R, i not in R.
inline McEstimate exit_bit_mc(const BinaryCode& code, int i, double p,
                              std::uint64_t samples, std::uint64_t seed,
                              unsigned threads = 1) {
    if (samples == 0) throw parameter_error("exit_bit_mc: zero-sample config");
    if (i < 0 || i >= code.n()) throw parameter_error("exit_bit_mc: bad coordinate");
    if (!code.has_packed_columns())
        throw cutoff_error("exit_bit_mc: requires k <= 64");
    const int n = code.n();
    const double lambda = 1.0 - p;
    const std::uint64_t label = splitmix64(
        0x6269ULL ^ (std::uint64_t(i) << 40) ^
        std::uint64_t(std::llround(p * (1ULL << 32))));
    std::vector<std::uint64_t> hits(mc_block_count, 0);
    run_blocks(samples, threads, [&](std::size_t b, std::uint64_t trials) {
        std::mt19937_64 rng(substream_seed(seed, label, b));
        std::bernoulli_distribution keep(lambda);
        Gf2Basis64 basis;
        for (std::uint64_t t = 0; t < trials; ++t) {
            basis.clear();
            for (int j = 0; j < n; ++j) {
                const bool in = keep(rng);
                if (j != i && in) basis.insert(code.column(j));
            }
            if (!basis.contains(code.column(i))) ++hits[b];
        }
    });
    std::uint64_t h = 0;
    for (auto v : hits) h += v;
    const double mean = double(h) / double(samples);
    return {mean, std::sqrt(mean * (1.0 - mean) / double(samples))};
}

enum class CurveMode { exact, monte_carlo };

struct CurveSamples {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> stderrs; // identically 0 in exact mode
    CurveMode mode = CurveMode::exact;
    std::string code_name;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

struct ExitCurveConfig {
    CurveMode mode = CurveMode::exact;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    int exact_cutoff_n = default_exact_cutoff_n;
};

/// Average EXIT curve h(p) over a grid of erasure probabilities.
inline CurveSamples exit_curve(const BinaryCode& code,
                               const std::vector<double>& grid,
                               const ExitCurveConfig& cfg = {}) {
    for (double p : grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw parameter_error("exit_curve: grid values must lie in [0,1]");
    CurveSamples out;
    out.grid = grid;
    out.mode = cfg.mode;
    out.code_name = code.name();
    out.seed = cfg.seed;
    if (cfg.mode == CurveMode::exact) {
        const SubsetSweep sw = subset_sweep(code, cfg.exact_cutoff_n);
        for (double p : grid) {
            out.values.push_back(exit_avg_exact(sw, p));
            out.stderrs.push_back(0.0);
        }
    } else {
        out.samples = cfg.samples;
        for (double p : grid) {
            auto est = exit_avg_mc(code, p, cfg.samples, cfg.seed, cfg.threads);
            out.values.push_back(est.value);
            out.stderrs.push_back(est.stderr_);
        }
    }
    return out;
}

/// Pool-adjacent-violators isotonic fit (nondecreasing).
inline std::vector<double> isotonic_fit(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> level(n), weight(n);
    std::vector<std::size_t> count(n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        level[m] = y[i];
        weight[m] = 1.0;
        count[m] = 1;
        ++m;
        while (m > 1 && level[m - 2] > level[m - 1]) {
            const double w = weight[m - 2] + weight[m - 1];
            level[m - 2] = (level[m - 2] * weight[m - 2] + level[m - 1] * weight[m - 1]) / w;
            weight[m - 2] = w;
            count[m - 2] += count[m - 1];
            --m;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t b = 0; b < m; ++b)
        out.insert(out.end(), count[b], level[b]);
    return out;
}

struct ThresholdEstimate {
    bool in_grid = false;   // false: curve never crosses 1/2 within the grid
    double p_star = 0.0;    // grid-interpolated solution of h(p) = 1/2
    double width = 0.0;     // p(h=0.9) - p(h=0.1)
    double p_star_err = 0.0;
};

namespace detail {

inline bool crossing(const std::vector<double>& x, const std::vector<double>& y,
                     double level, double& where) {
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (y[i] <= level && y[i + 1] >= level) {
            if (y[i + 1] == y[i]) { where = x[i]; return true; }
            where = x[i] + (level - y[i]) / (y[i + 1] - y[i]) * (x[i + 1] - x[i]);
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Threshold location and 0.1-0.9 transition width from an average-EXIT curve.
inline ThresholdEstimate threshold_estimate(const CurveSamples& curve) {
    ThresholdEstimate est;
    const auto fit = isotonic_fit(curve.values);
    double p50 = 0.0, p10 = 0.0, p90 = 0.0;
    if (!detail::crossing(curve.grid, fit, 0.5, p50)) return est;
    est.in_grid = true;
    est.p_star = p50;
    if (detail::crossing(curve.grid, fit, 0.1, p10) &&
        detail::crossing(curve.grid, fit, 0.9, p90))
        est.width = p90 - p10;
    // uncertainty: local stderr over local slope at the crossing
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < curve.grid.size(); ++i)
        if (curve.grid[i] <= p50) at = i;
    const double dy = fit[std::min(at + 1, fit.size() - 1)] - fit[at];
    const double dx = curve.grid[std::min(at + 1, fit.size() - 1)] - curve.grid[at];
    if (dy > 0 && dx > 0 && !curve.stderrs.empty())
        est.p_star_err = curve.stderrs[at] * dx / dy;
    return est;
}

} // namespace exitweight
