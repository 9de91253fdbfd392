#pragma once

// BSC machinery: binary entropy, the KL tail term, the union bound over a
// weight distribution, exact-ML Monte Carlo simulation, and the analytic
// rate curves compared against channel capacity.

#include "code.hpp"
#include "mc.hpp"
#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace exitweight {

/// Binary entropy H(p) in bits, with H(0) = H(1) = 0.
inline double entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw parameter_error("entropy: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// KL divergence D(1/2 || p) = -1/2 log2(4p(1-p)), in bits.
/// Infinite at p in {0,1}.
inline double kl_half(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw parameter_error("kl_half: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return std::numeric_limits<double>::infinity();
    return -0.5 * std::log2(4.0 * p * (1.0 - p));
}

/// Tail term (w+1)^2 * (4p(1-p))^(w/2), dominating Pr[Bin(w,p) >= w/2].
inline double sanov_term(int w, double p) {
    if (w < 1) throw parameter_error("sanov_term: need w >= 1");
    if (!(p > 0.0 && p < 1.0)) throw parameter_error("sanov_term: need p in (0,1)");
    const double wp1 = w + 1.0;
    return wp1 * wp1 * std::pow(4.0 * p * (1.0 - p), w / 2.0);
}

struct UnionBound {
    double value = 0.0;
    bool vacuous = false; // value >= 1: the bound carries no information
};

/// Block-error union bound: sum over i >= 1 of a_i * sanov_term(i, p).
/// Keeps the exact per-term (i+1)^2 prefactor.
inline UnionBound union_bound(const WeightDistribution& wd, double p) {
    if (!(p > 0.0 && p < 1.0)) throw parameter_error("union_bound: need p in (0,1)");
    double s = 0.0;
    for (int i = 1; i <= wd.n; ++i) {
        if (wd.counts[i] == 0) continue;
        s += wd.counts[i].convert_to<double>() * sanov_term(i, p);
    }
    return {s, s >= 1.0};
}

/// Rate below which the analytic bound guarantees reliable BSC(p) decoding:
/// 1 - (4p(1-p))^(1/(4 ln 2)).
inline double critical_rate(double p) {
    if (!(p >= 0.0 && p <= 0.5))
        throw parameter_error("critical_rate: need p in [0, 1/2]");
    if (p == 0.0) return 1.0;
    return 1.0 - std::pow(4.0 * p * (1.0 - p), 1.0 / (4.0 * std::numbers::ln2));
}

struct Figure1Row {
    double p = 0.0;
    double capacity = 0.0;      // 1 - H(p)
    double critical = 0.0;      // critical_rate(p)
};

/// The two curves plotted against each other: channel capacity 1 - H(p) and
/// the analytic critical-rate curve.
inline std::vector<Figure1Row> figure1_curves(const std::vector<double>& grid) {
    std::vector<Figure1Row> rows;
    rows.reserve(grid.size());
    for (double p : grid) {
        if (!(p >= 0.0 && p <= 0.5))
            throw parameter_error("figure1_curves: grid must lie in [0, 1/2]");
        rows.push_back({p, 1.0 - entropy(p), critical_rate(p)});
    }
    return rows;
}

struct SimResult {
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double estimate = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline void wilson_interval(std::uint64_t errors, std::uint64_t trials,
                            double& lo, double& hi) {
    const double z = 1.959963984540054; // 97.5% normal quantile
    const double nt = double(trials);
    const double phat = double(errors) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

} // namespace detail

/// ML block-error simulation on BSC(p), transmitting the zero codeword.
/// A trial is an error when some nonzero codeword x satisfies
/// |z xor x| <= |z| (ties count as errors). Deterministic in
/// (code, p, trials, seed) regardless of thread count.
inline SimResult simulate_bsc(const BinaryCode& code, double p,
                              std::uint64_t trials, std::uint64_t seed,
                              unsigned threads = 1,
                              int cutoff_k = default_enum_cutoff_k) {
    if (trials == 0) throw parameter_error("simulate_bsc: trials = 0");
    if (!(p >= 0.0 && p <= 0.5))
        throw parameter_error("simulate_bsc: need p in [0, 1/2]");
    if (code.n() > 64)
        throw cutoff_error("simulate_bsc: n > 64 not supported");
    if (code.k() > cutoff_k)
        throw cutoff_error("simulate_bsc: k above enumeration cutoff");

    // nonzero codewords sorted by weight; |z xor x| <= |z| iff |x| <= 2|z & x|
    auto words = enumerate_codewords(code, cutoff_k);
    std::vector<std::pair<int, word_t>> cws;
    cws.reserve(words.size() - 1);
    for (word_t w : words)
        if (w != 0) cws.emplace_back(std::popcount(w), w);
    std::sort(cws.begin(), cws.end());
    const int d = cws.front().first;
    const int n = code.n();

    const std::uint64_t label =
        splitmix64(0x627363ULL ^ std::uint64_t(std::llround(p * (1ULL << 32))));
    std::vector<std::uint64_t> berr(mc_block_count, 0);
    run_blocks(trials, threads, [&](std::size_t b, std::uint64_t bt) {
        std::mt19937_64 rng(substream_seed(seed, label, b));
        std::bernoulli_distribution flip(p);
        for (std::uint64_t t = 0; t < bt; ++t) {
            word_t z = 0;
            for (int j = 0; j < n; ++j)
                if (flip(rng)) z |= word_t{1} << j;
            const int zw = std::popcount(z);
            if (2 * zw < d) continue; // no codeword can be as close as zero
            for (const auto& [xw, x] : cws) {
                if (xw > 2 * zw) break;
                if (xw <= 2 * std::popcount(z & x)) {
                    ++berr[b];
                    break;
                }
            }
        }
    });
    SimResult res;
    res.p = p;
    res.trials = trials;
    res.seed = seed;
    for (auto e : berr) res.errors += e;
    res.estimate = double(res.errors) / double(trials);
    detail::wilson_interval(res.errors, res.trials, res.ci95_lo, res.ci95_hi);
    return res;
}

/// Smallest c with a_i <= c^i for all i >= d: max over i of a_i^(1/i).
inline double fitted_growth_constant(const WeightDistribution& wd) {
    double c = 0.0;
    for (int i = 1; i <= wd.n; ++i) {
        if (wd.counts[i] == 0) continue;
        c = std::max(c, std::exp2(log2_bigint(wd.counts[i]) / i));
    }
    return c;
}

struct GrowthHypothesisCheck {
    double c = 0.0;            // fitted growth constant
    double four_p_q = 0.0;     // 4p(1-p)
    bool hypothesis_met = false; // 4p(1-p) < 1/c^2
    double d_over_log2n = 0.0; // reported, not interpreted
};

/// Explicit predicate for the union-bound hypothesis: 4p(1-p) < 1/c^2 with
/// c fitted from the exact spectrum. Records d/log2(n) without judging it.
inline GrowthHypothesisCheck union_bound_hypothesis(const WeightDistribution& wd, double p) {
    GrowthHypothesisCheck chk;
    chk.c = fitted_growth_constant(wd);
    chk.four_p_q = 4.0 * p * (1.0 - p);
    chk.hypothesis_met = chk.c > 0.0 && chk.four_p_q < 1.0 / (chk.c * chk.c);
    chk.d_over_log2n = double(wd.min_distance()) / std::log2(double(wd.n));
    return chk;
}

} // namespace exitweight
