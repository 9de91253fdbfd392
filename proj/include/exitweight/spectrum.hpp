#pragma once

// Exact weight distributions, the MacWilliams transform (exact integer
// arithmetic), and the weight-distribution bound evaluators. Bounds are
// exposed as exponents in bits; the report quantifies slack instead of
// asserting inequalities whose constants are asymptotic.

#include "code.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace exitweight {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double two_ln_2 = 2.0 * std::numbers::ln2;

struct WeightDistribution {
    int n = 0;
    int k = 0;
    std::vector<BigInt> counts; // a_0 .. a_n

    BigInt total() const {
        BigInt s = 0;
        for (const auto& a : counts) s += a;
        return s;
    }

    /// Smallest nonzero-weight index with a_i > 0.
    int min_distance() const {
        for (int i = 1; i <= n; ++i)
            if (counts[i] > 0) return i;
        return n + 1; // trivial code {0} never occurs here (k >= 1)
    }

    bool symmetric() const {
        for (int i = 0; i <= n; ++i)
            if (counts[i] != counts[n - i]) return false;
        return true;
    }
};

/// log2 of a positive BigInt, exact enough for slack reporting.
inline double log2_bigint(const BigInt& v) {
    if (v <= 0) throw parameter_error("log2_bigint: nonpositive value");
    const auto bits = boost::multiprecision::msb(v); // floor(log2 v)
    if (bits <= 1000) return std::log2(v.convert_to<double>());
    BigInt shifted = v >> (bits - 64);
    return std::log2(shifted.convert_to<double>()) + double(bits - 64);
}

/// Exact spectrum by Gray-code enumeration of all 2^k codewords.
inline WeightDistribution
weight_distribution_exact(const BinaryCode& code,
                          int cutoff_k = default_enum_cutoff_k) {
    if (code.k() > cutoff_k)
        throw cutoff_error("weight_distribution_exact: k=" +
                           std::to_string(code.k()) + " above cutoff " +
                           std::to_string(cutoff_k));
    const int k = code.k();
    const std::size_t wpr = code.generator().words_per_row();
    std::vector<word_t> cw(wpr, 0);
    std::vector<std::uint64_t> counts(code.n() + 1, 0);
    counts[0] = 1;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int bit = std::countr_zero(g);
        const word_t* row = code.generator().row(bit);
        std::size_t w = 0;
        for (std::size_t j = 0; j < wpr; ++j) {
            cw[j] ^= row[j];
            w += std::popcount(cw[j]);
        }
        ++counts[w];
    }
    WeightDistribution wd{code.n(), code.k(), {}};
    wd.counts.assign(counts.begin(), counts.end());
    return wd;
}

namespace detail {

inline BigInt big_binom(int n, int j) {
    if (j < 0 || j > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < j; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

/// Krawtchouk polynomial K_j(i) for length n, exact.
inline BigInt krawtchouk(int n, int j, int i) {
    BigInt s = 0;
    for (int t = 0; t <= j; ++t) {
        BigInt term = big_binom(i, t) * big_binom(n - i, j - t);
        if (t & 1) s -= term; else s += term;
    }
    return s;
}

} // namespace detail

/// MacWilliams transform: the dual code's spectrum from the primal's.
/// Throws if any output entry is negative or not divisible by 2^k.
inline WeightDistribution macwilliams(const WeightDistribution& wd) {
    const int n = wd.n;
    const BigInt scale = BigInt(1) << wd.k;
    WeightDistribution out{n, n - wd.k, std::vector<BigInt>(n + 1)};
    for (int j = 0; j <= n; ++j) {
        BigInt s = 0;
        for (int i = 0; i <= n; ++i) {
            if (wd.counts[i] == 0) continue;
            s += wd.counts[i] * detail::krawtchouk(n, j, i);
        }
        if (s < 0 || s % scale != 0)
            throw parameter_error("macwilliams: inconsistent input distribution");
        out.counts[j] = s / scale;
    }
    return out;
}

/// Spectrum of a code, enumerating whichever of C, C-dual has the smaller
/// dimension and applying MacWilliams when the dual side was enumerated.
inline WeightDistribution
weight_distribution(const BinaryCode& code,
                    int cutoff_k = default_enum_cutoff_k) {
    if (code.k() <= code.n() - code.k() || code.k() == code.n())
        return weight_distribution_exact(code, cutoff_k);
    return macwilliams(weight_distribution_exact(dual(code), cutoff_k));
}

// ---- bound evaluators (exponents in bits, asymptotic factors excluded) ----

inline void check_rate(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw parameter_error("rate must lie in (0,1)");
}

inline int istar(int i, int n) { return std::min(i, n - i); }

/// First spectrum bound: exponent 2 ln 2 * i* * log2(1/(1-R)).
inline double bound_first(int i, int n, double rate) {
    check_rate(rate);
    return two_ln_2 * istar(i, n) * std::log2(1.0 / (1.0 - rate));
}

inline double theta_of_rate(double rate) {
    check_rate(rate);
    return std::pow(rate, two_ln_2);
}

struct BranchedExponent {
    double exponent; // bits
    int branch;      // 1 = geometric branch, 2 = binomial (random-code) branch
};

/// Second spectrum bound with theta = R^(2 ln 2); logC = k in bits.
inline BranchedExponent bound_second(int i, int n, double rate, double logC) {
    check_rate(rate);
    const double th = theta_of_rate(rate);
    const int is = istar(i, n);
    if (is <= (1.0 - th) / 2.0 * n) {
        double e = logC - is * std::log2(1.0 - th) - (n - is) * std::log2(1.0 + th);
        return {e, 1};
    }
    double lbinom = std::lgamma(n + 1.0) - std::lgamma(is + 1.0) -
                    std::lgamma(n - is + 1.0);
    double e = lbinom / std::numbers::ln2 + logC - n;
    return {e, 2};
}

/// Minimum-distance-regime bound, exponent in i (not i*).
inline double bound_min_dist_regime(int i, double rate_star) {
    check_rate(rate_star);
    return two_ln_2 * i * std::log2(1.0 / (1.0 - rate_star));
}

/// i*-variant of the same bound.
inline double bound_min_dist_regime_istar(int i, int n, double rate_star) {
    check_rate(rate_star);
    return two_ln_2 * istar(i, n) * std::log2(1.0 / (1.0 - rate_star));
}

/// The constant a = ((1-R)/2)^((1-c)/t) from the minimum-distance argument.
inline double a_of_R_c_t(double rate, double c, double t) {
    check_rate(rate);
    if (!(c > 0.0 && c <= 1.0)) throw parameter_error("a_of_R_c_t: need 0 < c <= 1");
    if (!(t > 0.0)) throw parameter_error("a_of_R_c_t: need t > 0");
    return std::pow((1.0 - rate) / 2.0, (1.0 - c) / t);
}

struct BoundRow {
    int i = 0;
    int istar = 0;
    BigInt a_i;
    double log2_ai = 0.0;   // -inf encoded as NaN never used: rows with a_i=0 skipped
    double bound1 = 0.0;    // first-bound exponent, bits
    double bound2 = 0.0;    // second-bound exponent, bits
    int branch = 0;         // branch taken by the second bound
    double eps1 = 0.0;      // (log2 a_i - bound1)/n
    double eps2 = 0.0;
};

struct BoundReport {
    int n = 0;
    int k = 0;
    double rate = 0.0;
    double theta = 0.0;
    std::vector<BoundRow> rows; // only indices with a_i > 0
    double max_eps1 = 0.0;
    double max_eps2 = 0.0;
};

/// Per-weight comparison of log2 a_i against both spectrum bounds.
inline BoundReport bound_report(const BinaryCode& code,
                                int cutoff_k = default_enum_cutoff_k) {
    const auto wd = weight_distribution(code, cutoff_k);
    BoundReport rep;
    rep.n = code.n();
    rep.k = code.k();
    rep.rate = code.rate();
    rep.theta = theta_of_rate(rep.rate);
    rep.max_eps1 = rep.max_eps2 = -1e300;
    for (int i = 0; i <= wd.n; ++i) {
        if (wd.counts[i] == 0) continue;
        BoundRow row;
        row.i = i;
        row.istar = istar(i, wd.n);
        row.a_i = wd.counts[i];
        row.log2_ai = log2_bigint(wd.counts[i]);
        row.bound1 = bound_first(i, wd.n, rep.rate);
        auto b2 = bound_second(i, wd.n, rep.rate, double(wd.k));
        row.bound2 = b2.exponent;
        row.branch = b2.branch;
        row.eps1 = (row.log2_ai - row.bound1) / wd.n;
        row.eps2 = (row.log2_ai - row.bound2) / wd.n;
        rep.max_eps1 = std::max(rep.max_eps1, row.eps1);
        rep.max_eps2 = std::max(rep.max_eps2, row.eps2);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace exitweight
