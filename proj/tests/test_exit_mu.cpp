#include <catch2/catch_amalgamated.hpp>

#include <exitweight/exit_mu.hpp>

#include <cmath>

using namespace exitweight;

namespace {

// rank oracle independent of the packed-column path: row elimination on the
// extracted submatrix
int rank_oracle(const BinaryCode& c, CoordSubset s) {
    std::vector<int> idx;
    for (int j = 0; j < c.n(); ++j)
        if ((s >> j) & 1) idx.push_back(j);
    BitMatrix sub(c.k(), idx.size());
    for (int i = 0; i < c.k(); ++i)
        for (std::size_t q = 0; q < idx.size(); ++q)
            sub.set(i, q, c.generator().get(i, idx[q]));
    return static_cast<int>(row_rank(sub));
}

// mu by direct summation over all subsets with the oracle rank
double mu_oracle(const BinaryCode& c, double lambda) {
    const int n = c.n();
    double s = 0.0;
    for (CoordSubset sub = 0; sub < (CoordSubset{1} << n); ++sub) {
        const int w = std::popcount(sub);
        const double f = w - rank_oracle(c, sub);
        s += f * std::pow(lambda, w) * std::pow(1.0 - lambda, n - w);
    }
    return s;
}

// h_i by direct summation over subsets avoiding i
double exit_bit_oracle(const BinaryCode& c, int i, double p) {
    const int n = c.n();
    const double lambda = 1.0 - p;
    double s = 0.0;
    for (CoordSubset r = 0; r < (CoordSubset{1} << n); ++r) {
        if ((r >> i) & 1) continue;
        const int w = std::popcount(r);
        if (rank_oracle(c, r) < rank_oracle(c, r | (CoordSubset{1} << i)))
            s += std::pow(lambda, w) * std::pow(1.0 - lambda, n - 1 - w);
    }
    return s;
}

std::vector<double> linspace(double a, double b, int pts) {
    std::vector<double> g(pts);
    for (int i = 0; i < pts; ++i) g[i] = a + (b - a) * i / (pts - 1);
    return g;
}

} // namespace

TEST_CASE("mu endpoints and oracle agreement") {
    for (auto code : {rm_code(1, 3), repetition_code(6), random_code(9, 4, 17)}) {
        auto sw = subset_sweep(code);
        CHECK(mu_exact(sw, 0.0) == 0.0);
        CHECK_THAT(mu_exact(sw, 1.0),
                   Catch::Matchers::WithinAbs(code.n() - code.k(), 1e-12));
        for (double l : {0.1, 0.3, 0.5, 0.77})
            CHECK_THAT(mu_exact(sw, l),
                       Catch::Matchers::WithinAbs(mu_oracle(code, l), 1e-10));
    }
}

TEST_CASE("mu is nondecreasing and below lambda*n") {
    auto code = rm_code(1, 3);
    auto sw = subset_sweep(code);
    double prev = -1.0;
    for (double l : linspace(0.0, 1.0, 101)) {
        const double v = mu_exact(sw, l);
        CHECK(v >= prev - 1e-12);
        CHECK(v <= l * code.n() + 1e-12);
        prev = v;
    }
}

TEST_CASE("subset sweep cutoff") {
    CHECK_THROWS_AS(subset_sweep(rm_code(2, 5)), cutoff_error);
}

TEST_CASE("mu derivative endpoints") {
    // lambda = 0: derivative equals sum of f over singletons = 0 when there
    // is no zero column
    auto code = rm_code(1, 3);
    auto sw = subset_sweep(code);
    CHECK_THAT(mu_derivative_exact(sw, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    // lambda = 1: equals n(1 - h(0)) by the identity
    const double rhs = code.n() * (1.0 - exit_avg_exact(sw, 0.0));
    CHECK_THAT(mu_derivative_exact(sw, 1.0), Catch::Matchers::WithinAbs(rhs, 1e-10));

    // repetition: h(0) = 0, so derivative at 1 is n
    auto rep = repetition_code(5);
    auto swr = subset_sweep(rep);
    CHECK_THAT(mu_derivative_exact(swr, 1.0),
               Catch::Matchers::WithinAbs(5.0, 1e-12));
}

TEST_CASE("mu derivative matches finite differences in the interior") {
    auto code = random_code(10, 5, 23);
    auto sw = subset_sweep(code);
    const double h = 1e-6;
    for (double l : {0.2, 0.5, 0.8}) {
        const double fd = (mu_exact(sw, l + h) - mu_exact(sw, l - h)) / (2 * h);
        CHECK_THAT(mu_derivative_exact(sw, l), Catch::Matchers::WithinAbs(fd, 1e-5));
    }
}

TEST_CASE("exit_bit exact values and oracle agreement") {
    auto code = rm_code(1, 3);
    auto sw = subset_sweep(code);
    for (int i = 0; i < code.n(); ++i) {
        CHECK_THAT(exit_bit_exact(sw, i, 1.0), Catch::Matchers::WithinAbs(1.0, 1e-12));
        for (double p : {0.0, 0.25, 0.5, 0.9})
            CHECK_THAT(exit_bit_exact(sw, i, p),
                       Catch::Matchers::WithinAbs(exit_bit_oracle(code, i, p), 1e-10));
    }
    // p = 0: recoverable whenever the column lies in the span of the others
    auto rep = repetition_code(4);
    auto swr = subset_sweep(rep);
    for (int i = 0; i < 4; ++i)
        CHECK_THAT(exit_bit_exact(swr, i, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("exit monotone in p and coordinate-symmetric for RM codes") {
    auto code = rm_code(1, 3);
    auto sw = subset_sweep(code);
    for (int i = 0; i < code.n(); ++i) {
        double prev = -1.0;
        for (double p : linspace(0.0, 1.0, 51)) {
            const double v = exit_bit_exact(sw, i, p);
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
    for (double p : linspace(0.0, 1.0, 21))
        for (int i = 1; i < code.n(); ++i)
            CHECK_THAT(exit_bit_exact(sw, i, p),
                       Catch::Matchers::WithinAbs(exit_bit_exact(sw, 0, p), 1e-12));
}

TEST_CASE("identity dmu/dlambda = n(1 - h(1-lambda))") {
    auto grid = linspace(0.0, 1.0, 101);
    CHECK(verify_exit_mu_identity(repetition_code(4), grid) <= 1e-12);
    CHECK(verify_exit_mu_identity(rm_code(1, 3), grid) <= 1e-9);
    CHECK(verify_exit_mu_identity(rm_code(1, 4), linspace(0.0, 1.0, 51)) <= 1e-9);
}

TEST_CASE("MC estimators agree with exact values") {
    auto code = rm_code(1, 3);
    auto sw = subset_sweep(code);

    auto mu_est = mu_mc(code, 0.5, 200000, 99, 2);
    CHECK(std::abs(mu_est.value - mu_exact(sw, 0.5)) <= 4.0 * mu_est.stderr_);

    for (double p : {0.3, 0.5, 0.7}) {
        auto h_est = exit_avg_mc(code, p, 200000, 42, 2);
        CHECK(std::abs(h_est.value - exit_avg_exact(sw, p)) <=
              4.0 * std::max(h_est.stderr_, 1e-4));
        auto hb = exit_bit_mc(code, 2, p, 100000, 7, 2);
        CHECK(std::abs(hb.value - exit_bit_exact(sw, 2, p)) <=
              4.0 * std::max(hb.stderr_, 1e-4));
    }
    CHECK_THROWS_AS(mu_mc(code, 0.5, 0, 1), parameter_error);
}

TEST_CASE("MC results are independent of the thread count") {
    auto code = rm_code(2, 4);
    auto a = exit_avg_mc(code, 0.4, 30000, 5, 1);
    auto b = exit_avg_mc(code, 0.4, 30000, 5, 3);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    auto c = mu_mc(code, 0.6, 30000, 5, 1);
    auto d = mu_mc(code, 0.6, 30000, 5, 4);
    CHECK(c.value == d.value);
}

TEST_CASE("isotonic fit and threshold estimation") {
    CHECK(isotonic_fit({1.0, 2.0, 3.0}) == std::vector<double>{1.0, 2.0, 3.0});
    auto fit = isotonic_fit({0.0, 0.5, 0.4, 1.0});
    CHECK(fit[1] == fit[2]);
    CHECK_THAT(fit[1], Catch::Matchers::WithinAbs(0.45, 1e-12));

    // perfect step at 0.5
    CurveSamples step;
    step.grid = linspace(0.0, 1.0, 101);
    for (double p : step.grid) step.values.push_back(p < 0.5 ? 0.0 : 1.0);
    step.stderrs.assign(step.grid.size(), 0.0);
    auto est = threshold_estimate(step);
    CHECK(est.in_grid);
    CHECK_THAT(est.p_star, Catch::Matchers::WithinAbs(0.5, 0.011));
    CHECK(est.width <= 0.011);

    // RM(1,3) exact curve: wide transition, p* in [0.35, 0.65]
    auto curve = exit_curve(rm_code(1, 3), linspace(0.0, 1.0, 101));
    auto est2 = threshold_estimate(curve);
    CHECK(est2.in_grid);
    CHECK(est2.p_star >= 0.35);
    CHECK(est2.p_star <= 0.65);

    // curve never reaching 1/2
    CurveSamples flat;
    flat.grid = {0.0, 0.5, 1.0};
    flat.values = {0.0, 0.1, 0.2};
    flat.stderrs = {0.0, 0.0, 0.0};
    CHECK_FALSE(threshold_estimate(flat).in_grid);
}

TEST_CASE("exit_curve validates its grid") {
    CHECK_THROWS_AS(exit_curve(rm_code(1, 3), {0.0, 0.5, 2.0}), parameter_error);
}
