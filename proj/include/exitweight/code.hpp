#pragma once

// Binary linear codes: Reed-Muller construction, duals, matroid rank
// queries, minimum distance, and the ".gm" generator-matrix text format.

#include "gf2.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace exitweight {

struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct cutoff_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coordinate subset of {0,...,n-1} as a bit mask; valid for n <= 64.
using CoordSubset = std::uint64_t;

inline constexpr int default_rm_max_m = 20;
inline constexpr int default_enum_cutoff_k = 28;

/// An [n,k] binary linear code given by a full-row-rank generator matrix.
/// Immutable after construction; safe to share across threads.
class BinaryCode {
  public:
    BinaryCode(BitMatrix generator, std::string name = {})
        : gen_(std::move(generator)), name_(std::move(name)) {
        n_ = static_cast<int>(gen_.cols());
        k_ = static_cast<int>(gen_.rows());
        if (k_ < 1 || n_ < 1 || k_ > n_)
            throw parameter_error("BinaryCode: need 1 <= k <= n");
        if (row_rank(gen_) != static_cast<std::size_t>(k_))
            throw parameter_error("BinaryCode: generator rows are linearly dependent");
        if (k_ <= 64) {
            cols_.resize(n_);
            for (int j = 0; j < n_; ++j) {
                word_t c = 0;
                for (int i = 0; i < k_; ++i)
                    if (gen_.get(i, j)) c |= word_t{1} << i;
                cols_[j] = c;
            }
        }
    }

    int n() const { return n_; }
    int k() const { return k_; }
    double rate() const { return double(k_) / double(n_); }
    const std::string& name() const { return name_; }
    const BitMatrix& generator() const { return gen_; }

    /// Column j of the generator packed into one word; requires k <= 64.
    word_t column(int j) const { return cols_[j]; }
    bool has_packed_columns() const { return !cols_.empty(); }

    bool has_zero_column(int j) const {
        for (int i = 0; i < k_; ++i)
            if (gen_.get(i, j)) return false;
        return true;
    }

  private:
    BitMatrix gen_;
    std::string name_;
    std::vector<word_t> cols_; // only when k <= 64
    int n_ = 0, k_ = 0;
};

namespace detail {

inline int binom_int(int n, int j) {
    long long r = 1;
    for (int i = 0; i < j; ++i) r = r * (n - i) / (i + 1);
    return static_cast<int>(r);
}

// Monomials over m variables in degree-then-lexicographic order, as
// variable-subset masks.
inline std::vector<std::uint32_t> monomials_up_to_degree(int r, int m) {
    std::vector<std::uint32_t> out;
    for (int deg = 0; deg <= r; ++deg)
        for (std::uint32_t s = 0; s < (1u << m); ++s)
            if (std::popcount(s) == deg) out.push_back(s);
    return out;
}

} // namespace detail

/// Reed-Muller code RM(r,m): rows are evaluation vectors of monomials of
/// degree <= r over the 2^m points of {0,1}^m in binary-counter order.
inline BinaryCode rm_code(int r, int m, int max_m = default_rm_max_m) {
    if (m < 1 || r < 0 || r > m || m > max_m)
        throw parameter_error("rm_code: need 0 <= r <= m, 1 <= m <= " +
                              std::to_string(max_m));
    const int n = 1 << m;
    auto monos = detail::monomials_up_to_degree(r, m);
    BitMatrix g(monos.size(), n);
    for (std::size_t row = 0; row < monos.size(); ++row) {
        const std::uint32_t vars = monos[row];
        for (int x = 0; x < n; ++x) {
            // monomial value: product of the selected variables at point x
            if ((static_cast<std::uint32_t>(x) & vars) == vars) g.set(row, x, true);
        }
    }
    return BinaryCode(std::move(g),
                      "RM(" + std::to_string(r) + "," + std::to_string(m) + ")");
}

/// Known minimum distance of RM(r,m): 2^(m-r). Formula path, not enumeration.
inline int rm_min_distance_formula(int r, int m) {
    if (m < 1 || r < 0 || r > m) throw parameter_error("rm_min_distance_formula");
    return 1 << (m - r);
}

/// Dual code via standard-form reduction with the column permutation
/// tracked and undone, so coordinate labels are preserved.
inline BinaryCode dual(const BinaryCode& code) {
    const int n = code.n(), k = code.k();
    if (k == n)
        throw parameter_error("dual: full-space code has a zero-dimensional dual");

    BitMatrix g = code.generator();
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;

    // reduce to [I | P] over a column permutation
    for (int i = 0; i < k; ++i) {
        int pr = -1, pc = -1;
        for (int c = i; c < n && pr < 0; ++c)
            for (int r = i; r < k; ++r)
                if (g.get(r, c)) { pr = r; pc = c; break; }
        g.swap_rows(i, pr);
        if (pc != i) {
            for (int r = 0; r < k; ++r) {
                bool a = g.get(r, i), b = g.get(r, pc);
                g.set(r, i, b);
                g.set(r, pc, a);
            }
            std::swap(perm[i], perm[pc]);
        }
        for (int r = 0; r < k; ++r)
            if (r != i && g.get(r, i)) g.xor_row(r, i);
    }

    // H = [P^T | I] in the permuted coordinates
    BitMatrix h(n - k, n);
    for (int r = 0; r < n - k; ++r) {
        for (int i = 0; i < k; ++i) h.set(r, perm[i], g.get(i, k + r));
        h.set(r, perm[k + r], true);
    }
    std::string nm = code.name().empty() ? "" : "dual(" + code.name() + ")";
    return BinaryCode(std::move(h), nm);
}

/// Rank over GF(2) of the generator columns indexed by T.
inline int rank_of_subset(const BinaryCode& code, CoordSubset t) {
    const int n = code.n();
    if (n < 64 && (t >> n) != 0)
        throw parameter_error("rank_of_subset: mask has bits beyond n");
    if (code.has_packed_columns()) {
        Gf2Basis64 b;
        for (int j = 0; j < n; ++j)
            if ((t >> j) & 1) b.insert(code.column(j));
        return static_cast<int>(b.rank());
    }
    // general path: selected columns as rows of a |T| x k matrix
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
        if ((t >> j) & 1) idx.push_back(j);
    BitMatrix m(idx.size(), code.k());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (int i = 0; i < code.k(); ++i)
            m.set(r, i, code.generator().get(i, idx[r]));
    return static_cast<int>(row_rank(std::move(m)));
}

/// Corank f(S) = |S| - r(S) of the binary matroid of the code.
inline int corank(const BinaryCode& code, CoordSubset s) {
    return std::popcount(s) - rank_of_subset(code, s);
}

/// Minimum nonzero codeword weight by Gray-code enumeration of all 2^k
/// codewords. Returns nullopt above the cutoff: never a heuristic value.
inline std::optional<int> min_distance(const BinaryCode& code,
                                       int cutoff_k = default_enum_cutoff_k) {
    if (code.k() > cutoff_k) return std::nullopt;
    const int k = code.k();
    const std::size_t wpr = code.generator().words_per_row();
    std::vector<word_t> cw(wpr, 0);
    std::size_t best = code.n() + 1;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int bit = std::countr_zero(g); // Gray code step
        const word_t* row = code.generator().row(bit);
        std::size_t w = 0;
        for (std::size_t j = 0; j < wpr; ++j) {
            cw[j] ^= row[j];
            w += std::popcount(cw[j]);
        }
        if (w > 0 && w < best) best = w;
    }
    return static_cast<int>(best);
}

/// The [n,1] repetition code.
inline BinaryCode repetition_code(int n) {
    BitMatrix g(1, n);
    for (int j = 0; j < n; ++j) g.set(0, j, true);
    return BinaryCode(std::move(g), "rep[" + std::to_string(n) + ",1]");
}

/// Random [n,k] code with full-row-rank generator, deterministic in seed.
inline BinaryCode random_code(int n, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        BitMatrix g(k, n);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j)
                g.set(i, j, (rng() >> 32) & 1);
        if (row_rank(g) == static_cast<std::size_t>(k))
            return BinaryCode(std::move(g), "random[" + std::to_string(n) + "," +
                                                std::to_string(k) + "]#" +
                                                std::to_string(seed));
    }
    throw std::runtime_error("random_code: could not reach full rank");
}

/// ".gm" format: line 1 = "n k", then k lines of n characters from {0,1}.
inline BinaryCode load_gm(std::istream& in, std::string name = {}) {
    int n = 0, k = 0;
    if (!(in >> n >> k) || n < 1 || k < 1 || k > n)
        throw parameter_error("load_gm: bad header, expected \"n k\"");
    std::string line;
    std::getline(in, line);
    BitMatrix g(k, n);
    for (int i = 0; i < k; ++i) {
        if (!std::getline(in, line) || static_cast<int>(line.size()) != n)
            throw parameter_error("load_gm: row " + std::to_string(i) +
                                  " must have exactly " + std::to_string(n) +
                                  " characters");
        for (int j = 0; j < n; ++j) {
            if (line[j] == '1') g.set(i, j, true);
            else if (line[j] != '0')
                throw parameter_error("load_gm: invalid character in row " +
                                      std::to_string(i));
        }
    }
    return BinaryCode(std::move(g), std::move(name));
}

inline BinaryCode load_gm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("load_gm: cannot open " + path);
    return load_gm(in, path);
}

inline void save_gm(std::ostream& out, const BinaryCode& code) {
    out << code.n() << ' ' << code.k() << '\n';
    for (int i = 0; i < code.k(); ++i) {
        for (int j = 0; j < code.n(); ++j) out << (code.generator().get(i, j) ? '1' : '0');
        out << '\n';
    }
}

/// All codewords as packed words (n <= 64, k <= cutoff), Gray-code order.
inline std::vector<word_t> enumerate_codewords(const BinaryCode& code,
                                               int cutoff_k = default_enum_cutoff_k) {
    if (code.n() > 64) throw cutoff_error("enumerate_codewords: n > 64");
    if (code.k() > cutoff_k) throw cutoff_error("enumerate_codewords: k above cutoff");
    std::vector<word_t> rows(code.k());
    for (int i = 0; i < code.k(); ++i) rows[i] = code.generator().row(i)[0];
    const std::uint64_t total = std::uint64_t{1} << code.k();
    std::vector<word_t> out(total);
    word_t cur = 0;
    out[0] = 0;
    for (std::uint64_t g = 1; g < total; ++g) {
        cur ^= rows[std::countr_zero(g)];
        out[g] = cur;
    }
    return out;
}

} // namespace exitweight
