#pragma once

// The inhomogeneous-Markov-chain model of digit evolution: incidence and
// transition matrices of the carry process, the growth-perturbed matrices
// and their stationary vectors, variation distance, block transition
// matrices, and strong-ergodicity probes. All matrix algebra is exact
// rational by default; a floating path exists for long trajectories.

#include "digitdyn/radix.hpp"
#include "digitdyn/rational.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitdyn {

class PopulationVector {
public:
    explicit PopulationVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw std::invalid_argument("population vector must not be empty");
        Rational sum = 0;
        for (const Rational& e : entries_) {
            if (e < 0) throw std::invalid_argument("population entries must be nonnegative");
            sum += e;
        }
        if (sum != 1) throw std::invalid_argument("population entries must sum to 1");
    }

    static PopulationVector uniform(std::size_t dim) {
        return PopulationVector(std::vector<Rational>(dim, Rational(1, dim)));
    }

    static PopulationVector unit(std::size_t dim, std::size_t index) {
        std::vector<Rational> e(dim, Rational(0));
        e.at(index) = 1;
        return PopulationVector(std::move(e));
    }

    std::size_t dimension() const { return entries_.size(); }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Rational>& entries() const { return entries_; }

    friend bool operator==(const PopulationVector&, const PopulationVector&) = default;

private:
    std::vector<Rational> entries_;
};

class StochasticMatrix {
public:
    StochasticMatrix(std::size_t dim, std::vector<Rational> entries)
        : dim_(dim), entries_(std::move(entries)) {
        if (dim_ == 0) throw std::invalid_argument("matrix dimension must be positive");
        if (entries_.size() != dim_ * dim_) throw std::invalid_argument("entry count mismatch");
        for (std::size_t i = 0; i < dim_; ++i) {
            Rational sum = 0;
            for (std::size_t j = 0; j < dim_; ++j) {
                const Rational& e = entries_[i * dim_ + j];
                if (e < 0) throw std::invalid_argument("matrix entries must be nonnegative");
                sum += e;
            }
            if (sum != 1) throw std::invalid_argument("matrix rows must sum to exactly 1");
        }
    }

    static StochasticMatrix identity(std::size_t dim) {
        std::vector<Rational> e(dim * dim, Rational(0));
        for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
        return StochasticMatrix(dim, std::move(e));
    }

    std::size_t dimension() const { return dim_; }
    const Rational& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * dim_ + j];
    }

    bool doubly_stochastic() const {
        for (std::size_t j = 0; j < dim_; ++j) {
            Rational sum = 0;
            for (std::size_t i = 0; i < dim_; ++i) sum += entries_[i * dim_ + j];
            if (sum != 1) return false;
        }
        return true;
    }

    StochasticMatrix operator*(const StochasticMatrix& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("dimension mismatch");
        std::vector<Rational> out(dim_ * dim_, Rational(0));
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t k = 0; k < dim_; ++k) {
                const Rational& a = entries_[i * dim_ + k];
                if (a == 0) continue;
                for (std::size_t j = 0; j < dim_; ++j)
                    out[i * dim_ + j] += a * other.entries_[k * dim_ + j];
            }
        return StochasticMatrix(dim_, std::move(out));
    }

    friend PopulationVector operator*(const PopulationVector& p, const StochasticMatrix& m) {
        if (p.dimension() != m.dim_) throw std::invalid_argument("dimension mismatch");
        std::vector<Rational> out(m.dim_, Rational(0));
        for (std::size_t i = 0; i < m.dim_; ++i) {
            if (p[i] == 0) continue;
            for (std::size_t j = 0; j < m.dim_; ++j) out[j] += p[i] * m.entries_[i * m.dim_ + j];
        }
        return PopulationVector(std::move(out));
    }

    // max-norm of the entrywise difference
    Rational max_norm_distance(const StochasticMatrix& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("dimension mismatch");
        Rational best = 0;
        for (std::size_t i = 0; i < dim_ * dim_; ++i) {
            Rational d = entries_[i] - other.entries_[i];
            if (d < 0) d = -d;
            if (d > best) best = d;
        }
        return best;
    }

    friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

private:
    std::size_t dim_;
    std::vector<Rational> entries_;
};

// A[x][y] = 1 iff y = multiplier*x + c (mod q) for some carry
// 0 <= c <= multiplier-1. Each row carries min(multiplier, q) ones.
inline std::vector<std::vector<int>> incidence_matrix(std::uint32_t q, std::uint32_t multiplier) {
    check_base(q);
    if (multiplier < 2) throw std::invalid_argument("multiplier must be at least 2");
    std::vector<std::vector<int>> a(q, std::vector<int>(q, 0));
    for (std::uint32_t x = 0; x < q; ++x)
        for (std::uint32_t c = 0; c < multiplier && c < q; ++c)
            a[x][(static_cast<std::uint64_t>(multiplier) * x + c) % q] = 1;
    return a;
}

// Incidence matrix with equal probabilities on the allowed transitions:
// 1/multiplier per carry (rows renormalize to 1/q when multiplier > q).
inline StochasticMatrix base_transition_matrix(std::uint32_t q, std::uint32_t multiplier) {
    auto a = incidence_matrix(q, multiplier);
    Rational weight = multiplier <= q ? Rational(1, multiplier) : Rational(1, q);
    std::vector<Rational> entries;
    entries.reserve(std::size_t(q) * q);
    for (std::uint32_t x = 0; x < q; ++x)
        for (std::uint32_t y = 0; y < q; ++y)
            entries.push_back(a[x][y] ? weight : Rational(0));
    return StochasticMatrix(q, std::move(entries));
}

// The two growth-perturbed 3x3 matrices for the base-3 doubling chain:
// when the row grows by one digit the leading transition is biased by
// eps, giving Q (leading digit 1) and R (leading digit 2).
inline std::pair<StochasticMatrix, StochasticMatrix> perturbed_matrices(const Rational& eps) {
    if (eps <= 0 || eps > 1) throw std::invalid_argument("eps must lie in (0, 1]");
    Rational h(1, 2);
    Rational d = 2 + eps;
    std::vector<Rational> q_entries{
        h, h, 0,
        1 / d, eps / d, 1 / d,
        0, h, h};
    std::vector<Rational> r_entries{
        h, h, 0,
        h, 0, h,
        0, (1 + eps) / d, 1 / d};
    return {StochasticMatrix(3, std::move(q_entries)), StochasticMatrix(3, std::move(r_entries))};
}

struct StationaryResult {
    PopulationVector distribution;
    bool unique;
};

// Exact stationary distribution: solves v^t M = v^t, sum v = 1 by
// Gaussian elimination over the rationals. When the stationary space has
// dimension > 1, the lexicographically greatest valid basic solution is
// returned and uniqueness is flagged off.
inline StationaryResult stationary_distribution(const StochasticMatrix& m) {
    const std::size_t dim = m.dimension();
    // A = M^t - I, kernel gives stationary directions
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim, Rational(0)));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) a[i][j] = m(j, i) - (i == j ? 1 : 0);

    // reduced row echelon form
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < dim && row < dim; ++col) {
        std::size_t sel = row;
        while (sel < dim && a[sel][col] == 0) ++sel;
        if (sel == dim) continue;
        std::swap(a[sel], a[row]);
        Rational inv = a[row][col];
        for (std::size_t j = 0; j < dim; ++j) a[row][j] /= inv;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (std::size_t j = 0; j < dim; ++j) a[i][j] -= f * a[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }

    std::vector<bool> is_pivot(dim, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < dim; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    if (free_cols.empty())
        throw std::logic_error("stochastic matrix with trivial stationary space");

    std::vector<std::vector<Rational>> candidates;
    for (std::size_t f : free_cols) {
        std::vector<Rational> v(dim, Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][f];
        Rational sum = 0;
        bool nonneg = true;
        for (const Rational& e : v) {
            if (e < 0) nonneg = false;
            sum += e;
        }
        if (!nonneg || sum <= 0) continue;
        for (Rational& e : v) e /= sum;
        candidates.push_back(std::move(v));
    }
    if (candidates.empty())
        throw std::runtime_error("could not isolate a nonnegative stationary vector");

    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i] > candidates[best]) best = i;
    return StationaryResult{PopulationVector(std::move(candidates[best])),
                            free_cols.size() == 1};
}

// d_V(a, b) = (1/2) sum |a_i - b_i|
inline Rational variation_distance(const PopulationVector& a, const PopulationVector& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
    Rational sum = 0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        Rational d = a[i] - b[i];
        if (d < 0) d = -d;
        sum += d;
    }
    return sum / 2;
}

inline constexpr std::uint64_t kBlockMatrixEntryBudget = 10'000'000;

// Equal-probability block transition matrix: row v(X) carries weight
// 1/multiplier at columns (multiplier*v(X) + c) mod q^len for each carry
// c. For len = 1 this is the base transition matrix.
inline StochasticMatrix block_transition_matrix(std::uint32_t len, std::uint32_t q = 3,
                                                std::uint32_t multiplier = 2) {
    check_base(q);
    if (len < 1) throw std::invalid_argument("block length must be at least 1");
    if (multiplier < 2) throw std::invalid_argument("multiplier must be at least 2");
    std::uint64_t dim = 1;
    for (std::uint32_t i = 0; i < len; ++i) {
        dim *= q;
        if (dim * dim > kBlockMatrixEntryBudget)
            throw std::overflow_error("block matrix exceeds entry budget");
    }
    std::vector<Rational> entries(dim * dim, Rational(0));
    Rational weight(1, multiplier);
    for (std::uint64_t v = 0; v < dim; ++v)
        for (std::uint32_t c = 0; c < multiplier; ++c)
            entries[v * dim + (multiplier * v + c) % dim] += weight;
    return StochasticMatrix(static_cast<std::size_t>(dim), std::move(entries));
}

struct ImcStep {
    PopulationVector distribution;
    Rational dv_to_uniform;
};

// Exact trajectory p_{n+1}^t = p_n^t P_n, with the variation distance to
// uniform recorded at every step (the initial state included).
inline std::vector<ImcStep> imc_evolve(const PopulationVector& start,
                                       std::span<const StochasticMatrix> matrices) {
    PopulationVector u = PopulationVector::uniform(start.dimension());
    std::vector<ImcStep> trajectory;
    trajectory.reserve(matrices.size() + 1);
    PopulationVector p = start;
    trajectory.push_back(ImcStep{p, variation_distance(p, u)});
    for (const StochasticMatrix& m : matrices) {
        p = p * m;
        trajectory.push_back(ImcStep{p, variation_distance(p, u)});
    }
    return trajectory;
}

// Floating-point trajectory for long runs; returns d_V to uniform per step.
inline std::vector<double> imc_evolve_double(std::vector<double> p,
                                             const std::function<std::vector<std::vector<double>>(std::uint64_t)>& matrix_at,
                                             std::uint64_t steps) {
    const std::size_t dim = p.size();
    std::vector<double> dv;
    dv.reserve(steps + 1);
    auto record = [&]() {
        double s = 0;
        for (double e : p) s += std::abs(e - 1.0 / double(dim));
        dv.push_back(0.5 * s);
    };
    record();
    for (std::uint64_t n = 0; n < steps; ++n) {
        auto m = matrix_at(n);
        std::vector<double> next(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) next[j] += p[i] * m[i][j];
        p = std::move(next);
        record();
    }
    return dv;
}

// sup over the probability simplex of d_V(p^t P(m,n), target), where
// P(m,n) = P_m ... P_{n-1}. The map is affine in p and d_V is convex, so
// the supremum sits at a vertex: evaluate the basis vectors (rows).
inline Rational strong_ergodicity_probe(std::span<const StochasticMatrix> matrices,
                                        std::size_t m, std::size_t n,
                                        const PopulationVector& target) {
    if (m >= n || n > matrices.size())
        throw std::invalid_argument("need m < n within the matrix sequence");
    StochasticMatrix product = matrices[m];
    for (std::size_t i = m + 1; i < n; ++i) product = product * matrices[i];
    const std::size_t dim = product.dimension();
    if (target.dimension() != dim) throw std::invalid_argument("dimension mismatch");
    Rational best = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < dim; ++j) {
            Rational d = product(i, j) - target[j];
            if (d < 0) d = -d;
            sum += d;
        }
        sum /= 2;
        if (sum > best) best = sum;
    }
    return best;
}

struct ErgodicityHypothesisEntry {
    StationaryResult stationary;
    Rational distance_to_limit;  // max-norm ||P_n - P_inf||
};

struct ErgodicityHypothesisReport {
    std::vector<ErgodicityHypothesisEntry> entries;
    bool distances_nonincreasing;
};

// The two sufficient conditions for strong ergodicity of an IMC: every
// matrix has a stationary distribution (reported with it) and the
// sequence approaches a limit matrix in max-norm.
inline ErgodicityHypothesisReport check_strong_ergodicity_hypotheses(
    std::span<const StochasticMatrix> matrices, const StochasticMatrix& limit) {
    ErgodicityHypothesisReport report{{}, true};
    Rational prev = -1;
    for (const StochasticMatrix& m : matrices) {
        ErgodicityHypothesisEntry entry{stationary_distribution(m), m.max_norm_distance(limit)};
        if (prev >= 0 && entry.distance_to_limit > prev) report.distances_nonincreasing = false;
        prev = entry.distance_to_limit;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace digitdyn
