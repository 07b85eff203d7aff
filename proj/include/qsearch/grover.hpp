#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "qsearch/common.hpp"
#include "qsearch/state.hpp"

namespace qsearch {

/// theta = arcsin(sqrt(M/N)); one query rotates the state by 2*theta.
struct AngleParams {
    double theta;
    double per_query_rotation;
};

inline AngleParams angle_params(std::size_t n, std::size_t m) {
    if (m == 0 || m > n) throw std::invalid_argument("angle_params: need 1 <= M <= N");
    const double theta = std::asin(std::sqrt(static_cast<double>(m) / static_cast<double>(n)));
    return {theta, 2.0 * theta};
}

namespace detail {

inline void validate_marked(std::size_t n, const std::vector<std::size_t>& marked) {
    if (marked.empty()) throw std::invalid_argument("marked set must be nonempty");
    for (std::size_t i : marked)
        if (i >= n) throw std::out_of_range("marked index out of range");
}

inline double marked_probability(const StateVector& v, const std::vector<std::size_t>& marked) {
    double p = 0.0;
    for (std::size_t i : marked) p += std::norm(v.amps[i]);
    return p;
}

} // namespace detail

/// Oracle U_t: flip the sign of every marked amplitude.
inline void oracle_flip_inplace(StateVector& v, const std::vector<std::size_t>& marked) {
    for (std::size_t i : marked) v.amps[i] = -v.amps[i];
}

/// Diffusion -U_s: inversion about the mean amplitude.
inline void invert_about_mean_inplace(StateVector& v) {
    Complex sum(0.0, 0.0);
    for (const auto& a : v.amps) sum += a;
    const Complex two_mean = 2.0 * sum / static_cast<double>(v.dim());
    for (auto& a : v.amps) a = two_mean - a;
}

/// One Grover iteration (-U_s U_t) applied in place.
inline void grover_iterate_inplace(StateVector& v, const std::vector<std::size_t>& marked) {
    detail::validate_marked(v.dim(), marked);
    oracle_flip_inplace(v, marked);
    invert_about_mean_inplace(v);
}

inline StateVector grover_iterate(StateVector v, const std::vector<std::size_t>& marked) {
    grover_iterate_inplace(v, marked);
    return v;
}

/// sin^2((2q+1) * arcsin(sqrt(M/N))).
inline double success_probability(std::size_t n, std::size_t m, std::size_t q) {
    const double theta = angle_params(n, m).theta;
    const double s = std::sin((2.0 * static_cast<double>(q) + 1.0) * theta);
    return s * s;
}

struct OptimalQueries {
    std::size_t q;
    double success;
};

/// Smallest q maximizing sin^2((2q+1)theta); ties (within 1e-12) go to the
/// smaller q -- fewer oracle calls at equal success.
inline OptimalQueries optimal_queries(std::size_t n, std::size_t m) {
    const double theta = angle_params(n, m).theta;
    const double q_real = (pi / (2.0 * theta) - 1.0) / 2.0;
    const auto lo = static_cast<long long>(std::floor(std::max(0.0, q_real)));
    std::size_t best_q = 0;
    double best_s = -1.0;
    for (long long q = std::max(0LL, lo - 1); q <= lo + 1; ++q) {
        const double s = success_probability(n, m, static_cast<std::size_t>(q));
        if (s > best_s + 1e-12) {
            best_s = s;
            best_q = static_cast<std::size_t>(q);
        }
    }
    return {best_q, best_s};
}

/// Database size whose optimal search is exact with Q queries:
/// N = 1 / sin^2(pi / (2(2Q+1))).
inline double solve_N_for_Q(std::size_t q) {
    if (q == 0)
        throw std::invalid_argument("solve_N_for_Q: Q = 0 is the degenerate N = 1 case");
    const double s = std::sin(pi / (2.0 * (2.0 * static_cast<double>(q) + 1.0)));
    return 1.0 / (s * s);
}

/// Parameters and per-iteration trace of one database-search execution.
struct GroverRun {
    std::size_t n = 0;
    std::vector<std::size_t> marked;
    std::size_t q_performed = 0;
    std::vector<std::pair<std::size_t, double>> trace; // (iteration, success probability)
};

inline GroverRun run_grover(std::size_t n, std::vector<std::size_t> marked, std::size_t q) {
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    detail::validate_marked(n, marked);

    GroverRun run;
    run.n = n;
    run.marked = marked;
    run.q_performed = q;
    run.trace.reserve(q + 1);

    StateVector v = uniform_state(n);
    run.trace.emplace_back(0, detail::marked_probability(v, marked));
    for (std::size_t it = 1; it <= q; ++it) {
        oracle_flip_inplace(v, marked);
        invert_about_mean_inplace(v);
        run.trace.emplace_back(it, detail::marked_probability(v, marked));
    }
    assert_normalized(v, "run_grover");
    return run;
}

/// Eigenpair of the rotation operator G, expressed in the (|t>, |t_perp>)
/// basis with |t_perp> the normalized component of |s> orthogonal to |t>.
struct RotationEigenpair {
    Complex eigenvalue;
    std::array<Complex, 2> eigenvector;
};

inline std::array<RotationEigenpair, 2> rotation_eigenpairs(std::size_t n) {
    if (n < 2) throw std::invalid_argument("rotation_eigenpairs: need N >= 2");
    const double theta = angle_params(n, 1).theta;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex lam_plus = std::polar(1.0, 2.0 * theta);
    const Complex i_unit(0.0, 1.0);
    return {RotationEigenpair{lam_plus, {Complex(inv_sqrt2, 0.0), i_unit * inv_sqrt2}},
            RotationEigenpair{std::conj(lam_plus), {Complex(inv_sqrt2, 0.0), -i_unit * inv_sqrt2}}};
}

/// One full rotation period in iterations, ceil(pi/theta); the stopping
/// window when N is only known in order of magnitude.
inline std::size_t rotation_period(std::size_t n, std::size_t m = 1) {
    return static_cast<std::size_t>(std::ceil(pi / angle_params(n, m).theta));
}

/// Mean success probability when stopping uniformly at random within one
/// rotation period; converges to 1/2.
inline double random_stopping_mean(std::size_t n, std::size_t samples, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_stopping_mean: need N >= 2");
    if (samples == 0) throw std::invalid_argument("random_stopping_mean: need samples >= 1");
    const std::size_t window = rotation_period(n);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, window - 1);
    double acc = 0.0;
    for (std::size_t s = 0; s < samples; ++s) acc += success_probability(n, 1, pick(rng));
    return acc / static_cast<double>(samples);
}

/// Unitary supplied either densely (test scale) or as a transform pair.
struct Transform {
    std::function<void(StateVector&)> forward; // V
    std::function<void(StateVector&)> adjoint; // V dagger
};

using DenseMatrix = std::vector<std::vector<Complex>>; // row-major

inline void apply_dense(const DenseMatrix& m, StateVector& v) {
    const std::size_t n = v.dim();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        Complex acc(0.0, 0.0);
        for (std::size_t c = 0; c < n; ++c) acc += m[r][c] * v.amps[c];
        out[r] = acc;
    }
    v.amps = std::move(out);
}

inline void apply_dense_adjoint(const DenseMatrix& m, StateVector& v) {
    const std::size_t n = v.dim();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (std::size_t c = 0; c < n; ++c) {
        Complex acc(0.0, 0.0);
        for (std::size_t r = 0; r < n; ++r) acc += std::conj(m[r][c]) * v.amps[r];
        out[c] = acc;
    }
    v.amps = std::move(out);
}

inline Transform transform_from_dense(const DenseMatrix& m) {
    return {[&m](StateVector& v) { apply_dense(m, v); },
            [&m](StateVector& v) { apply_dense_adjoint(m, v); }};
}

struct AmplifyResult {
    std::size_t queries;
    double success;
    double theta;
};

/// Amplitude amplification: iterate -(V U_s V^dag) U_t on V|s>, with |s>, |t>
/// basis states. Boosts |<t|V|s>|^2 to sin^2((2Q+1)theta).
inline AmplifyResult amplitude_amplify(const Transform& v_op, std::size_t s_index,
                                       std::size_t t_index, std::size_t n) {
    if (s_index >= n || t_index >= n)
        throw std::out_of_range("amplitude_amplify: index out of range");

    StateVector psi = basis_state(n, s_index);
    v_op.forward(psi);
    const double amp = std::abs(psi.amps[t_index]);
    if (amp < 1e-14)
        throw std::domain_error("amplitude_amplify: <t|V|s> = 0, nothing to amplify");

    const double theta = std::asin(std::min(1.0, amp));
    const double q_real = (pi / (2.0 * theta) - 1.0) / 2.0;
    const auto lo = static_cast<long long>(std::floor(std::max(0.0, q_real)));
    std::size_t best_q = 0;
    double best_s = -1.0;
    for (long long q = std::max(0LL, lo - 1); q <= lo + 1; ++q) {
        const double s = std::sin((2.0 * static_cast<double>(q) + 1.0) * theta);
        if (s * s > best_s + 1e-12) {
            best_s = s * s;
            best_q = static_cast<std::size_t>(q);
        }
    }

    const Reflection about_start{basis_state(n, s_index), -1};
    for (std::size_t q = 0; q < best_q; ++q) {
        psi.amps[t_index] = -psi.amps[t_index]; // U_t
        v_op.adjoint(psi);
        apply_reflection_inplace(about_start, psi); // -U_s
        v_op.forward(psi);
    }
    const double measured = probability_at(psi, t_index);
    if (std::abs(measured - best_s) > 1e-9)
        throw consistency_error("amplitude_amplify: measured success deviates from closed form");
    return {best_q, measured, theta};
}

inline AmplifyResult amplitude_amplify(const DenseMatrix& v_mat, std::size_t s_index,
                                       std::size_t t_index, std::size_t n) {
    return amplitude_amplify(transform_from_dense(v_mat), s_index, t_index, n);
}

struct FactorizedSearchResult {
    std::size_t queries;
    std::size_t found;
};

/// Independent exact 4-item search per base-4 digit of the target label;
/// log4(N) queries in total.
inline FactorizedSearchResult factorized_search(std::size_t n, std::size_t target) {
    std::size_t rest = n;
    std::size_t digits = 0;
    while (rest > 1) {
        if (rest % 4 != 0)
            throw std::invalid_argument("factorized_search: N must be a power of 4");
        rest /= 4;
        ++digits;
    }
    if (target >= n) throw std::out_of_range("factorized_search: target out of range");

    std::size_t found = 0;
    std::size_t label = target;
    for (std::size_t pos = 0; pos < digits; ++pos) {
        const std::size_t digit = label % 4;
        label /= 4;
        StateVector v = grover_iterate(uniform_state(4), {digit});
        // The 4-item search is exact; measurement is deterministic.
        std::size_t best = 0;
        for (std::size_t i = 1; i < 4; ++i)
            if (std::norm(v.amps[i]) > std::norm(v.amps[best])) best = i;
        if (best != digit || std::abs(std::norm(v.amps[best]) - 1.0) > 1e-12)
            throw consistency_error("factorized_search: digit search not exact");
        found += digit << (2 * pos);
    }
    return {digits, found};
}

struct ClassicalBaselines {
    std::size_t binary_sorted;          // log2(N), ceil for non-powers of two
    double unsorted_mean_with_memory;   // (N+1)/2
    double unsorted_mean_memoryless;    // N
};

inline ClassicalBaselines classical_baselines(std::size_t n) {
    if (n == 0) throw std::invalid_argument("classical_baselines: need N >= 1");
    const std::size_t binary =
        n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
    return {binary, (static_cast<double>(n) + 1.0) / 2.0, static_cast<double>(n)};
}

} // namespace qsearch
