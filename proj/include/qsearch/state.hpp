#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qsearch/common.hpp"

namespace qsearch {

/// Dense complex state vector over an N-dimensional basis.
struct StateVector {
    std::vector<Complex> amps;

    StateVector() = default;
    explicit StateVector(std::size_t n) : amps(n) {}
    explicit StateVector(std::vector<Complex> a) : amps(std::move(a)) {}

    std::size_t dim() const { return amps.size(); }
    Complex& operator[](std::size_t i) { return amps[i]; }
    const Complex& operator[](std::size_t i) const { return amps[i]; }
};

inline double norm_sq(const StateVector& v) {
    double s = 0.0;
    for (const auto& a : v.amps) s += std::norm(a);
    return s;
}

inline bool is_normalized(const StateVector& v, double tol = norm_tolerance) {
    return std::abs(norm_sq(v) - 1.0) < tol;
}

/// Throws consistency_error on norm drift; drift indicates a bug and is
/// never corrected in place.
inline void assert_normalized(const StateVector& v, const std::string& where,
                              double tol = norm_tolerance) {
    const double drift = std::abs(norm_sq(v) - 1.0);
    if (!(drift < tol)) {
        throw consistency_error(where + ": norm drift " + std::to_string(drift) +
                                " exceeds tolerance");
    }
}

/// |s>: every amplitude 1/sqrt(N).
inline StateVector uniform_state(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_state: dimension must be positive");
    StateVector v(n);
    const Complex a(1.0 / std::sqrt(static_cast<double>(n)), 0.0);
    for (auto& x : v.amps) x = a;
    return v;
}

inline StateVector basis_state(std::size_t n, std::size_t i) {
    if (n == 0) throw std::invalid_argument("basis_state: dimension must be positive");
    if (i >= n) throw std::out_of_range("basis_state: index out of range");
    StateVector v(n);
    v.amps[i] = Complex(1.0, 0.0);
    return v;
}

/// <a|b> = sum conj(a_i) * b_i.
inline Complex overlap(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

inline double probability_at(const StateVector& v, std::size_t i) {
    if (i >= v.dim()) throw std::out_of_range("probability_at: index out of range");
    return std::norm(v.amps[i]);
}

/// sign * (1 - 2|p><p|). sign = -1 makes -U_s representable.
struct Reflection {
    StateVector axis;
    int sign = +1;
};

/// Rank-1 update, never a dense matrix: sign * (v - 2 <p|v> p).
inline void apply_reflection_inplace(const Reflection& r, StateVector& v) {
    if (r.axis.dim() != v.dim())
        throw std::invalid_argument("apply_reflection: dimension mismatch");
    const Complex pv = overlap(r.axis, v);
    const Complex two_pv = 2.0 * pv;
    if (r.sign >= 0) {
        for (std::size_t i = 0; i < v.dim(); ++i)
            v.amps[i] -= two_pv * r.axis.amps[i];
    } else {
        for (std::size_t i = 0; i < v.dim(); ++i)
            v.amps[i] = two_pv * r.axis.amps[i] - v.amps[i];
    }
}

inline StateVector apply_reflection(const Reflection& r, StateVector v) {
    apply_reflection_inplace(r, v);
    return v;
}

} // namespace qsearch
