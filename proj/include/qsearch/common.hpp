#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsearch {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Unitarity drift beyond this is treated as a bug, not noise; state is
// never silently renormalized.
inline constexpr double norm_tolerance = 1e-10;

// Default refusal point for state-vector allocation (overridable via
// QSEARCH_MAX_N or --max-n).
inline constexpr std::size_t default_max_n = std::size_t{1} << 22;

/// Numerical self-check failed (norm drift, light-cone violation).
/// Maps to CLI exit code 2.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested problem size cannot be represented or exceeds the cap.
/// Maps to CLI exit code 3.
struct size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qsearch
