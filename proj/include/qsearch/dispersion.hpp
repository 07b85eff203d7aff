#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "qsearch/common.hpp"
#include "qsearch/lattice.hpp"
#include "qsearch/state.hpp"
#include "qsearch/walk.hpp"

namespace qsearch {

/// Eigenphases of the walk on one plane-wave subspace. The block structure
/// folds each mode k with its pi-shifted partners k + pi*b, b in {0,1}^d,
/// into a 2^d-dimensional invariant subspace shared by the whole class.
struct ModeRecord {
    std::vector<std::size_t> mode;   // representative m, components in [0, L/2)
    double k_norm = 0.0;             // minimum-image |k| of the representative
    std::vector<double> eigenphases; // sorted by |phase|
    double invariance_residual = 0.0;
};

struct ModeSpectrum {
    int d = 0;
    std::size_t L = 0;
    std::vector<ModeRecord> records;
};

namespace detail {

inline StateVector plane_wave(const Lattice& lat, const std::vector<std::size_t>& m) {
    StateVector v(lat.n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(lat.n));
    std::vector<double> k(static_cast<std::size_t>(lat.d));
    for (int j = 0; j < lat.d; ++j)
        k[static_cast<std::size_t>(j)] =
            2.0 * pi * static_cast<double>(m[static_cast<std::size_t>(j)]) /
            static_cast<double>(lat.L);
    for (std::size_t x = 0; x < lat.n; ++x) {
        double phase = 0.0;
        for (int j = 0; j < lat.d; ++j)
            phase += k[static_cast<std::size_t>(j)] * static_cast<double>(lat.coord(x, j));
        v.amps[x] = std::polar(norm, phase);
    }
    return v;
}

/// Restriction of one walk step to the folded subspace of a representative
/// mode; returns its eigenphases and the invariance residual.
inline ModeRecord probe_mode(const Lattice& lat, const std::vector<std::size_t>& rep,
                             const std::function<void(StateVector&)>& step) {
    const std::size_t d = static_cast<std::size_t>(lat.d);
    const std::size_t folds = std::size_t{1} << d;
    const std::size_t half = lat.L / 2;

    std::vector<StateVector> basis(folds);
    std::vector<StateVector> image(folds);
    for (std::size_t b = 0; b < folds; ++b) {
        std::vector<std::size_t> m = rep;
        for (std::size_t j = 0; j < d; ++j)
            if (b & (std::size_t{1} << j)) m[j] = (m[j] + half) % lat.L;
        basis[b] = plane_wave(lat, m);
        image[b] = basis[b];
        step(image[b]);
    }

    Eigen::MatrixXcd mat(folds, folds);
    for (std::size_t col = 0; col < folds; ++col)
        for (std::size_t row = 0; row < folds; ++row)
            mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                overlap(basis[row], image[col]);

    // Invariance residual from the explicit remainder vector; subtracting
    // norms would drown the answer in cancellation noise.
    double residual = 0.0;
    for (std::size_t col = 0; col < folds; ++col) {
        StateVector rem = image[col];
        for (std::size_t row = 0; row < folds; ++row) {
            const Complex coeff =
                mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
            for (std::size_t i = 0; i < rem.dim(); ++i)
                rem.amps[i] -= coeff * basis[row].amps[i];
        }
        residual = std::max(residual, std::sqrt(norm_sq(rem)));
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(mat, /*computeEigenvectors=*/false);

    ModeRecord rec;
    rec.mode = rep;
    double kk = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t mm = std::min(rep[j], lat.L - rep[j]);
        const double kj = 2.0 * pi * static_cast<double>(mm) / static_cast<double>(lat.L);
        kk += kj * kj;
    }
    rec.k_norm = std::sqrt(kk);
    rec.invariance_residual = residual;
    rec.eigenphases.resize(folds);
    for (std::size_t i = 0; i < folds; ++i)
        rec.eigenphases[i] = std::arg(solver.eigenvalues()(static_cast<Eigen::Index>(i)));
    std::sort(rec.eigenphases.begin(), rec.eigenphases.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    return rec;
}

inline ModeSpectrum probe_with(const Lattice& lat,
                               const std::function<void(StateVector&)>& step) {
    if (lat.n > 4096) throw size_error("dispersion probe: lattice exceeds N = 4096");
    ModeSpectrum spec;
    spec.d = lat.d;
    spec.L = lat.L;

    const std::size_t d = static_cast<std::size_t>(lat.d);
    const std::size_t half = lat.L / 2;
    std::vector<std::size_t> rep(d, 0);
    std::size_t count = 1;
    for (std::size_t j = 0; j < d; ++j) count *= half;
    spec.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        spec.records.push_back(probe_mode(lat, rep, step));
        for (std::size_t j = 0; j < d; ++j) {
            if (++rep[j] < half) break;
            rep[j] = 0;
        }
    }
    return spec;
}

} // namespace detail

/// Per-mode eigenphases of one W step. The smallest-|phase| branch of the
/// smallest nonzero modes grows linearly in |k| (Dirac-like), not
/// quadratically; the k = 0 record contains an exactly stationary phase.
inline ModeSpectrum dispersion_probe(const Lattice& lat, double tau) {
    const WalkOperator w = make_walk(lat, tau, 1);
    return detail::probe_with(lat, [&w](StateVector& v) { apply_W_inplace(v, w); });
}

/// (|k|, min |eigenphase|) for the `count` smallest nonzero representative
/// modes -- the points used for the small-k dispersion fit.
inline std::vector<std::pair<double, double>> smallest_mode_phases(const ModeSpectrum& spec,
                                                                   std::size_t count) {
    std::vector<const ModeRecord*> recs;
    for (const auto& r : spec.records)
        if (r.k_norm > 0.0) recs.push_back(&r);
    std::sort(recs.begin(), recs.end(),
              [](const ModeRecord* a, const ModeRecord* b) { return a->k_norm < b->k_norm; });
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < std::min(count, recs.size()); ++i)
        out.emplace_back(recs[i]->k_norm, std::abs(recs[i]->eigenphases.front()));
    return out;
}

} // namespace qsearch
