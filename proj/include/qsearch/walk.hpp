#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qsearch/common.hpp"
#include "qsearch/lattice.hpp"
#include "qsearch/state.hpp"

namespace qsearch {

/// exp(-i tau H_B) on every block of one partition.
///
/// H_B is the staggered hopping sum over the block's d axis exchanges,
/// H_B = sum_j s_j eta_j(c) X_j with eta_j(c) = (-1)^(c_0 + ... + c_{j-1})
/// on the corner labels and s_j an optional per-axis sign (+1 when `axis_signs`
/// is null). The eta factors make the axis terms anticommute, so H_B^2 = d I
/// and the exponential has the exact closed form
///
///   exp(-i tau H_B) = cos(tau sqrt(d)) I - i sin(tau sqrt(d))/sqrt(d) H_B,
///
/// applied in O(N d). Without the eta signs the axis terms commute and the
/// composite walk's eigenphases become per-axis sums; half the spectrum then
/// collapses toward phase zero, W^t1 cannot approximate a reflection, and the
/// spatial search stops amplifying. The anticommuting form keeps each momentum
/// class on the two shells +-E(k).
inline void apply_block_step(StateVector& v, const BlockPartition& part, double tau,
                             const double* axis_signs = nullptr) {
    if (v.dim() != part.n_blocks * part.block_size)
        throw std::invalid_argument("apply_block_step: dimension mismatch");

    const double sqrt_d = std::sqrt(static_cast<double>(part.d));
    const double ct = std::cos(tau * sqrt_d);
    const Complex ms(0.0, -std::sin(tau * sqrt_d) / sqrt_d); // -i sin(tau sqrt(d))/sqrt(d)
    const std::size_t bs = part.block_size;

    std::vector<Complex> buf(bs);
    std::vector<Complex> hbuf(bs);

    for (std::size_t b = 0; b < part.n_blocks; ++b) {
        const std::uint32_t* idx = part.block(b);
        for (std::size_t c = 0; c < bs; ++c) buf[c] = v.amps[idx[c]];
        for (std::size_t c = 0; c < bs; ++c) hbuf[c] = Complex(0.0, 0.0);
        for (int j = 0; j < part.d; ++j) {
            const std::size_t bit = std::size_t{1} << j;
            const std::size_t low_mask = bit - 1;
            const double sj = axis_signs ? axis_signs[j] : 1.0;
            for (std::size_t base = 0; base < bs; base += 2 * bit) {
                for (std::size_t off = 0; off < bit; ++off) {
                    const std::size_t lo = base + off;
                    const std::size_t hi = lo + bit;
                    const double sign = (std::popcount(lo & low_mask) & 1) ? -sj : sj;
                    hbuf[lo] += sign * buf[hi];
                    hbuf[hi] += sign * buf[lo];
                }
            }
        }
        for (std::size_t c = 0; c < bs; ++c) v.amps[idx[c]] = ct * buf[c] + ms * hbuf[c];
    }
}

/// The local diffusion step W = U_e U_o. The odd part uses the corner-local
/// staggered signs; the even part carries an extra per-axis sign
/// rho_j = (-1)^(j+1) (axis 0 flipped, axis 1 kept, ...). The rho pattern is
/// the gauge-invariant content of the Kogut-Susskind link phases: it decides
/// where the massless cone sits and whether the folded zero modes move. All
/// rho_j equal would freeze an entire momentum class (it would trap marked-
/// vertex amplitude and cap the search at P ~ 1/N); the alternating pattern
/// keeps every class dispersive except the one unavoidable doubler corner,
/// and at d = 1 it reduces to the opposite-sign pair that puts the linear
/// cone at k = 0. At L = 2 the two partitions hold the same vertex pairs, the
/// alternating composition degenerates, and rho = +1 is used instead (one
/// coincident link per axis, doubled hopping weight).
struct WalkOperator {
    Lattice lattice;
    double tau = 0.0;
    int t1 = 1; // walk steps between oracle queries
    std::vector<double> even_axis_signs;
    BlockPartition odd;
    BlockPartition even;
};

inline WalkOperator make_walk(const Lattice& lat, double tau, int t1) {
    if (t1 < 1) throw std::invalid_argument("make_walk: need t1 >= 1");
    WalkOperator w;
    w.lattice = lat;
    w.tau = tau;
    w.t1 = t1;
    w.even_axis_signs.resize(static_cast<std::size_t>(lat.d));
    for (int j = 0; j < lat.d; ++j)
        w.even_axis_signs[static_cast<std::size_t>(j)] =
            lat.L == 2 ? 1.0 : (j % 2 == 0 ? -1.0 : 1.0);
    w.odd = block_partition(lat, Parity::odd);
    w.even = block_partition(lat, Parity::even);
    return w;
}

/// One W step: U_o then U_e.
inline void apply_W_inplace(StateVector& v, const WalkOperator& w) {
    apply_block_step(v, w.odd, w.tau);
    apply_block_step(v, w.even, w.tau, w.even_axis_signs.data());
}

inline StateVector apply_W(StateVector v, const WalkOperator& w) {
    apply_W_inplace(v, w);
    return v;
}

/// W^t1 -- the diffusion applied between consecutive oracle queries.
inline void apply_W_t1_inplace(StateVector& v, const WalkOperator& w) {
    for (int s = 0; s < w.t1; ++s) apply_W_inplace(v, w);
}

/// <0|W^t1|0>: the walk amplitude to return to the origin.
inline Complex return_amplitude(const WalkOperator& w) {
    StateVector v = basis_state(w.lattice.n, 0);
    apply_W_t1_inplace(v, w);
    return v.amps[0];
}

struct TuneResult {
    double tau;
    double score; // tuning objective at the minimizer
};

namespace detail {

template <typename F>
TuneResult minimize_on_grid(F eval, std::size_t grid_points, double tol) {
    const double hi = pi / 2.0;
    const double h = hi / static_cast<double>(grid_points);
    double best_tau = h;
    double best = eval(h);
    for (std::size_t i = 1; i < grid_points; ++i) {
        const double tau = h * static_cast<double>(i + 1);
        const double s = eval(tau);
        if (s < best) {
            best = s;
            best_tau = tau;
        }
    }

    double a = std::max(h * 0.25, best_tau - h);
    double b = std::min(hi, best_tau + h);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = eval(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    const double fm = eval(mid);
    if (fm < best) return {mid, fm};
    return {best_tau, best};
}

} // namespace detail

/// Deterministic grid scan over (0, pi/2] plus golden-section refinement to
/// 1e-3, driving W^t1 toward -U_s. The overlap criterion reduces to pushing
/// the return amplitude toward -1, so the objective is Re<0|W^t1|0>. At
/// L = 2 that criterion degenerates (a global phase can fake it) and the
/// magnitude |<0|W^t1|0>| is minimized instead.
inline TuneResult tune_tau(const Lattice& lat, int t1, std::size_t grid_points = 64) {
    if (grid_points < 8) throw std::invalid_argument("tune_tau: need grid >= 8 points");
    if (t1 < 1) throw std::invalid_argument("tune_tau: need t1 >= 1");

    WalkOperator w = make_walk(lat, 0.0, t1);
    const bool magnitude = lat.L == 2;
    const auto eval = [&](double tau) {
        w.tau = tau;
        const Complex r = return_amplitude(w);
        return magnitude ? std::abs(r) : r.real();
    };
    return detail::minimize_on_grid(eval, grid_points, 1e-3);
}

} // namespace qsearch
