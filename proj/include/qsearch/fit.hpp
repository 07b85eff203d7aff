#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qsearch {

struct FitResult {
    double a = 0.0; // intercept
    double b = 0.0; // coefficient of 1/x
    double residual_rms = 0.0;
    std::size_t points_used = 0;
};

/// Closed-form least squares of y against (1, 1/x); exact on consistent data.
inline FitResult fit_inverse(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_inverse: size mismatch");
    const std::size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("fit_inverse: need at least 2 points");

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("fit_inverse: x values must be positive");
        u[i] = 1.0 / xs[i];
    }

    double mu = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += u[i];
        my += ys[i];
    }
    mu /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double suu = 0.0, suy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suy += (u[i] - mu) * (ys[i] - my);
    }
    if (suu <= 0.0)
        throw std::invalid_argument("fit_inverse: underdetermined, need 2 distinct x values");

    FitResult r;
    r.b = suy / suu;
    r.a = my - r.b * mu;
    r.points_used = n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - r.a - r.b * u[i];
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return r;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 paired points");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("linear_fit: degenerate x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// Log-log slope -- the scaling exponent of y against x.
inline double loglog_exponent(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0))
            throw std::invalid_argument("loglog_exponent: values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    return linear_fit(lx, ly).slope;
}

} // namespace qsearch
