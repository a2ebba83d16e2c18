// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes,
// scipy-compatible endpoint rule). Used to turn sampled waveforms back into
// callable pulses without overshoot; exact on the samples, O(h^3..h^4)
// between them, and never leaves the local data range.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pulses/errors.hpp"

namespace pulses {

class PchipCurve {
  public:
    PchipCurve() = default;

    /// Build from strictly increasing abscissae x and values y (sizes equal, >= 2).
    PchipCurve(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw usage_error("interpolation needs >= 2 matching samples");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i])) throw usage_error("interpolation abscissae must increase");
        d_.resize(n);
        if (n == 2) {  // single interval: linear
            d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            return;
        }
        std::vector<double> h(n - 1), slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            slope[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d_[i] = 0.0;  // local extremum: flat tangent keeps monotonicity
            } else {
                // weighted harmonic mean of neighbouring secant slopes
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d_[0] = edge_slope(h[0], h[1], slope[0], slope[1]);
        d_[n - 1] = edge_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }

    /// Evaluate at t; clamps to the end values outside [x_front, x_back].
    double operator()(double t) const {
        if (t <= x_.front()) t = x_.front();
        if (t >= x_.back()) t = x_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), t);
        const std::size_t i = std::min<std::size_t>(
            x_.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                               0, std::distance(x_.begin(), it) - 1)));
        const double h = x_[i + 1] - x_[i];
        const double u = (t - x_[i]) / h;
        const double u2 = u * u, u3 = u2 * u;
        // cubic Hermite basis
        return y_[i] * (2 * u3 - 3 * u2 + 1) + d_[i] * h * (u3 - 2 * u2 + u) +
               y_[i + 1] * (-2 * u3 + 3 * u2) + d_[i + 1] * h * (u3 - u2);
    }

    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }

  private:
    /// Non-centered three-point estimate for the boundary slope, shape-limited.
    static double edge_slope(double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0)
            d = 0.0;
        else if (s0 * s1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(s0))
            d = 3.0 * s0;
        return d;
    }

    std::vector<double> x_, y_, d_;
};

}  // namespace pulses
