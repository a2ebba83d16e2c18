// CSV serialization for pulses, cost profiles, moment tables, and optimizer
// convergence logs. All writers use fixed 15-significant-digit formatting so
// identical inputs produce byte-identical files.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pulses/bloch.hpp"

namespace pulses::io {

/// Write a `t,omega,phi,ux,uy` waveform CSV. Analytic pulses get n_samples
/// rows on [0, T] (cosine-graded when the pulse asks for a graded mesh,
/// evenly spaced otherwise). Piecewise pulses get one row per segment
/// midpoint plus a `# segments dt=...` comment recording the segment grid,
/// which makes the file an exact description rather than a sampling.
void write_pulse_csv(const std::string& path, const Pulse& pulse, int n_samples = 1024);

/// Read a waveform CSV back into a callable pulse: exact uniform segments
/// when the `# segments` comment is present, monotone cubic (PCHIP)
/// interpolation of omega(t) and phi(t) otherwise. Malformed files raise
/// io_error.
Pulse read_pulse_csv(const std::string& path);

/// Write a `delta,J,log10J` cost-profile CSV; the log column is floored at
/// 1e-300 so rows stay finite when J reaches numerical zero.
void write_profile_csv(const std::string& path, const CostProfile& profile);

/// Write an `n,re,im,abs` moment table for C_0..C_N. Row n holds the
/// zero-based moment C_n = int (dk_x/ds + i dk_y/ds) k_z^n ds.
void write_moments_csv(const std::string& path,
                       const std::vector<std::complex<double>>& moments);

/// Write an `iter,cost,grad_norm` optimizer log (one row per iterate).
void write_convergence_csv(const std::string& path, const std::vector<double>& cost,
                           const std::vector<double>& grad_norm);

}  // namespace pulses::io
