// CSV writers/readers for pulses, cost profiles, moments, and convergence
// logs, in a fixed deterministic number format.
#include "pulses/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pulses/errors.hpp"
#include "pulses/interp.hpp"

namespace pulses::io {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out.good()) throw io_error("write failed: " + path);
}

/// Uniform or cosine-graded sample times matching the propagator's mesh rule.
double sample_time(const Pulse& p, int i, int n) {
    const double f = static_cast<double>(i) / (n - 1);
    if (p.graded_mesh) return 0.5 * p.T * (1.0 - std::cos(kPi * f));
    return p.T * f;
}

bool uniform_segments(const Pulse& p) {
    const double dt0 = p.segments.front().dt;
    for (const Segment& s : p.segments)
        if (std::fabs(s.dt - dt0) > 1e-12 * dt0) return false;
    return true;
}

}  // namespace

void write_pulse_csv(const std::string& path, const Pulse& pulse, int n_samples) {
    std::ofstream out = open_out(path);
    out << "t,omega,phi,ux,uy\n";
    auto row = [&out](double t, double om, double ph) {
        out << num(t) << ',' << num(om) << ',' << num(ph) << ',' << num(om * std::cos(ph))
            << ',' << num(om * std::sin(ph)) << '\n';
    };
    if (!pulse.segments.empty() && uniform_segments(pulse)) {
        char meta[128];
        if (pulse.omega_max)
            std::snprintf(meta, sizeof meta, "# segments dt=%.17g omega_max=%.17g\n",
                          pulse.segments.front().dt, *pulse.omega_max);
        else
            std::snprintf(meta, sizeof meta, "# segments dt=%.17g\n",
                          pulse.segments.front().dt);
        out << meta;
        double t = 0.0;
        for (const Segment& s : pulse.segments) {
            row(t + 0.5 * s.dt, s.omega, s.phi);
            t += s.dt;
        }
    } else if (!pulse.segments.empty()) {
        double t = 0.0;  // non-uniform: plain sampling at the midpoints
        for (const Segment& s : pulse.segments) {
            row(t + 0.5 * s.dt, s.omega, s.phi);
            t += s.dt;
        }
    } else {
        if (n_samples < 2) throw usage_error("pulse CSV needs at least 2 samples");
        for (int i = 0; i < n_samples; ++i) {
            const double t = sample_time(pulse, i, n_samples);
            row(t, pulse.omega(t), pulse.phi(t));
        }
    }
    finish(out, path);
}

Pulse read_pulse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read pulse CSV: " + path);

    std::string line;
    bool have_header = false;
    bool piecewise = false;
    double seg_dt = 0.0, seg_omega_max = 0.0;
    int meta_fields = 0;
    std::vector<double> t, om, ph;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            meta_fields = std::sscanf(line.c_str(), "# segments dt=%lf omega_max=%lf",
                                      &seg_dt, &seg_omega_max);
            if (meta_fields >= 1) piecewise = true;
            continue;
        }
        if (!have_header) {
            if (line.rfind("t,omega,phi", 0) != 0)
                throw io_error("pulse CSV must start with a t,omega,phi header: " + path);
            have_header = true;
            continue;
        }
        double ti, omi, phi;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &ti, &omi, &phi) != 3)
            throw io_error("malformed pulse CSV row in " + path + ": " + line);
        t.push_back(ti);
        om.push_back(omi);
        ph.push_back(phi);
    }
    if (!have_header) throw io_error("pulse CSV has no header: " + path);
    if (t.empty()) throw io_error("pulse CSV has no data rows: " + path);

    if (piecewise) {
        if (!(seg_dt > 0.0)) throw io_error("pulse CSV segment metadata has dt <= 0: " + path);
        std::vector<Segment> segs;
        segs.reserve(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) segs.push_back({seg_dt, om[i], ph[i]});
        return make_piecewise_pulse(std::move(segs),
                                    meta_fields == 2
                                        ? std::optional<double>(seg_omega_max)
                                        : std::nullopt);
    }

    if (t.size() < 2) throw io_error("pulse CSV needs at least two samples: " + path);
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i + 1] > t[i]))
            throw io_error("pulse CSV times must strictly increase: " + path);
    if (t.front() < 0.0) throw io_error("pulse CSV times must start at t >= 0: " + path);

    Pulse p;
    p.T = t.back();
    auto om_curve = std::make_shared<PchipCurve>(t, om);
    auto ph_curve = std::make_shared<PchipCurve>(std::move(t), std::move(ph));
    p.omega = [om_curve](double tt) { return (*om_curve)(tt); };
    p.phi = [ph_curve](double tt) { return (*ph_curve)(tt); };
    return p;
}

void write_profile_csv(const std::string& path, const CostProfile& profile) {
    std::ofstream out = open_out(path);
    out << "delta,J,log10J\n";
    for (std::size_t i = 0; i < profile.delta.size(); ++i) {
        const double J = profile.J[i];
        out << num(profile.delta[i]) << ',' << num(J) << ','
            << num(std::log10(std::max(J, 1e-300))) << '\n';
    }
    finish(out, path);
}

void write_moments_csv(const std::string& path,
                       const std::vector<std::complex<double>>& moments) {
    std::ofstream out = open_out(path);
    out << "n,re,im,abs\n";
    out << "# n counts from zero: C_n = int (dkx/ds + i dky/ds) kz^n ds\n";
    for (std::size_t n = 0; n < moments.size(); ++n)
        out << n << ',' << num(moments[n].real()) << ',' << num(moments[n].imag()) << ','
            << num(std::abs(moments[n])) << '\n';
    finish(out, path);
}

void write_convergence_csv(const std::string& path, const std::vector<double>& cost,
                           const std::vector<double>& grad_norm) {
    if (cost.size() != grad_norm.size())
        throw usage_error("convergence log needs matching cost/grad_norm lengths");
    std::ofstream out = open_out(path);
    out << "iter,cost,grad_norm\n";
    for (std::size_t i = 0; i < cost.size(); ++i)
        out << i << ',' << num(cost[i]) << ',' << num(grad_norm[i]) << '\n';
    finish(out, path);
}

}  // namespace pulses::io
