// CLI plumbing: argument parsing, family dispatch, grid construction, and
// the mapping from library errors to exit codes.
#include "pulses/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "pulses/bloch.hpp"
#include "pulses/errors.hpp"
#include "pulses/families.hpp"
#include "pulses/grape.hpp"
#include "pulses/io.hpp"
#include "pulses/kcurve.hpp"

namespace pulses::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kFamilyList =
    "anger-weber, jacobi, gen-jacobi, amp-fixed, chebyshev, excitation";

/// Family name plus the union of all per-family parameters.
struct FamilyOptions {
    std::string name;
    double nu = 4.0;
    double m = 0.5;
    std::vector<double> moduli;
    double eps = 0.02;
    int n = 2;
    double theta_deg = 90.0;
};

void add_family_options(CLI::App* cmd, FamilyOptions& f, bool required) {
    auto* name = cmd->add_option("family", f.name,
                                 std::string("pulse family: ") + kFamilyList);
    if (required) name->required();
    cmd->add_option("--nu", f.nu,
                    "oscillation parameter (anger-weber, jacobi, gen-jacobi, amp-fixed)");
    cmd->add_option("--m", f.m, "elliptic parameter m (jacobi)");
    cmd->add_option("--moduli", f.moduli, "elliptic parameter list (gen-jacobi)")
        ->delimiter(',');
    cmd->add_option("--eps", f.eps, "truncated duration fraction per end (amp-fixed)");
    cmd->add_option("--n", f.n, "polynomial order (chebyshev, excitation)");
    cmd->add_option("--theta-deg", f.theta_deg, "target flip angle in degrees (excitation)");
}

Pulse family_pulse(const FamilyOptions& f) {
    using namespace families;
    if (f.name == "anger-weber") return anger_weber_pulse(f.nu);
    if (f.name == "jacobi") return jacobi_pulse(f.nu, f.m);
    if (f.name == "gen-jacobi") return generalized_jacobi_pulse(f.nu, f.moduli);
    if (f.name == "amp-fixed") return amplitude_fixed_pulse(f.nu, f.eps);
    if (f.name == "chebyshev") return chebyshev_pulse(f.n);
    if (f.name == "excitation")
        return pulse_from_kcurve(excitation_curve(f.theta_deg * kPi / 180.0, f.n));
    throw usage_error("unknown family '" + f.name + "' (" + kFamilyList + ")");
}

KCurve family_curve(const FamilyOptions& f) {
    using namespace families;
    if (f.name == "anger-weber") return anger_weber_curve(f.nu);
    if (f.name == "chebyshev") return chebyshev_curve(f.n);
    if (f.name == "excitation") return excitation_curve(f.theta_deg * kPi / 180.0, f.n);
    if (f.name == "jacobi" || f.name == "gen-jacobi" || f.name == "amp-fixed")
        throw usage_error("family '" + f.name + "' does not define a k-space curve");
    throw usage_error("unknown family '" + f.name + "' (" + kFamilyList + ")");
}

/// Offset grid from --dmin/--dmax/--dcount; a single point needs dmin == dmax.
std::vector<double> make_grid(double dmin, double dmax, int dcount) {
    if (dcount < 1) throw usage_error("--dcount must be >= 1");
    if (dcount == 1) {
        if (dmin != dmax) throw usage_error("a single-point grid needs --dmin == --dmax");
        return {dmin};
    }
    if (!(dmin < dmax)) throw usage_error("--dmin must be < --dmax");
    std::vector<double> g(static_cast<std::size_t>(dcount));
    for (int i = 0; i < dcount; ++i)
        g[static_cast<std::size_t>(i)] = dmin + (dmax - dmin) * i / (dcount - 1);
    return g;
}

/// "<stem>_<suffix>.csv" from an output path with or without the extension.
std::string suffixed_path(std::string out, const std::string& suffix) {
    if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0)
        out.resize(out.size() - 4);
    return out + "_" + suffix + ".csv";
}

/// Cost profile in the small-tip approximation, from the toggling trajectory.
CostProfile sta_profile(const Pulse& pulse, const std::vector<double>& grid, int steps) {
    const TogglingTrajectory traj = toggling_trajectory(pulse, steps);
    CostProfile prof;
    prof.delta = grid;
    prof.J.reserve(grid.size());
    for (double d : grid) prof.J.push_back(sta_cost(sta_transfer_from_v(traj, d)));
    return prof;
}

struct Options {
    FamilyOptions family;
    std::string out;
    std::string pulse_csv;
    std::string config_path;
    std::string init_csv;
    double init_nu = std::sqrt(24.0);
    int samples = 1024;
    int steps = 4096;
    double dmin = -1.0, dmax = 1.0;
    int dcount = 101;
    std::vector<std::string> methods{"exact"};
    int order = 4;
    bool physical = false;
    double omega_max_hz = 1e4;
};

Pulse maybe_scaled(Pulse p, const Options& o) {
    if (!o.physical) return p;
    return families::scale_pulse(std::move(p), 2.0 * kPi * o.omega_max_hz);
}

void run_synth(const Options& o) {
    io::write_pulse_csv(o.out, maybe_scaled(family_pulse(o.family), o), o.samples);
}

void run_profile(const Options& o) {
    if (o.pulse_csv.empty() == o.family.name.empty())
        throw usage_error("profile needs exactly one source: a family or --pulse-csv");
    for (const std::string& m : o.methods)
        if (m != "exact" && m != "toggling" && m != "sta" && m != "aht")
            throw usage_error("unknown method '" + m + "' (exact, toggling, sta, aht)");
    const Pulse pulse = o.pulse_csv.empty() ? maybe_scaled(family_pulse(o.family), o)
                                            : io::read_pulse_csv(o.pulse_csv);
    const std::vector<double> grid = make_grid(o.dmin, o.dmax, o.dcount);
    for (const std::string& m : o.methods) {
        const CostProfile prof = m == "sta"
                                     ? sta_profile(pulse, grid, o.steps)
                                     : cost_profile(pulse, grid, parse_cost_method(m), o.steps);
        io::write_profile_csv(suffixed_path(o.out, m), prof);
    }
}

void run_moments(const Options& o) {
    if (o.order < 0) throw usage_error("--order must be >= 0");
    io::write_moments_csv(o.out, local_moments(family_curve(o.family), o.order));
}

void run_grape(const Options& o) {
    const grape::GrapeConfig cfg = grape::load_grape_config(o.config_path);
    const Pulse init = o.init_csv.empty() ? grape::grape_initial_pulse(cfg, o.init_nu)
                                          : io::read_pulse_csv(o.init_csv);
    const grape::GrapeResult res = grape::grape_optimize(init, cfg);
    io::write_pulse_csv(o.out, res.pulse);
    io::write_convergence_csv(suffixed_path(o.out, "log"), res.cost, res.grad_norm);
    std::cout << "cost " << res.cost.front() << " -> " << res.cost.back() << " in "
              << res.cost.size() - 1 << " accepted steps\n";
}

}  // namespace

int run(int argc, const char* const* argv) {
    Options o;
    CLI::App app{"robust two-level control pulses: synthesis, cost profiles, "
                 "k-space moments, and numerical optimization"};
    app.require_subcommand(1);

    CLI::App* synth = app.add_subcommand("synth", "write a pulse waveform CSV");
    add_family_options(synth, o.family, true);
    synth->add_option("--samples", o.samples, "waveform rows to write (default 1024)");
    synth->add_option("--out", o.out, "output CSV path")->required();

    CLI::App* profile =
        app.add_subcommand("profile", "sweep the inversion cost J(delta) per method");
    add_family_options(profile, o.family, false);
    profile->add_option("--pulse-csv", o.pulse_csv, "read the pulse from a waveform CSV");
    profile->add_option("--methods", o.methods, "exact, toggling, sta, aht")->delimiter(',');
    profile->add_option("--steps", o.steps, "propagation steps (default 4096)");
    profile->add_option("--dmin", o.dmin, "grid start (default -1)");
    profile->add_option("--dmax", o.dmax, "grid end (default 1)");
    profile->add_option("--dcount", o.dcount, "grid points (default 101)");
    profile->add_option("--out", o.out, "output stem; writes <stem>_<method>.csv")
        ->required();

    CLI::App* moments =
        app.add_subcommand("moments", "tabulate k-space moments C_0..C_N of a curve family");
    add_family_options(moments, o.family, true);
    moments->add_option("--order", o.order, "highest moment N (default 4)");
    moments->add_option("--out", o.out, "output CSV path")->required();

    CLI::App* grape_cmd =
        app.add_subcommand("grape", "optimize segment phases over an offset grid");
    grape_cmd->add_option("--config", o.config_path, "flat key = value config file")
        ->required();
    grape_cmd->add_option("--init-csv", o.init_csv, "initial piecewise pulse CSV");
    grape_cmd->add_option("--init-nu", o.init_nu,
                          "oscillation parameter of the built-in initial profile");
    grape_cmd->add_option("--out", o.out, "optimized pulse CSV; log goes to <stem>_log.csv")
        ->required();

    for (CLI::App* cmd : {synth, profile}) {
        cmd->add_flag("--physical", o.physical, "rescale to physical units before use");
        cmd->add_option("--omega-max-hz", o.omega_max_hz,
                        "peak amplitude in Hz for --physical (default 10000)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) run_synth(o);
        if (profile->parsed()) run_profile(o);
        if (moments->parsed()) run_moments(o);
        if (grape_cmd->parsed()) run_grape(o);
        return 0;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace pulses::cli
