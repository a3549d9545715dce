// Command-line front end: simulation, scheme comparison, calibration, delay
// estimation and sweep generation with reproducible file output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wva/bench.hpp"
#include "wva/constants.hpp"
#include "wva/errors.hpp"
#include "wva/estimator.hpp"
#include "wva/scheme.hpp"
#include "wva/spectrum.hpp"
#include "wva/version.hpp"

namespace fs = std::filesystem;
using namespace wva;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// spectrum source shared by the subcommands

struct SourceOptions {
    std::string input_file;
    double mean = 0.0;
    double sigma = 0.0;
    bool synthetic_sld = false;
    std::string unit;
    std::size_t points = 4096;
    double half_width = 8.0;
    std::string convert_to;  // optional nm <-> rad/s preprocessing
    bool jacobian = true;
};

void add_source_options(CLI::App* cmd, SourceOptions& src, bool required = true) {
    auto* file = cmd->add_option("--input", src.input_file,
                                 "Spectrum file: 'position intensity' per line, '#' comments");
    auto* mean = cmd->add_option("--mean", src.mean, "Gaussian source: center, in --unit units");
    auto* sigma = cmd->add_option("--sigma", src.sigma, "Gaussian source: width, in --unit units");
    auto* sld = cmd->add_flag("--synthetic-sld", src.synthetic_sld,
                              "Bundled broadband two-component source (wavelength axis)");
    cmd->add_option("--unit", src.unit, "Axis unit of the source: nm, rad/s or p");
    cmd->add_option("--points", src.points, "Gaussian source: grid points (default 4096)");
    cmd->add_option("--half-width", src.half_width,
                    "Gaussian source: half width in sigmas (default 8)");
    cmd->add_option("--convert-to", src.convert_to,
                    "Convert the source axis before use: nm or rad/s")
        ->check(CLI::IsMember({"nm", "rad/s"}));
    cmd->add_flag("--jacobian,!--no-jacobian", src.jacobian,
                  "Apply the density jacobian when converting (default on)");
    file->excludes(mean);
    file->excludes(sld);
    mean->excludes(sld);
    mean->needs(sigma);
    (void)required;  // absence is reported by resolve_source with context
}

Spectrum synthetic_sld_spectrum() {
    SpectralAxis axis = SpectralAxis::uniform(DomainKind::wavelength, 1360.0, 1720.0, 4096);
    std::vector<double> density(axis.size());
    auto gauss = [](double x, double mu, double s) {
        const double u = (x - mu) / s;
        return std::exp(-0.5 * u * u) / (s * std::sqrt(2.0 * pi));
    };
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double l = axis.grid()[i];
        density[i] = 0.6 * gauss(l, 1512.0, 14.0) + 0.4 * gauss(l, 1582.0, 24.0);
    }
    return {std::move(axis), std::move(density)};
}

Spectrum resolve_source(const SourceOptions& src, std::string& description) {
    Spectrum out = [&]() -> Spectrum {
        if (src.synthetic_sld) {
            description = "source=synthetic-sld";
            return synthetic_sld_spectrum();
        }
        if (!src.input_file.empty()) {
            if (src.unit.empty())
                throw Error::parameter("file sources need an explicit --unit (nm, rad/s or p)");
            LoadResult loaded = read_spectrum_file(src.input_file, domain_from_name(src.unit));
            if (loaded.clipped > 0)
                std::cerr << "warning: clipped " << loaded.clipped
                          << " negative intensity sample(s) to zero\n";
            description = "source=file:" + src.input_file + " unit=" + src.unit;
            return loaded.spectrum;
        }
        if (src.sigma > 0.0 || src.mean != 0.0) {
            if (src.unit.empty())
                throw Error::parameter("gaussian sources need an explicit --unit (nm, rad/s or p)");
            description = "source=gaussian mean=" + fmt17(src.mean) + " sigma=" + fmt17(src.sigma) +
                          " unit=" + src.unit + " points=" + std::to_string(src.points) +
                          " half-width=" + fmt17(src.half_width);
            return make_gaussian({src.mean, src.sigma}, src.half_width, src.points,
                                 domain_from_name(src.unit));
        }
        throw Error::parameter("no spectrum source: give --input, --mean/--sigma or --synthetic-sld");
    }();
    if (!src.convert_to.empty()) {
        out = convert_domain(out, domain_from_name(src.convert_to), src.jacobian);
        description += " convert-to=" + src.convert_to +
                       (src.jacobian ? " jacobian=on" : " jacobian=off");
    }
    return out;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error::parameter("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void write_text_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw Error::format("cannot write '" + path.string() + "'");
    out << body;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
    SourceOptions source;
    std::string scheme = "dwva";
    double epsilon = 0.0;
    double tau_as = 0.0;
    double coupling = 0.0;
    bool coupling_given = false;
    bool tau_given = false;
    double p0_ref = 0.0;
    std::string mode = "exact";
    std::string out_dir = ".";
};

int run_simulate(const SimulateOptions& opt) {
    std::string source_desc;
    const Spectrum s = resolve_source(opt.source, source_desc);
    const bool is_wavelength = s.axis().kind() == DomainKind::wavelength;

    if (opt.tau_given && !is_wavelength)
        throw Error::parameter("--tau-as applies to wavelength-axis sources; use --coupling");
    if (opt.tau_given && opt.coupling_given)
        throw Error::parameter("give either --tau-as or --coupling, not both");

    double g = opt.coupling;
    if (opt.tau_given) g = coupling_from_tau_as(opt.tau_as, moments(s).mean);

    const EvolveMode mode = opt.mode == "first-order" ? EvolveMode::first_order : EvolveMode::exact;
    SchemeSpec scheme = SchemeSpec::from_label(
        opt.scheme, opt.epsilon,
        opt.p0_ref > 0.0 ? std::optional<double>(opt.p0_ref) : std::nullopt);
    scheme = scheme.resolved(s);

    const std::string config = "config: simulate scheme=" + std::string(scheme.label()) +
                               " epsilon-rad=" + fmt17(opt.epsilon) + " coupling=" + fmt17(g) +
                               " mode=" + opt.mode + " " + source_desc;
    const std::vector<std::string> header = {std::string(tool_name) + " " + tool_version, config};

    const fs::path dir = prepare_out_dir(opt.out_dir);
    const PostselectedPair pair = postselected_spectra(scheme, g, s, mode);
    const EstimationReport rep = estimate_report(scheme, g, s, mode);

    write_spectrum_file((dir / "p1.txt").string(), pair.p1, header);
    if (pair.p2) {
        write_spectrum_file((dir / "p2.txt").string(), *pair.p2, header);
        const DifferenceSignal diff = difference_signal(pair);
        std::ostringstream dp;
        for (const auto& h : header) dp << "# " << h << "\n";
        dp << "# columns: position delta_p\n";
        for (std::size_t i = 0; i < diff.values.size(); ++i)
            dp << fmt17(diff.axis.grid()[i]) << " " << fmt17(diff.values[i]) << "\n";
        write_text_file(dir / "delta_p.txt", dp.str());
        write_spectrum_file((dir / "squared_distribution.txt").string(),
                            squared_distribution(diff), header);
    }

    std::ostringstream report;
    for (const auto& h : header) report << "# " << h << "\n";
    report << "scheme = " << scheme.label() << "\n";
    report << "mode = " << opt.mode << "\n";
    report << "epsilon_rad = " << fmt17(opt.epsilon) << "\n";
    report << "coupling = " << fmt17(rep.coupling) << "\n";
    report << "delta_p = " << fmt17(rep.delta_p) << "\n";
    report << "xi = " << fmt17(rep.xi) << "\n";
    report << "sensitivity = " << fmt17(rep.sensitivity) << "\n";
    if (rep.tau_as) report << "tau_as = " << fmt17(*rep.tau_as) << "\n";
    if (rep.slope_nm_per_as)
        report << "slope_nm_per_as = " << fmt17(*rep.slope_nm_per_as) << "\n";
    write_text_file(dir / "report.txt", report.str());

    std::cout << report.str();
    return 0;
}

// ---------------------------------------------------------------------------
// compare

int run_compare(double xi_budget, double ratio, const std::string& out_dir) {
    const auto rows = compare_table(xi_budget, ratio);
    const std::string config = "config: compare xi-budget=" + fmt17(xi_budget) +
                               " ratio=" + fmt17(ratio);
    const fs::path dir = prepare_out_dir(out_dir);
    std::ostringstream csv;
    write_comparison_csv(csv, rows, xi_budget, ratio, {config});
    write_text_file(dir / "comparison.csv", csv.str());
    std::printf("%-6s %14s %22s %20s\n", "scheme", "epsilon[rad]", "relative sensitivity",
                "simulated relative");
    for (const auto& r : rows)
        std::printf("%-6s %14.6g %22.6g %20.6g\n", r.label, r.epsilon_at_budget,
                    r.relative_sensitivity, r.simulated_relative);
    return 0;
}

// ---------------------------------------------------------------------------
// calibrate

int run_calibrate(const SourceOptions& source, double epsilon, const std::string& out_dir) {
    std::string source_desc;
    const Spectrum s = resolve_source(source, source_desc);
    const Calibration cal = calibrate(s, epsilon);
    const fs::path dir = prepare_out_dir(out_dir);
    write_calibration_file((dir / "calibration.txt").string(), cal);
    std::ostringstream echo;
    write_calibration(echo, cal);
    std::cout << echo.str();
    return 0;
}

// ---------------------------------------------------------------------------
// estimate

int run_estimate(const std::string& p1_file, const std::string& p2_file, const std::string& unit,
                 const std::string& cal_file, const std::string& out_dir) {
    const DomainKind kind = domain_from_name(unit);
    const Spectrum p1 = read_spectrum_file_raw(p1_file, kind);
    const Spectrum p2 = read_spectrum_file_raw(p2_file, kind);
    if (!p1.axis().same_grid(p2.axis()))
        throw Error::format("port spectra '" + p1_file + "' and '" + p2_file +
                            "' have mismatched axes");
    const Calibration cal = read_calibration_file(cal_file);
    const PostselectedPair pair{p1, p2, EvolveMode::exact};
    const TauEstimate est = estimate_tau(pair, cal);
    if (est.fingerprint_mismatch)
        std::cerr << "warning: spectrum fingerprint differs from the calibration reference\n";

    const std::string config = "config: estimate p1=" + p1_file + " p2=" + p2_file +
                               " unit=" + unit + " calibration=" + cal_file;
    std::ostringstream report;
    report << "# " << tool_name << " " << tool_version << "\n# " << config << "\n";
    report << "delta_p = " << fmt17(est.delta_p) << "\n";
    report << "bias = " << fmt17(cal.bias) << "\n";
    report << "slope_at_zero = " << fmt17(cal.slope_at_zero) << "\n";
    report << (cal.domain == DomainKind::wavelength ? "tau_as = " : "tau = ") << fmt17(est.tau)
           << "\n";
    report << "fingerprint_match = " << (est.fingerprint_mismatch ? "false" : "true") << "\n";
    const fs::path dir = prepare_out_dir(out_dir);
    write_text_file(dir / "tau_estimate.txt", report.str());
    std::cout << report.str();
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    SourceOptions source;
    std::string preset;
    std::string variable;
    double from = 0.0;
    double to = 0.0;
    std::size_t count = 0;
    std::vector<std::string> schemes;
    double epsilon = -0.01;
    std::vector<double> epsilon_list;
    std::string mode = "exact";
    std::string out_dir = ".";
};

void emit_tau_sweep(const fs::path& dir, const TauSweep& sweep, const std::string& tag,
                    const std::string& config) {
    const std::string stem =
        sweep_file_stem("sweep_tau" + (tag.empty() ? "" : "_" + tag), "DWVA", sweep.epsilon,
                        sweep.grid_hash);
    std::ostringstream csv;
    write_tau_sweep_csv(csv, sweep, {config});
    write_text_file(dir / (stem + ".csv"), csv.str());
    write_text_file(dir / (stem + ".json"), tau_sweep_json(sweep, {config}));
}

int run_sweep(const SweepOptions& opt) {
    const EvolveMode mode = opt.mode == "first-order" ? EvolveMode::first_order : EvolveMode::exact;
    const fs::path dir = prepare_out_dir(opt.out_dir);

    SourceOptions source = opt.source;
    const bool have_source = !source.input_file.empty() || source.sigma > 0.0 ||
                             source.synthetic_sld;

    if (opt.preset == "figure-1") {
        if (!have_source) {
            source.mean = 60.0;
            source.sigma = 1.0;
            source.unit = "p";
        }
        std::string source_desc;
        const Spectrum s = resolve_source(source, source_desc);
        // 25 log-spaced magnitudes, 1e-4 .. 2e-2, negative sign convention
        std::vector<double> grid;
        const double lg_lo = std::log10(1e-4), lg_hi = std::log10(2e-2);
        for (std::size_t i = 0; i < 25; ++i)
            grid.push_back(-std::pow(10.0, lg_lo + (lg_hi - lg_lo) * static_cast<double>(i) / 24.0));
        std::sort(grid.begin(), grid.end());
        std::vector<SchemeSpec> schemes = {SchemeSpec::swva(-1e-3), SchemeSpec::bwva(-1e-3),
                                           SchemeSpec::jwva(-1e-3), SchemeSpec::dwva(-1e-3)};
        EpsilonSweep sweep = sweep_epsilon(schemes, grid, s);
        normalize_to_swva(sweep, s);
        const std::string config = "config: sweep preset=figure-1 " + source_desc;
        std::ostringstream csv;
        write_epsilon_sweep_csv(csv, sweep, {config});
        write_text_file(dir / (sweep_file_stem("sweep_epsilon", "ALL", -1e-3, sweep.grid_hash) +
                               ".csv"),
                        csv.str());
        std::cout << "wrote epsilon sweep (" << grid.size() << " points, 4 schemes)\n";
        return 0;
    }

    if (opt.preset == "figure-2") {
        if (!have_source) {
            source.mean = 1540.0;
            source.sigma = 25.0;
            source.unit = "nm";
        }
        std::string source_desc;
        const Spectrum s = resolve_source(source, source_desc);
        const std::string config = "config: sweep preset=figure-2 epsilon-rad=" +
                                   fmt17(opt.epsilon) + " " + source_desc;
        const TauSweep full = sweep_tau(s, opt.epsilon, linspace(-0.4, 0.4, 401), mode);
        const TauSweep zoom = sweep_tau(s, opt.epsilon, linspace(-0.02, 0.02, 401), mode);
        emit_tau_sweep(dir, full, "full", config);
        emit_tau_sweep(dir, zoom, "zoom", config);
        std::cout << "wrote tau sweeps: full +-0.4 as, zoom +-0.02 as; slope at zero "
                  << fmt17(zoom.slope_at_zero_nm_per_as) << " nm/as\n";
        return 0;
    }

    if (opt.preset == "figure-4") {
        if (!have_source) source.synthetic_sld = true;
        std::string source_desc;
        const Spectrum s = resolve_source(source, source_desc);
        const std::vector<double> eps_list =
            opt.epsilon_list.empty() ? std::vector<double>{-0.08, -0.22} : opt.epsilon_list;
        const std::string config = "config: sweep preset=figure-4 " + source_desc;
        const auto sweeps = predict_experiment(s, eps_list);
        for (const auto& sw : sweeps) emit_tau_sweep(dir, sw, "experiment", config);
        std::cout << "wrote " << sweeps.size() << " experiment tau sweeps\n";
        return 0;
    }

    if (!opt.preset.empty())
        throw Error::parameter("unknown preset '" + opt.preset +
                               "' (expected figure-1, figure-2 or figure-4)");

    // explicit sweeps
    if (opt.variable == "tau") {
        if (!have_source)
            throw Error::parameter("tau sweeps need a spectrum source");
        std::string source_desc;
        const Spectrum s = resolve_source(source, source_desc);
        const std::vector<double> grid = linspace(opt.from, opt.to, opt.count);
        const std::string config = "config: sweep variable=tau from-as=" + fmt17(opt.from) +
                                   " to-as=" + fmt17(opt.to) + " count=" +
                                   std::to_string(opt.count) + " epsilon-rad=" +
                                   fmt17(opt.epsilon) + " " + source_desc;
        emit_tau_sweep(dir, sweep_tau(s, opt.epsilon, grid, mode), "", config);
        std::cout << "wrote tau sweep (" << grid.size() << " points)\n";
        return 0;
    }
    if (opt.variable == "epsilon") {
        if (!have_source)
            throw Error::parameter("epsilon sweeps need a spectrum source");
        std::string source_desc;
        const Spectrum s = resolve_source(source, source_desc);
        const std::vector<double> grid = linspace(opt.from, opt.to, opt.count);
        std::vector<SchemeSpec> schemes;
        for (const auto& name : opt.schemes.empty()
                                    ? std::vector<std::string>{"swva", "bwva", "jwva", "dwva"}
                                    : opt.schemes)
            schemes.push_back(SchemeSpec::from_label(name, -1e-3));
        EpsilonSweep sweep = sweep_epsilon(schemes, grid, s);
        normalize_to_swva(sweep, s);
        const std::string config = "config: sweep variable=epsilon from-rad=" + fmt17(opt.from) +
                                   " to-rad=" + fmt17(opt.to) + " count=" +
                                   std::to_string(opt.count) + " " + source_desc;
        std::ostringstream csv;
        write_epsilon_sweep_csv(csv, sweep, {config});
        write_text_file(dir / (sweep_file_stem("sweep_epsilon", "ALL", grid.front(),
                                               sweep.grid_hash) +
                               ".csv"),
                        csv.str());
        std::cout << "wrote epsilon sweep (" << grid.size() << " points)\n";
        return 0;
    }
    throw Error::parameter("sweep needs --preset or --variable epsilon|tau");
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case Error::Kind::parameter:
        case Error::Kind::format:
            return 2;
        default:
            return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(tool_name) + " " + tool_version +
                 " - weak value amplification laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file (flags override)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run one scheme on a spectrum");
    add_source_options(simulate, sim.source);
    simulate->add_option("--scheme", sim.scheme, "swva | bwva | jwva | dwva")->required();
    simulate->add_option("--epsilon-rad", sim.epsilon, "Preparation phase offset in rad")
        ->required();
    simulate->add_option("--tau-as", sim.tau_as, "Delay in attoseconds (wavelength sources)")
        ;
    simulate->add_option("--coupling", sim.coupling, "Coupling g in inverse axis units");
    simulate->add_option("--p0-ref", sim.p0_ref, "Override the modulation reference");
    simulate->add_option("--mode", sim.mode, "exact | first-order")
        ->check(CLI::IsMember({"exact", "first-order"}));
    simulate->add_option("--out", sim.out_dir, "Output directory");
    simulate->callback([&] {
        sim.tau_given = simulate->count("--tau-as") > 0;
        sim.coupling_given = simulate->count("--coupling") > 0;
    });

    double xi_budget = 1e-4, ratio = 60.0;
    std::string compare_out = ".";
    auto* compare = app.add_subcommand("compare", "Constrained-sensitivity comparison table");
    compare->add_option("--xi-budget", xi_budget, "Detected intensity budget (default 1e-4)");
    compare->add_option("--ratio", ratio, "p0 / sigma ratio (default 60)");
    compare->add_option("--out", compare_out, "Output directory");

    SourceOptions cal_source;
    double cal_epsilon = -0.01;
    std::string cal_out = ".";
    auto* cal_cmd = app.add_subcommand("calibrate", "Record bias and slope of a spectrum");
    add_source_options(cal_cmd, cal_source);
    cal_cmd->add_option("--epsilon-rad", cal_epsilon, "Preparation phase offset in rad")
        ->required();
    cal_cmd->add_option("--out", cal_out, "Output directory");

    std::string est_p1, est_p2, est_unit = "nm", est_cal, est_out = ".";
    auto* estimate = app.add_subcommand("estimate", "Invert a measured pair to a delay");
    estimate->add_option("--p1", est_p1, "Port 1 spectrum file")->required();
    estimate->add_option("--p2", est_p2, "Port 2 spectrum file")->required();
    estimate->add_option("--unit", est_unit, "Axis unit of the port files");
    estimate->add_option("--calibration", est_cal, "Calibration file")->required();
    estimate->add_option("--out", est_out, "Output directory");

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweeps and figure presets");
    add_source_options(sweep, sw.source, false);
    sweep->add_option("--preset", sw.preset, "figure-1 | figure-2 | figure-4");
    sweep->add_option("--variable", sw.variable, "epsilon | tau");
    sweep->add_option("--from-as,--from-rad", sw.from, "Sweep start");
    sweep->add_option("--to-as,--to-rad", sw.to, "Sweep end");
    sweep->add_option("--count", sw.count, "Sweep points");
    sweep->add_option("--schemes", sw.schemes, "Schemes for epsilon sweeps")->delimiter(',');
    sweep->add_option("--epsilon-rad", sw.epsilon, "Phase offset for tau sweeps");
    sweep->add_option("--epsilon-list", sw.epsilon_list, "Phase offsets for figure-4")
        ->delimiter(',');
    sweep->add_option("--mode", sw.mode, "exact | first-order")
        ->check(CLI::IsMember({"exact", "first-order"}));
    sweep->add_option("--out", sw.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (compare->parsed()) return run_compare(xi_budget, ratio, compare_out);
        if (cal_cmd->parsed()) return run_calibrate(cal_source, cal_epsilon, cal_out);
        if (estimate->parsed()) return run_estimate(est_p1, est_p2, est_unit, est_cal, est_out);
        if (sweep->parsed()) return run_sweep(sw);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
