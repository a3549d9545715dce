// Acceptance suite: every release gate in one binary, one pass/fail line per
// criterion, tolerances pinned in code.
//
//   1  comparison table against the published values, under 1 s
//   2  numerically measured slope laws of all four schemes, under 5 s
//   3  wavelength rate 4 pi c / |eps| and the tau-sweep slope, delay resolution
//   4  experiment-scale predictions on a broadband non-Gaussian source
//   5  exact vs first-order deviation scales as g^2
//   6  property batch (unitarity, weak-value identity, bias, round trip,
//      squared width, determinism)
//   7  pinned quadrature-vs-law intensity ratios sqrt(2) and 2

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "wva/bench.hpp"
#include "wva/constants.hpp"
#include "wva/errors.hpp"
#include "wva/estimator.hpp"
#include "wva/scheme.hpp"
#include "wva/spectrum.hpp"

using namespace wva;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++failures;
}

bool within(double value, double want, double rel) {
    return std::abs(value - want) <= rel * std::abs(want);
}

double gauss_pdf(double x, double mu, double sigma) {
    const double u = (x - mu) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * pi));
}

Spectrum broadband_source() {
    SpectralAxis axis = SpectralAxis::uniform(DomainKind::wavelength, 1360.0, 1720.0, 4096);
    std::vector<double> density(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double l = axis.grid()[i];
        density[i] = 0.6 * gauss_pdf(l, 1512.0, 14.0) + 0.4 * gauss_pdf(l, 1582.0, 24.0);
    }
    return {std::move(axis), std::move(density)};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), spec, a, b, c);
    return buf;
}

// --------------------------------------------------------------------------

void criterion_1_comparison_table() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        const auto rows = compare_table(1e-4, 60.0);
        const double want[4] = {1.0, 42.4, 100.0, 6770.3};
        for (int i = 0; i < 4; ++i) {
            ok = ok && within(rows[i].relative_sensitivity, want[i], 5e-3);
            ok = ok && within(rows[i].simulated_relative, want[i], 5e-3);
        }
        const double dt = seconds_since(t0);
        ok = ok && dt < 1.0;
        detail = fmt("table (1, %.1f, %.0f, %.1f) vs (1, 42.4, 100, 6770.3) +-0.5%%, ",
                     rows[1].relative_sensitivity, rows[2].relative_sensitivity,
                     rows[3].relative_sensitivity) +
                 fmt("%.2f s (< 1 s)", dt);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(1, ok, detail);
}

void criterion_2_slope_laws() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        const Spectrum s = make_gaussian({60.0, 1.0});
        const double eps = -1e-3;
        const double sigma2 = 1.0, p02 = 3600.0;
        struct Case {
            SchemeSpec scheme;
            double law;
            const char* name;
        };
        const Case cases[4] = {
            {SchemeSpec::swva(eps), 2.0 * sigma2 / std::abs(eps), "SWVA 2s^2/e"},
            {SchemeSpec::bwva(eps), 2.0 * p02 / std::abs(eps), "BWVA 2p0^2/e"},
            {SchemeSpec::jwva(eps), sigma2 / std::abs(eps), "JWVA s^2/e"},
            {SchemeSpec::dwva(eps), 2.0 * p02 / std::abs(eps), "DWVA 2p0^2/e"},
        };
        std::ostringstream msg;
        msg << "slopes at eps=-0.001:";
        for (const Case& c : cases) {
            const double slope = std::abs(sensitivity(c.scheme, s));
            const bool good = within(slope, c.law, 0.01);
            ok = ok && good;
            msg << " " << c.scheme.label() << "=" << (good ? "ok" : "BAD");
        }
        const double dt = seconds_since(t0);
        ok = ok && dt < 5.0;
        msg << fmt(" (all +-1%%), %.2f s (< 5 s)", dt);
        detail = msg.str();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(2, ok, detail);
}

void criterion_3_wavelength_rate() {
    bool ok = true;
    std::string detail;
    try {
        const double rate = std::abs(mws_rate_nm_per_as(-0.01));
        const double law = 4.0 * pi * speed_of_light_nm_per_as / 0.01;
        ok = ok && within(rate, law, 1e-12) && within(rate, 376.7, 1e-3);

        const Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096, DomainKind::wavelength);
        const TauSweep sweep = sweep_tau(s, -0.01, linspace(-0.02, 0.02, 401));
        double at_zero = 0.0;
        for (const auto& pt : sweep.points)
            if (std::abs(pt.tau_as) < 1e-12) at_zero = std::abs(pt.mwsr);
        ok = ok && within(at_zero, rate, 0.02);

        // 0.01 nm wavelength resolution -> delay sensitivity, against 2.5e-5 as
        const double tau_sens = 0.01 / rate;
        ok = ok && within(tau_sens, 2.5e-5, 0.10);
        detail = fmt("|rate| = %.1f nm/as (computed, vs the rounded 400), sweep slope %.1f "
                     "(+-2%%), ",
                     rate, at_zero) +
                 fmt("0.01 nm => %.3g as delay resolution (vs 2.5e-5 +-10%%)", tau_sens);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(3, ok, detail);
}

void criterion_4_experiment_scale() {
    bool ok = true;
    std::string detail;
    try {
        const Spectrum mix = broadband_source();
        const auto sweeps = predict_experiment(mix, {-0.08}, linspace(-4.0, 4.0, 401));
        double peak = 0.0, min_xi = 1.0;
        for (const auto& pt : sweeps[0].points) {
            peak = std::max(peak, std::abs(pt.mwsr));
            min_xi = std::min(min_xi, pt.xi);
        }
        ok = ok && peak >= 20.0;
        const double level = std::log10(min_xi);
        ok = ok && level > -3.5 && level < -2.0;

        const double xi_d = signal_intensity(SchemeSpec::dwva(-0.08), 0.0, mix);
        const double xi_b = signal_intensity(SchemeSpec::bwva(-0.08), 0.0, mix);
        const double orders = std::log10(xi_d / xi_b);
        ok = ok && orders > 2.5 && orders < 3.5;
        detail = fmt("peak |MWSR| %.1f nm/as (>= 20), min xi 10^%.2f (1e-3 level), ", peak,
                     level) +
                 fmt("intensity ratio 10^%.2f (~3 orders)", orders);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(4, ok, detail);
}

void criterion_5_first_order_convergence() {
    bool ok = true;
    std::string detail;
    try {
        const Spectrum s = make_gaussian({60.0, 1.0});
        const SchemeSpec scheme = SchemeSpec::jwva(-0.05);
        std::vector<double> lg, ld;
        for (double gp0 : {1e-2, 1e-3, 1e-4}) {
            const double g = gp0 / 60.0;
            const PostselectedPair ex = postselected_spectra(scheme, g, s, EvolveMode::exact);
            const PostselectedPair fo =
                postselected_spectra(scheme, g, s, EvolveMode::first_order);
            double dev = 0.0;
            for (std::size_t i = 0; i < ex.p1.size(); ++i) {
                dev = std::max(dev, std::abs(ex.p1.density()[i] - fo.p1.density()[i]));
                dev = std::max(dev, std::abs(ex.p2->density()[i] - fo.p2->density()[i]));
            }
            lg.push_back(std::log10(gp0));
            ld.push_back(std::log10(dev));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            sx += lg[i];
            sy += ld[i];
            sxx += lg[i] * lg[i];
            sxy += lg[i] * ld[i];
        }
        const double n = static_cast<double>(lg.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        ok = std::abs(slope - 2.0) <= 0.1;
        detail = fmt("log-log deviation slope %.3f over g*p0 in {1e-2,1e-3,1e-4} (2 +- 0.1)",
                     slope);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(5, ok, detail);
}

void criterion_6_property_batch() {
    bool ok = true;
    std::string detail;
    try {
        std::ostringstream msg;

        // dual-port unitarity
        double worst = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double eps = -0.45 + 0.9 * (i % 20) / 19.0;
            const double p = 20.0 + 80.0 * (i / 20) / 19.0;
            const PortWeights w = evolve_exact(SchemeSpec::dwva(eps, 60.0), 1e-4 * (i % 7), p);
            worst = std::max(worst, std::abs(w.w1 + w.w2 - 1.0));
        }
        const bool unitary = worst <= 1e-12;
        ok = ok && unitary;
        msg << "unitarity " << (unitary ? "ok" : "BAD");

        // weak-value product identity
        worst = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double eps = -0.3 + 0.6 * (i % 20) / 19.0;
            const double p = 30.0 + 60.0 * (i / 20) / 19.0;
            const auto a1 = weak_value(1, p, eps, 60.0);
            const auto a2 = weak_value(2, p, eps, 60.0);
            worst = std::max(worst, std::abs(a1 * a2 - std::complex<double>(1.0, 0.0)));
        }
        const bool identity = worst <= 1e-12;
        ok = ok && identity;
        msg << ", weak-value product " << (identity ? "ok" : "BAD");

        // symmetric-spectrum bias
        const Spectrum wl = make_gaussian({1540.0, 25.0}, 8.0, 4096, DomainKind::wavelength);
        const Calibration cal_g = calibrate(wl, -0.01);
        const bool bias0 = std::abs(cal_g.bias) < 1e-9;
        ok = ok && bias0;
        msg << ", gaussian bias " << (bias0 ? "ok" : "BAD");

        // non-Gaussian round trip
        const Spectrum mix = broadband_source();
        const Calibration cal = calibrate(mix, -0.01);
        const double tau = 1e-4;
        const double g = coupling_from_tau_as(tau, moments(mix).mean);
        const TauEstimate est =
            estimate_tau(postselected_spectra(SchemeSpec::dwva(-0.01), g, mix), cal);
        const bool loop = within(est.tau, tau, 0.01);
        ok = ok && loop;
        msg << ", non-gaussian round trip " << (loop ? "ok" : "BAD");

        // squared gaussian width
        const Moments sq = moments(square_normalize(wl));
        const bool width = within(std::sqrt(sq.variance), 25.0 / std::sqrt(2.0), 1e-3);
        ok = ok && width;
        msg << ", squared width " << (width ? "ok" : "BAD");

        // determinism of rendered sweeps
        auto render = [&] {
            const TauSweep sweep = sweep_tau(wl, -0.01, linspace(-0.01, 0.01, 21));
            std::ostringstream csv;
            write_tau_sweep_csv(csv, sweep, {"config: acceptance"});
            return csv.str();
        };
        const bool deterministic = render() == render();
        ok = ok && deterministic;
        msg << ", determinism " << (deterministic ? "ok" : "BAD");

        detail = msg.str();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(6, ok, detail);
}

void criterion_7_documented_discrepancies() {
    bool ok = true;
    std::string detail;
    try {
        const Spectrum s = make_gaussian({60.0, 1.0});
        const double eps = 0.01;
        const double xi_d = signal_intensity(SchemeSpec::dwva(eps), 0.0, s);
        const double law_d = 2.0 / std::sqrt(pi) * (1.0 / 60.0) * eps;
        const double ratio_d = xi_d / law_d;
        ok = ok && within(ratio_d, std::sqrt(2.0), 0.01);

        const double xi_b = signal_intensity(SchemeSpec::bwva(eps), 0.0, s);
        const double law_b = eps * eps / (2.0 * 3600.0);
        const double ratio_b = xi_b / law_b;
        ok = ok && within(ratio_b, 2.0, 0.01);
        detail = fmt("quadrature/law ratios: dual %.4f (sqrt2 +-1%%), biased-single %.4f "
                     "(2 +-1%%)",
                     ratio_d, ratio_b);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(7, ok, detail);
}

}  // namespace

int main() {
    criterion_1_comparison_table();
    criterion_2_slope_laws();
    criterion_3_wavelength_rate();
    criterion_4_experiment_scale();
    criterion_5_first_order_convergence();
    criterion_6_property_batch();
    criterion_7_documented_discrepancies();
    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures;
}
