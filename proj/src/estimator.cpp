#include "wva/estimator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "wva/constants.hpp"
#include "wva/errors.hpp"

namespace wva {

namespace {

constexpr double shift_target_fraction = 0.01;  // of the spectral width
constexpr int max_bracket_steps = 200;
constexpr int max_bisect_steps = 80;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DifferenceSignal difference_signal(const PostselectedPair& pair) {
    if (!pair.p2)
        throw Error::parameter("difference signal needs a dual-detection pair, got single");
    if (!pair.p1.axis().same_grid(pair.p2->axis()))
        throw Error::parameter("difference signal: ports live on different grids");
    std::vector<double> values(pair.p1.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = pair.p1.density()[i] - pair.p2->density()[i];
    return {pair.p1.axis(), std::move(values)};
}

Spectrum squared_distribution(const DifferenceSignal& d) {
    std::vector<double> sq(d.values.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq[i] = d.values[i] * d.values[i];
        peak = std::max(peak, sq[i]);
    }
    if (!(peak > 0.0))
        throw Error::degenerate_signal("difference signal is identically zero");
    return {d.axis, std::move(sq)};
}

double mean_shift(const SchemeSpec& scheme, double g, const Spectrum& s, EvolveMode mode) {
    const Spectrum input = s.normalize();
    const double p0 = moments(input).mean;
    const SchemeSpec resolved = scheme.resolved(input);
    const PostselectedPair pair = postselected_spectra(resolved, g, input, mode);

    if (resolved.detection == DetectionKind::single) {
        const double mass = pair.p1.integral();
        if (!(mass > 0.0))
            throw Error::degenerate_signal("post-selected mass vanishes");
        return moments(pair.p1).mean - p0;
    }

    const DifferenceSignal diff = difference_signal(pair);
    if (resolved.initial == InitialKind::product) {
        // joint estimator: mean of p under the signed difference
        const auto& x = diff.axis.grid();
        const double norm = trapezoid(x, diff.values);
        if (norm == 0.0)
            throw Error::degenerate_signal("signed difference integrates to zero");
        std::vector<double> weighted(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) weighted[i] = x[i] * diff.values[i];
        return trapezoid(x, weighted) / norm - p0;
    }

    return moments(squared_distribution(diff)).mean - p0;
}

double signal_intensity(const SchemeSpec& scheme, double g, const Spectrum& s, EvolveMode mode) {
    const Spectrum input = s.normalize();
    const SchemeSpec resolved = scheme.resolved(input);
    const PostselectedPair pair = postselected_spectra(resolved, g, input, mode);
    if (resolved.detection == DetectionKind::single) return pair.p1.integral();
    const DifferenceSignal diff = difference_signal(pair);
    std::vector<double> mag(diff.values.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(diff.values[i]);
    return trapezoid(diff.axis.grid(), mag);
}

double sensitivity(const SchemeSpec& scheme, const Spectrum& s, EvolveMode mode) {
    const Spectrum input = s.normalize();
    const Moments m = moments(input);
    const double sigma = std::sqrt(m.variance);
    if (!(sigma > 0.0)) throw Error::numerical("sensitivity needs a spectrum with nonzero width");
    const double target = shift_target_fraction * sigma;

    auto shift = [&](double g) { return mean_shift(scheme, g, input, mode); };
    // Odd component of the shift: insensitive to the zero-coupling bias of
    // skewed spectra, and exactly what the central difference divides out.
    auto odd_shift = [&](double g) { return 0.5 * (shift(g) - shift(-g)); };
    auto slope_at = [&](double g) { return odd_shift(g) / g; };

    double g = std::abs(scheme.epsilon) * sigma / (100.0 * m.mean * m.mean);
    if (!(g > 0.0)) g = sigma * 1e-12 / (m.mean * m.mean);

    // Step selection: bring the odd shift at g to about the target by doubling
    // or halving, bisecting in log-space when a doubling straddles the band.
    double lo = 0.0, hi = 0.0;
    double d = std::abs(odd_shift(g));
    int steps = 0;
    while ((d < 0.5 * target || d > 2.0 * target) && steps++ < max_bracket_steps) {
        if (d < 0.5 * target) lo = g;
        else hi = g;
        if (lo > 0.0 && hi > 0.0) break;
        g = d < 0.5 * target ? g * 2.0 : g * 0.5;
        d = std::abs(odd_shift(g));
    }
    if (steps >= max_bracket_steps)
        throw Error::numerical("sensitivity step selection failed: shift never reaches target");
    for (int i = 0; i < max_bisect_steps && (d < 0.5 * target || d > 2.0 * target); ++i) {
        g = std::sqrt(lo * hi);
        d = std::abs(odd_shift(g));
        (d < target ? lo : hi) = g;
    }
    if (d < 0.25 * target || d > 4.0 * target)
        throw Error::numerical("sensitivity step selection failed to converge");

    // Halve until successive central differences agree, then extrapolate the
    // remaining quadratic step dependence away.
    double s1 = slope_at(g);
    for (int i = 0; i < 40; ++i) {
        const double s2 = slope_at(0.5 * g);
        if (!std::isfinite(s1) || !std::isfinite(s2))
            throw Error::numerical("sensitivity finite difference produced non-finite value");
        if (std::abs(s2 - s1) <= 1e-3 * std::abs(s2)) return (4.0 * s2 - s1) / 3.0;
        s1 = s2;
        g *= 0.5;
    }
    throw Error::numerical("sensitivity step is outside the linear range at minimal step");
}

double coupling_from_tau_as(double tau_as, double lambda_ref_nm) {
    if (!(lambda_ref_nm > 0.0)) throw Error::parameter("lambda reference must be > 0");
    return -2.0 * pi * speed_of_light_nm_per_as * tau_as / (lambda_ref_nm * lambda_ref_nm);
}

double tau_as_from_coupling(double g_per_nm, double lambda_ref_nm) {
    if (!(lambda_ref_nm > 0.0)) throw Error::parameter("lambda reference must be > 0");
    return -g_per_nm * lambda_ref_nm * lambda_ref_nm / (2.0 * pi * speed_of_light_nm_per_as);
}

double mws_rate_nm_per_as(double epsilon) {
    if (epsilon == 0.0) throw Error::parameter("mean wavelength shift rate undefined at epsilon = 0");
    return 4.0 * pi * speed_of_light_nm_per_as / epsilon;
}

double wavelength_sensitivity_nm_per_as(const SchemeSpec& scheme, const Spectrum& s,
                                        EvolveMode mode) {
    if (s.axis().kind() != DomainKind::wavelength)
        throw Error::parameter("wavelength sensitivity needs a wavelength-axis spectrum");
    const double lambda_ref = moments(s).mean;
    const double per_coupling = sensitivity(scheme, s, mode);
    // d(shift)/d tau = d(shift)/dg * dg/d tau
    return per_coupling * coupling_from_tau_as(1.0, lambda_ref);
}

Calibration calibrate(const Spectrum& s, double epsilon) {
    const Spectrum input = s.normalize();
    const SchemeSpec scheme = SchemeSpec::dwva(epsilon).resolved(input);
    Calibration cal;
    cal.domain = input.axis().kind();
    cal.epsilon = epsilon;
    try {
        cal.bias = mean_shift(scheme, 0.0, input);
    } catch (const Error& e) {
        if (e.kind() == Error::Kind::degenerate_signal)
            throw Error::degenerate_signal(
                "calibration failed: difference signal vanishes at g = 0 (epsilon = 0?)");
        throw;
    }
    cal.slope_at_zero = cal.domain == DomainKind::wavelength
                            ? wavelength_sensitivity_nm_per_as(scheme, input)
                            : sensitivity(scheme, input);
    if (cal.slope_at_zero == 0.0) throw Error::numerical("calibration slope is zero");
    cal.spectrum_fingerprint = fingerprint(input);
    return cal;
}

void write_calibration(std::ostream& out, const Calibration& cal) {
    out << "# wvasim calibration v1\n";
    out << "domain = " << domain_name(cal.domain) << "\n";
    out << "epsilon = " << fmt17(cal.epsilon) << "\n";
    out << "bias = " << fmt17(cal.bias) << "\n";
    out << "slope_at_zero = " << fmt17(cal.slope_at_zero) << "\n";
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(cal.spectrum_fingerprint));
    out << "fingerprint = " << buf << "\n";
}

void write_calibration_file(const std::string& path, const Calibration& cal) {
    std::ofstream out(path);
    if (!out) throw Error::format("cannot write calibration file '" + path + "'");
    write_calibration(out, cal);
}

Calibration read_calibration(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error::format("calibration line missing '=': " + line);
        auto trim = [](std::string t) {
            const auto a = t.find_first_not_of(" \t\r");
            const auto b = t.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    for (const char* key : {"domain", "epsilon", "bias", "slope_at_zero", "fingerprint"})
        if (!kv.count(key)) throw Error::format(std::string("calibration missing key '") + key + "'");

    Calibration cal;
    cal.domain = domain_from_name(kv["domain"]);
    cal.epsilon = std::strtod(kv["epsilon"].c_str(), nullptr);
    cal.bias = std::strtod(kv["bias"].c_str(), nullptr);
    cal.slope_at_zero = std::strtod(kv["slope_at_zero"].c_str(), nullptr);
    cal.spectrum_fingerprint = std::strtoull(kv["fingerprint"].c_str(), nullptr, 16);
    if (cal.slope_at_zero == 0.0) throw Error::format("calibration has zero slope");
    return cal;
}

Calibration read_calibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::format("cannot open calibration file '" + path + "'");
    return read_calibration(in);
}

TauEstimate estimate_tau(const PostselectedPair& measured, const Calibration& cal) {
    if (!measured.p2)
        throw Error::parameter("tau estimation needs both detection ports");
    if (measured.p1.axis().kind() != cal.domain)
        throw Error::parameter("measured pair and calibration disagree on the axis domain");

    // The reconstructed input spectrum carries the reference mean.
    std::vector<double> total(measured.p1.size());
    for (std::size_t i = 0; i < total.size(); ++i)
        total[i] = measured.p1.density()[i] + measured.p2->density()[i];
    const Spectrum reference(measured.p1.axis(), std::move(total));

    TauEstimate est;
    est.fingerprint_mismatch = fingerprint(reference) != cal.spectrum_fingerprint;

    const DifferenceSignal diff = difference_signal(measured);
    est.delta_p = moments(squared_distribution(diff)).mean - moments(reference).mean;
    if (cal.slope_at_zero == 0.0) throw Error::degenerate_signal("calibration slope is zero");
    est.tau = (est.delta_p - cal.bias) / cal.slope_at_zero;
    return est;
}

EstimationReport estimate_report(const SchemeSpec& scheme, double coupling, const Spectrum& s,
                                 EvolveMode mode) {
    const Spectrum input = s.normalize();
    const SchemeSpec resolved = scheme.resolved(input);
    EstimationReport rep;
    rep.scheme = resolved;
    rep.mode = mode;
    rep.coupling = coupling;
    rep.delta_p = mean_shift(resolved, coupling, input, mode);
    rep.xi = signal_intensity(resolved, coupling, input, mode);
    rep.sensitivity = sensitivity(resolved, input, mode);
    if (input.axis().kind() == DomainKind::wavelength) {
        const double lambda_ref = moments(input).mean;
        rep.tau_as = tau_as_from_coupling(coupling, lambda_ref);
        rep.slope_nm_per_as = rep.sensitivity * coupling_from_tau_as(1.0, lambda_ref);
    }
    return rep;
}

}  // namespace wva
