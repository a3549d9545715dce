#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "wva/scheme.hpp"
#include "wva/spectrum.hpp"

namespace wva {

// Signed pointwise difference P1 - P2 of a dual-detection pair.
struct DifferenceSignal {
    SpectralAxis axis;
    std::vector<double> values;
};

DifferenceSignal difference_signal(const PostselectedPair& pair);

// Normalized probability distribution proportional to (P1 - P2)^2.
Spectrum squared_distribution(const DifferenceSignal& d);

// Mean-value shift of the scheme's detected signal relative to the measured
// mean of the input spectrum:
//   SWVA/BWVA  mean of the normalized post-selected spectrum
//   JWVA       mean of p under the signed difference, normalized by its integral
//   DWVA       mean of the squared-difference distribution
double mean_shift(const SchemeSpec& scheme, double g, const Spectrum& s,
                  EvolveMode mode = EvolveMode::exact);

// Fraction of the input mass present in the detected signal: the post-selected
// mass (single detection) or the integral of |P1 - P2| (dual detection).
double signal_intensity(const SchemeSpec& scheme, double g, const Spectrum& s,
                        EvolveMode mode = EvolveMode::exact);

// d(mean shift)/dg at g = 0 by central difference. The step is bisected until
// the shift magnitude is about 0.01 of the spectral width, which keeps all
// four schemes inside their linear range; a cross-check at half step guards
// against leftover curvature.
double sensitivity(const SchemeSpec& scheme, const Spectrum& s,
                   EvolveMode mode = EvolveMode::exact);

// Wavelength-domain coupling convention: a longitudinal delay tau (attoseconds)
// acts on a wavelength-axis spectrum through the equivalent grid coupling
//   g = -2 pi c tau / lambda_ref^2   [1/nm]
// the sign carrying d(lambda)/d(omega) < 0. With it the leading-order mean
// wavelength shift is -(4 pi c / epsilon) tau.
double coupling_from_tau_as(double tau_as, double lambda_ref_nm);
double tau_as_from_coupling(double g_per_nm, double lambda_ref_nm);

// Leading-order mean-wavelength-shift rate 4 pi c / epsilon in nm per
// attosecond (signed).
double mws_rate_nm_per_as(double epsilon);

// d(mean shift)/d tau in nm/as for a wavelength-axis spectrum (applies the
// coupling convention above to sensitivity()).
double wavelength_sensitivity_nm_per_as(const SchemeSpec& scheme, const Spectrum& s,
                                        EvolveMode mode = EvolveMode::exact);

// Zero-coupling reference of a spectrum under dual weak value amplification:
// the bias is the squared-distribution mean shift at g = 0 (zero for symmetric
// spectra) and the slope is the sensitivity at g = 0 (nm/as on wavelength
// axes, axis units per coupling unit otherwise).
struct Calibration {
    DomainKind domain = DomainKind::generic_p;
    double epsilon = 0.0;
    double bias = 0.0;
    double slope_at_zero = 0.0;
    std::uint64_t spectrum_fingerprint = 0;
};

Calibration calibrate(const Spectrum& s, double epsilon);

void write_calibration(std::ostream& out, const Calibration& cal);
void write_calibration_file(const std::string& path, const Calibration& cal);
Calibration read_calibration(std::istream& in);
Calibration read_calibration_file(const std::string& path);

struct TauEstimate {
    double tau = 0.0;        // attoseconds on wavelength axes, coupling units otherwise
    double delta_p = 0.0;    // measured mean shift before bias subtraction
    bool fingerprint_mismatch = false;
};

// Inverts a measured dual-detection pair to the delay estimate
// (delta - bias) / slope. The reference mean is taken from the reconstructed
// input spectrum P1 + P2. A fingerprint mismatch against the calibration is
// reported, not fatal.
TauEstimate estimate_tau(const PostselectedPair& measured, const Calibration& cal);

// One scheme evaluation bundled for reports and sweep rows.
struct EstimationReport {
    SchemeSpec scheme;
    EvolveMode mode = EvolveMode::exact;
    double coupling = 0.0;  // g in inverse axis units
    double delta_p = 0.0;
    double xi = 0.0;
    double sensitivity = 0.0;  // axis units per coupling unit
    std::optional<double> tau_as;              // wavelength axes only
    std::optional<double> slope_nm_per_as;     // wavelength axes only
};

EstimationReport estimate_report(const SchemeSpec& scheme, double coupling, const Spectrum& s,
                                 EvolveMode mode = EvolveMode::exact);

}  // namespace wva
