#pragma once

#include <complex>
#include <optional>
#include <string>

#include "wva/spectrum.hpp"

namespace wva {

enum class InitialKind { product, entangled };  // PI / EI preparation
enum class DetectionKind { single, dual };      // SD / DD read-out

enum class EvolveMode { exact, first_order };

// One of the four scheme combinations:
//   SWVA (PI,SD)  BWVA (EI,SD)  JWVA (PI,DD)  DWVA (EI,DD)
// epsilon is the preparation phase offset in radians. p0_ref is the entangled
// modulation reference; when unset it defaults to the measured mean of the
// spectrum the scheme is applied to.
struct SchemeSpec {
    InitialKind initial = InitialKind::product;
    DetectionKind detection = DetectionKind::single;
    double epsilon = 0.0;
    std::optional<double> p0_ref;

    static SchemeSpec swva(double epsilon, std::optional<double> p0_ref = std::nullopt);
    static SchemeSpec bwva(double epsilon, std::optional<double> p0_ref = std::nullopt);
    static SchemeSpec jwva(double epsilon, std::optional<double> p0_ref = std::nullopt);
    static SchemeSpec dwva(double epsilon, std::optional<double> p0_ref = std::nullopt);
    static SchemeSpec make(InitialKind initial, DetectionKind detection, double epsilon,
                           std::optional<double> p0_ref = std::nullopt);
    static SchemeSpec from_label(const std::string& label, double epsilon,
                                 std::optional<double> p0_ref = std::nullopt);

    const char* label() const;

    // Copy with p0_ref filled in from the spectrum mean when absent.
    SchemeSpec resolved(const Spectrum& s) const;
};

// Two complex amplitudes on the +1 / -1 eigenbasis of the system observable.
struct SystemState {
    std::complex<double> plus;
    std::complex<double> minus;

    double norm() const;
    std::complex<double> inner(const SystemState& other) const;  // <this|other>
};

// Preparation amplitudes (exp(-iC), exp(+iC))/sqrt(2); for the product kind C
// is the constant epsilon, for the entangled kind C = (1 - p/p0_ref) * epsilon.
SystemState initial_state(InitialKind kind, double epsilon, double p, double p0_ref);

double modulation_phase(InitialKind kind, double epsilon, double p, double p0_ref);

struct FinalStates {
    SystemState port1;
    std::optional<SystemState> port2;  // absent for single detection
};

// Dual detection projects onto the orthonormal circular pair; port 1 carries
// amplitudes (1, -i)/sqrt(2) and port 2 (1, +i)/sqrt(2), the assignment under
// which the exact port-1 weight is [1 - sin(2(C - g p))]/2. Single detection
// projects onto (1, -1)/sqrt(2).
FinalStates final_states(DetectionKind kind);

// Weak value of the system observable between the preparation at pointer
// value p and detection port k (1 or 2). Purely imaginary:
//   A_w1 = +i (1 + sin 2C)/cos 2C,  A_w2 = -i (1 - sin 2C)/cos 2C.
// Throws when |2C| is within 1e-6 rad of the cos(2C) zero at pi/2.
std::complex<double> weak_value(int k, double p, double epsilon, double p0_ref);

// Spectral shaping factor cos^2(gp) + sin^2(gp)|A_wk|^2 + sin(2gp) Im A_wk.
// Multiplied by the port's detection probability at g = 0 it reproduces the
// exact post-selection weight.
double zeta(int k, double g, double p, double epsilon, double p0_ref);

struct PortWeights {
    double w1 = 0.0;
    double w2 = 0.0;   // unused for single detection
    bool dual = false;
};

// Exact post-selection weights at pointer value p: evolves the prepared state
// through exp(+i g A p) by 2x2 complex arithmetic and projects onto the
// detection port(s). Valid for any magnitude of g and epsilon.
PortWeights evolve_exact(const SchemeSpec& scheme, double g, double p);

// First-order weights: the dual-detection ports use the weak-value product
// form [1 -+ sin 2C]/2 * {1 + 2 g p Im A_wk}; single detection uses the
// first-order expansion sin^2(C) - g p sin(2C).
PortWeights evolve_first_order(const SchemeSpec& scheme, double g, double p);

// Output spectra of one scheme evaluation over the full grid. p1/p2 are
// unnormalized: they carry the post-selected mass of each port. For exact
// dual detection p1 + p2 reproduces the input density pointwise.
struct PostselectedPair {
    Spectrum p1;
    std::optional<Spectrum> p2;
    EvolveMode mode = EvolveMode::exact;
};

// Applies the per-sample weights to a normalized spectrum. First-order mode
// requires |g| * max|p| <= 0.1 and |epsilon| <= 0.3.
PostselectedPair postselected_spectra(const SchemeSpec& scheme, double g, const Spectrum& s,
                                      EvolveMode mode = EvolveMode::exact);

}  // namespace wva
