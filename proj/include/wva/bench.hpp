#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wva/estimator.hpp"

namespace wva {

// One row of the constrained-sensitivity comparison: at a fixed detected
// intensity budget, the epsilon each scheme needs and the sensitivity it then
// reaches, normalized to SWVA.
struct ComparisonRow {
    const char* label = "";
    double epsilon_at_budget = 0.0;
    double sensitivity = 0.0;            // in units of sigma^2 per coupling unit
    double relative_sensitivity = 0.0;   // closed ratio against SWVA
    double simulated_relative = 0.0;     // same quantity via the unreduced route
};

// Solves each scheme's leading-order intensity law for epsilon at the budget,
// evaluates its sensitivity law there, and normalizes by SWVA. The simulated
// column evaluates the absolute laws and divides; the relative column uses the
// reduced ratio expressions. Throws a feasibility error naming the scheme
// whose required epsilon leaves its validity range.
std::array<ComparisonRow, 4> compare_table(double xi_budget, double ratio_p0_sigma);

// Closed-form intensity and sensitivity laws used by the table.
double xi_law(const SchemeSpec& scheme, double sigma, double p0);
double slope_law(const SchemeSpec& scheme, double sigma, double p0);

struct EpsilonSweepEntry {
    double epsilon = 0.0;
    double sensitivity = 0.0;
    double normalized_sensitivity = 0.0;  // filled by normalize_to_swva
    double xi = 0.0;
    std::string error;  // nonempty when this point failed
};

struct EpsilonSweep {
    std::vector<SchemeSpec> schemes;
    std::vector<double> grid;
    // entries[scheme index][grid index]
    std::vector<std::vector<EpsilonSweepEntry>> entries;
    std::uint64_t grid_hash = 0;
    double swva_reference = 0.0;  // |SWVA sensitivity| at the reference epsilon
};

// Sensitivity and signal intensity per scheme per epsilon. Per-point failures
// are recorded in the entry and the sweep continues.
EpsilonSweep sweep_epsilon(const std::vector<SchemeSpec>& schemes,
                           const std::vector<double>& epsilon_grid, const Spectrum& s);

// Post-processing normalization flag: divides sensitivities by the magnitude
// of the SWVA sensitivity at reference_epsilon on the same spectrum.
void normalize_to_swva(EpsilonSweep& sweep, const Spectrum& s,
                       double reference_epsilon = -1e-3);

struct TauSweepPoint {
    double tau_as = 0.0;
    double coupling = 0.0;
    double mws = 0.0;   // mean wavelength shift, nm
    double mwsr = 0.0;  // finite-difference rate along the grid, nm/as
    double xi = 0.0;
};

struct TauSweep {
    double epsilon = 0.0;
    std::vector<TauSweepPoint> points;
    std::uint64_t grid_hash = 0;
    double slope_at_zero_nm_per_as = 0.0;  // estimator sensitivity at tau = 0
    EvolveMode mode = EvolveMode::exact;
};

// Mean wavelength shift, its rate, and signal intensity of dual weak value
// amplification over a delay grid (attoseconds) on a wavelength spectrum.
// Rates use centered differences on interior points, one-sided at the ends.
TauSweep sweep_tau(const Spectrum& s, double epsilon, const std::vector<double>& tau_grid_as,
                   EvolveMode mode = EvolveMode::exact);

// One tau sweep per epsilon over a symmetric grid sized for experiment-scale
// phases; defaults reproduce the prediction curves at eps = -0.08 and -0.22.
std::vector<TauSweep> predict_experiment(const Spectrum& s, const std::vector<double>& epsilons,
                                         std::vector<double> tau_grid_as = {});

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::uint64_t grid_hash(const std::vector<double>& grid);

// CSV/JSON emission. Every file starts with '#' header lines naming the tool
// version and the resolved configuration; rows carry the inputs needed to
// recompute them.
void write_comparison_csv(std::ostream& out, const std::array<ComparisonRow, 4>& rows,
                          double xi_budget, double ratio,
                          const std::vector<std::string>& header_lines = {});
void write_epsilon_sweep_csv(std::ostream& out, const EpsilonSweep& sweep,
                             const std::vector<std::string>& header_lines = {});
void write_tau_sweep_csv(std::ostream& out, const TauSweep& sweep,
                         const std::vector<std::string>& header_lines = {});
std::string tau_sweep_json(const TauSweep& sweep, const std::vector<std::string>& config_lines);

// File-name stem embedding scheme, epsilon and grid hash.
std::string sweep_file_stem(const std::string& kind, const std::string& scheme_label,
                            double epsilon, std::uint64_t hash);

}  // namespace wva
