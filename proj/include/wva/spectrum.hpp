#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wva {

enum class DomainKind {
    generic_p,          // dimensionless pointer variable
    angular_frequency,  // rad/s
    wavelength,         // nm
};

const char* domain_name(DomainKind kind);
DomainKind domain_from_name(const std::string& name);

// Sample grid of a spectrum. The grid is strictly increasing, finite, and has
// at least 8 points; the domain kind is fixed at construction.
class SpectralAxis {
public:
    SpectralAxis(DomainKind kind, std::vector<double> grid);

    DomainKind kind() const { return kind_; }
    const std::vector<double>& grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }
    double front() const { return grid_.front(); }
    double back() const { return grid_.back(); }

    bool same_grid(const SpectralAxis& other) const;

    static SpectralAxis uniform(DomainKind kind, double lo, double hi, std::size_t n);

private:
    DomainKind kind_;
    std::vector<double> grid_;
};

// Nonnegative sampled density over a SpectralAxis. When the normalized flag is
// set, the trapezoid integral over the grid is 1 (to rounding). Values are
// immutable after construction; all operations below are pure functions.
class Spectrum {
public:
    // Validates nonnegativity/finiteness and rescales to unit integral.
    Spectrum(SpectralAxis axis, std::vector<double> density);

    // Keeps raw values (e.g. post-selected outputs that carry their mass).
    static Spectrum unnormalized(SpectralAxis axis, std::vector<double> density);

    const SpectralAxis& axis() const { return axis_; }
    const std::vector<double>& density() const { return density_; }
    bool normalized() const { return normalized_; }
    std::size_t size() const { return density_.size(); }

    double integral() const;
    Spectrum normalize() const;

private:
    Spectrum(SpectralAxis axis, std::vector<double> density, bool normalized);

    SpectralAxis axis_;
    std::vector<double> density_;
    bool normalized_;
};

struct GaussianModel {
    double center = 0.0;  // axis units, > 0
    double width = 0.0;   // standard deviation, > 0, and center/width > 1
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    bool degenerate = false;  // fewer than two samples carry mass
};

struct LoadResult {
    Spectrum spectrum;
    std::size_t clipped = 0;  // samples raised from small negatives to zero
};

// Composite trapezoid on an arbitrary strictly increasing grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Normalized Gaussian sampled on a uniform grid center +- half_width_sigmas * width.
Spectrum make_gaussian(const GaussianModel& model, double half_width_sigmas = 8.0,
                       std::size_t n_points = 4096, DomainKind kind = DomainKind::generic_p);

// Ingests (position, intensity) rows: sorts by position, clips small negative
// intensities to zero, normalizes. Rejects tables with fewer than 8 rows,
// duplicate positions, non-finite entries, or all-zero intensities.
LoadResult load_spectrum(std::vector<std::pair<double, double>> table, DomainKind kind);

Moments moments(const Spectrum& s);

// Pointwise square, renormalized. For a Gaussian of width sigma the result is
// a Gaussian of width sigma/sqrt(2).
Spectrum square_normalize(const Spectrum& s);

// Maps between wavelength (nm) and angular frequency (rad/s) via
// lambda = 2*pi*c / omega. With include_jacobian the density is multiplied by
// the derivative magnitude of the source variable with respect to the target
// variable; the result is renormalized either way.
Spectrum convert_domain(const Spectrum& s, DomainKind target, bool include_jacobian = true);

// Linear interpolation onto the target axis; zero outside the source support;
// renormalized.
Spectrum resample(const Spectrum& s, const SpectralAxis& target);

// Plain-text spectrum files: one "position intensity" pair per line, '#'
// comment lines ignored, whitespace or comma separators, extra columns ignored.
LoadResult read_spectrum_file(const std::string& path, DomainKind kind);

// Raw reader: no normalization, no clipping of the stored values beyond
// validation; used for measured port spectra whose relative mass matters.
Spectrum read_spectrum_file_raw(const std::string& path, DomainKind kind);

void write_spectrum(std::ostream& out, const Spectrum& s,
                    const std::vector<std::string>& header_lines = {});
void write_spectrum_file(const std::string& path, const Spectrum& s,
                         const std::vector<std::string>& header_lines = {});

// Order-insensitive content hash of grid and density (coarsely quantized so
// that reconstruction-level rounding does not change it).
std::uint64_t fingerprint(const Spectrum& s);

}  // namespace wva
