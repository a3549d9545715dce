#include "wva/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wva/constants.hpp"
#include "wva/errors.hpp"

namespace wva {

namespace {

constexpr std::size_t min_points = 8;

// Intensities above this fraction of the peak magnitude may not be negative;
// anything between -threshold and 0 is treated as detector noise and clipped.
constexpr double negative_clip_fraction = 1e-3;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const char* domain_name(DomainKind kind) {
    switch (kind) {
        case DomainKind::generic_p: return "p";
        case DomainKind::angular_frequency: return "rad/s";
        case DomainKind::wavelength: return "nm";
    }
    return "?";
}

DomainKind domain_from_name(const std::string& name) {
    if (name == "p" || name == "generic" || name == "dimensionless") return DomainKind::generic_p;
    if (name == "rad/s" || name == "rad_s" || name == "omega") return DomainKind::angular_frequency;
    if (name == "nm" || name == "wavelength" || name == "lambda") return DomainKind::wavelength;
    throw Error::parameter("unknown domain unit '" + name + "' (expected nm, rad/s or p)");
}

SpectralAxis::SpectralAxis(DomainKind kind, std::vector<double> grid)
    : kind_(kind), grid_(std::move(grid)) {
    if (grid_.size() < min_points)
        throw Error::parameter("axis needs at least 8 grid points, got " +
                               std::to_string(grid_.size()));
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i])) throw Error::parameter("axis grid contains non-finite value");
        if (i > 0 && grid_[i] <= grid_[i - 1])
            throw Error::parameter("axis grid must be strictly increasing");
    }
}

bool SpectralAxis::same_grid(const SpectralAxis& other) const {
    return kind_ == other.kind_ && grid_ == other.grid_;
}

SpectralAxis SpectralAxis::uniform(DomainKind kind, double lo, double hi, std::size_t n) {
    if (!(hi > lo)) throw Error::parameter("uniform axis needs hi > lo");
    if (n < min_points) throw Error::parameter("uniform axis needs at least 8 points");
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return {kind, std::move(grid)};
}

Spectrum::Spectrum(SpectralAxis axis, std::vector<double> density, bool normalized)
    : axis_(std::move(axis)), density_(std::move(density)), normalized_(normalized) {
    if (density_.size() != axis_.size())
        throw Error::parameter("density length does not match axis length");
    for (double v : density_) {
        if (!std::isfinite(v)) throw Error::parameter("density contains non-finite value");
        if (v < 0.0) throw Error::parameter("density contains negative value");
    }
}

Spectrum::Spectrum(SpectralAxis axis, std::vector<double> density)
    : Spectrum(std::move(axis), std::move(density), false) {
    const double mass = integral();
    if (!(mass > 0.0)) throw Error::parameter("density has zero mass, cannot normalize");
    for (double& v : density_) v /= mass;
    normalized_ = true;
}

Spectrum Spectrum::unnormalized(SpectralAxis axis, std::vector<double> density) {
    return {std::move(axis), std::move(density), false};
}

double Spectrum::integral() const { return trapezoid(axis_.grid(), density_); }

Spectrum Spectrum::normalize() const {
    if (normalized_) return *this;
    return {axis_, density_};
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error::parameter("trapezoid needs matching arrays of length >= 2");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        sum += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return sum;
}

Spectrum make_gaussian(const GaussianModel& model, double half_width_sigmas,
                       std::size_t n_points, DomainKind kind) {
    if (!(model.width > 0.0)) throw Error::parameter("gaussian width must be > 0");
    if (!(model.center > 0.0)) throw Error::parameter("gaussian center must be > 0");
    if (!(model.center / model.width > 1.0))
        throw Error::parameter("gaussian center/width ratio must exceed 1");
    if (!(half_width_sigmas >= 4.0)) throw Error::parameter("gaussian half width must be >= 4 sigma");
    if (n_points < min_points) throw Error::parameter("gaussian grid needs at least 8 points");

    SpectralAxis axis = SpectralAxis::uniform(
        kind, model.center - half_width_sigmas * model.width,
        model.center + half_width_sigmas * model.width, n_points);
    std::vector<double> density(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double u = (axis.grid()[i] - model.center) / model.width;
        density[i] = std::exp(-0.5 * u * u);
    }
    return {std::move(axis), std::move(density)};
}

LoadResult load_spectrum(std::vector<std::pair<double, double>> table, DomainKind kind) {
    if (table.size() < min_points)
        throw Error::format("spectrum table needs at least 8 rows, got " +
                            std::to_string(table.size()));
    std::sort(table.begin(), table.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> grid(table.size()), density(table.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second))
            throw Error::format("spectrum table contains non-finite entry");
        grid[i] = table[i].first;
        density[i] = table[i].second;
        peak = std::max(peak, std::abs(density[i]));
        if (i > 0 && grid[i] <= grid[i - 1])
            throw Error::format("spectrum table has duplicate or non-increasing positions");
    }
    if (!(peak > 0.0)) throw Error::format("spectrum table has all-zero intensities");

    std::size_t clipped = 0;
    for (double& v : density) {
        if (v < 0.0) {
            if (-v > negative_clip_fraction * peak)
                throw Error::format("spectrum table has a strongly negative intensity (" +
                                    fmt17(v) + "), not noise-level");
            v = 0.0;
            ++clipped;
        }
    }
    return {Spectrum(SpectralAxis(kind, std::move(grid)), std::move(density)), clipped};
}

Moments moments(const Spectrum& s) {
    const Spectrum n = s.normalize();
    const auto& x = n.axis().grid();
    const auto& d = n.density();

    std::size_t carriers = 0;
    for (double v : d)
        if (v > 0.0) ++carriers;

    std::vector<double> weighted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) weighted[i] = x[i] * d[i];
    const double mean = trapezoid(x, weighted);
    for (std::size_t i = 0; i < x.size(); ++i) weighted[i] = (x[i] - mean) * (x[i] - mean) * d[i];
    double variance = trapezoid(x, weighted);

    Moments m;
    m.mean = mean;
    m.degenerate = carriers <= 1;
    m.variance = m.degenerate ? 0.0 : std::max(variance, 0.0);
    return m;
}

Spectrum square_normalize(const Spectrum& s) {
    const Spectrum n = s.normalize();
    std::vector<double> sq(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) sq[i] = n.density()[i] * n.density()[i];
    return {n.axis(), std::move(sq)};
}

Spectrum convert_domain(const Spectrum& s, DomainKind target, bool include_jacobian) {
    const DomainKind source = s.axis().kind();
    const bool valid = (source == DomainKind::wavelength && target == DomainKind::angular_frequency) ||
                       (source == DomainKind::angular_frequency && target == DomainKind::wavelength);
    if (!valid)
        throw Error::parameter("domain conversion is defined between wavelength and angular "
                               "frequency only");
    // lambda = 2 pi c / omega and omega = 2 pi c / lambda share the constant
    // when wavelengths are in nm and frequencies in rad/s.
    const double factor = 2.0 * pi * speed_of_light_nm_per_s;
    const Spectrum n = s.normalize();
    const std::size_t len = n.size();
    std::vector<double> grid(len), density(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double x = n.axis().grid()[i];
        if (x == 0.0) throw Error::parameter("domain conversion: grid contains zero");
        const std::size_t j = len - 1 - i;  // map reverses the ordering
        grid[j] = factor / x;
        double v = n.density()[i];
        // |d(source)/d(target)| = factor / target^2 evaluated on the new grid
        if (include_jacobian) v *= factor / (grid[j] * grid[j]);
        density[j] = v;
    }
    return {SpectralAxis(target, std::move(grid)), std::move(density)};
}

Spectrum resample(const Spectrum& s, const SpectralAxis& target) {
    const Spectrum n = s.normalize();
    const auto& sx = n.axis().grid();
    const auto& sy = n.density();
    std::vector<double> out(target.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double x = target.grid()[i];
        if (x < sx.front() || x > sx.back()) continue;  // outside support
        while (k + 2 < sx.size() && sx[k + 1] < x) ++k;
        const double t = (x - sx[k]) / (sx[k + 1] - sx[k]);
        out[i] = sy[k] + t * (sy[k + 1] - sy[k]);
    }
    return {target, std::move(out)};
}

LoadResult read_spectrum_file(const std::string& path, DomainKind kind) {
    std::ifstream in(path);
    if (!in) throw Error::format("cannot open spectrum file '" + path + "'");
    std::vector<std::pair<double, double>> table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream row(line);
        double pos = 0.0, val = 0.0;
        if (!(row >> pos >> val))
            throw Error::format("spectrum file '" + path + "' line " + std::to_string(lineno) +
                                ": expected 'position intensity'");
        table.emplace_back(pos, val);  // extra columns ignored
    }
    return load_spectrum(std::move(table), kind);
}

Spectrum read_spectrum_file_raw(const std::string& path, DomainKind kind) {
    std::ifstream in(path);
    if (!in) throw Error::format("cannot open spectrum file '" + path + "'");
    std::vector<double> grid, density;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream row(line);
        double pos = 0.0, val = 0.0;
        if (!(row >> pos >> val))
            throw Error::format("spectrum file '" + path + "' line " + std::to_string(lineno) +
                                ": expected 'position intensity'");
        grid.push_back(pos);
        density.push_back(std::max(val, 0.0));
    }
    try {
        return Spectrum::unnormalized(SpectralAxis(kind, std::move(grid)), std::move(density));
    } catch (const Error& e) {
        throw Error::format("spectrum file '" + path + "': " + e.what());
    }
}

void write_spectrum(std::ostream& out, const Spectrum& s,
                    const std::vector<std::string>& header_lines) {
    for (const auto& h : header_lines) out << "# " << h << "\n";
    out << "# unit=" << domain_name(s.axis().kind()) << "\n";
    out << "# normalized=" << (s.normalized() ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << fmt17(s.axis().grid()[i]) << " " << fmt17(s.density()[i]) << "\n";
}

void write_spectrum_file(const std::string& path, const Spectrum& s,
                         const std::vector<std::string>& header_lines) {
    std::ofstream out(path);
    if (!out) throw Error::format("cannot write spectrum file '" + path + "'");
    write_spectrum(out, s, header_lines);
}

std::uint64_t fingerprint(const Spectrum& s) {
    // FNV-1a over the grid at full precision and the density quantized to six
    // significant figures of the peak.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const std::string& text) {
        for (unsigned char c : text) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    mix(domain_name(s.axis().kind()));
    double peak = 0.0;
    for (double v : s.density()) peak = std::max(peak, v);
    const double quantum = peak > 0.0 ? peak * 1e-6 : 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mix(fmt17(s.axis().grid()[i]));
        mix(std::to_string(static_cast<long long>(std::llround(s.density()[i] / quantum))));
    }
    return h;
}

}  // namespace wva
