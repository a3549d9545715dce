#include "wva/scheme.hpp"

#include <cctype>
#include <cmath>

#include "wva/constants.hpp"
#include "wva/errors.hpp"

namespace wva {

namespace {

constexpr double epsilon_bound = 0.5;
constexpr double singularity_margin = 1e-6;  // radians away from cos(2C) = 0
constexpr double first_order_max_gp = 0.1;
constexpr double first_order_max_epsilon = 0.3;

const std::complex<double> imag_unit{0.0, 1.0};

void check_epsilon(double epsilon) {
    if (!std::isfinite(epsilon) || std::abs(epsilon) >= epsilon_bound)
        throw Error::parameter("scheme epsilon must satisfy |epsilon| < 0.5 rad");
}

double resolved_ref(const SchemeSpec& scheme) {
    if (!scheme.p0_ref)
        throw Error::parameter("scheme p0_ref is unresolved; call SchemeSpec::resolved first");
    return *scheme.p0_ref;
}

}  // namespace

SchemeSpec SchemeSpec::make(InitialKind initial, DetectionKind detection, double epsilon,
                            std::optional<double> p0_ref) {
    check_epsilon(epsilon);
    if (p0_ref && !(*p0_ref > 0.0)) throw Error::parameter("scheme p0_ref must be > 0");
    SchemeSpec s;
    s.initial = initial;
    s.detection = detection;
    s.epsilon = epsilon;
    s.p0_ref = p0_ref;
    return s;
}

SchemeSpec SchemeSpec::swva(double e, std::optional<double> p0) {
    return make(InitialKind::product, DetectionKind::single, e, p0);
}
SchemeSpec SchemeSpec::bwva(double e, std::optional<double> p0) {
    return make(InitialKind::entangled, DetectionKind::single, e, p0);
}
SchemeSpec SchemeSpec::jwva(double e, std::optional<double> p0) {
    return make(InitialKind::product, DetectionKind::dual, e, p0);
}
SchemeSpec SchemeSpec::dwva(double e, std::optional<double> p0) {
    return make(InitialKind::entangled, DetectionKind::dual, e, p0);
}

SchemeSpec SchemeSpec::from_label(const std::string& label, double epsilon,
                                  std::optional<double> p0_ref) {
    std::string l;
    for (char c : label) l.push_back(static_cast<char>(std::tolower(c)));
    if (l == "swva") return swva(epsilon, p0_ref);
    if (l == "bwva") return bwva(epsilon, p0_ref);
    if (l == "jwva") return jwva(epsilon, p0_ref);
    if (l == "dwva") return dwva(epsilon, p0_ref);
    throw Error::parameter("unknown scheme '" + label + "' (expected swva|bwva|jwva|dwva)");
}

const char* SchemeSpec::label() const {
    if (initial == InitialKind::product)
        return detection == DetectionKind::single ? "SWVA" : "JWVA";
    return detection == DetectionKind::single ? "BWVA" : "DWVA";
}

SchemeSpec SchemeSpec::resolved(const Spectrum& s) const {
    if (p0_ref) return *this;
    SchemeSpec out = *this;
    const double mean = moments(s).mean;
    if (!(mean > 0.0))
        throw Error::parameter("spectrum mean is not positive, cannot serve as p0_ref");
    out.p0_ref = mean;
    return out;
}

double SystemState::norm() const { return std::sqrt(std::norm(plus) + std::norm(minus)); }

std::complex<double> SystemState::inner(const SystemState& other) const {
    return std::conj(plus) * other.plus + std::conj(minus) * other.minus;
}

double modulation_phase(InitialKind kind, double epsilon, double p, double p0_ref) {
    if (kind == InitialKind::product) return epsilon;
    if (!(p0_ref > 0.0)) throw Error::parameter("p0_ref must be > 0");
    return (1.0 - p / p0_ref) * epsilon;
}

SystemState initial_state(InitialKind kind, double epsilon, double p, double p0_ref) {
    const double c = modulation_phase(kind, epsilon, p, p0_ref);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {std::exp(-imag_unit * c) * inv_sqrt2, std::exp(imag_unit * c) * inv_sqrt2};
}

FinalStates final_states(DetectionKind kind) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    if (kind == DetectionKind::single)
        return {SystemState{inv_sqrt2, -inv_sqrt2}, std::nullopt};
    return {SystemState{inv_sqrt2, -imag_unit * inv_sqrt2},
            SystemState{inv_sqrt2, imag_unit * inv_sqrt2}};
}

std::complex<double> weak_value(int k, double p, double epsilon, double p0_ref) {
    if (k != 1 && k != 2) throw Error::parameter("weak_value port must be 1 or 2");
    const double two_c = 2.0 * modulation_phase(InitialKind::entangled, epsilon, p, p0_ref);
    if (std::abs(two_c) >= pi / 2.0 - singularity_margin)
        throw Error::singularity("weak value undefined: |2C| within 1e-6 rad of pi/2");
    const double s = std::sin(two_c);
    const double c = std::cos(two_c);
    if (k == 1) return imag_unit * (1.0 + s) / c;
    return -imag_unit * (1.0 - s) / c;
}

double zeta(int k, double g, double p, double epsilon, double p0_ref) {
    const std::complex<double> aw = weak_value(k, p, epsilon, p0_ref);
    const double gp = g * p;
    const double cs = std::cos(gp);
    const double sn = std::sin(gp);
    return cs * cs + sn * sn * std::norm(aw) + std::sin(2.0 * gp) * aw.imag();
}

PortWeights evolve_exact(const SchemeSpec& scheme, double g, double p) {
    const double ref = scheme.initial == InitialKind::entangled ? resolved_ref(scheme) : 1.0;
    const SystemState psi = initial_state(scheme.initial, scheme.epsilon, p, ref);

    // U = exp(+i g A p) is diagonal on the +-1 eigenbasis with phases e^{+-i g p}.
    const double gp = g * p;
    const std::complex<double> u00 = std::cos(gp) + imag_unit * std::sin(gp);
    const std::complex<double> u11 = std::cos(gp) - imag_unit * std::sin(gp);
    const SystemState evolved{u00 * psi.plus, u11 * psi.minus};

    const FinalStates fs = final_states(scheme.detection);
    PortWeights w;
    w.dual = scheme.detection == DetectionKind::dual;
    w.w1 = std::norm(fs.port1.inner(evolved));
    w.w2 = w.dual ? std::norm(fs.port2->inner(evolved)) : 0.0;
    return w;
}

PortWeights evolve_first_order(const SchemeSpec& scheme, double g, double p) {
    const double ref = scheme.initial == InitialKind::entangled ? resolved_ref(scheme) : 1.0;
    const double c = modulation_phase(scheme.initial, scheme.epsilon, p, ref);
    const double gp = g * p;

    PortWeights w;
    w.dual = scheme.detection == DetectionKind::dual;
    if (!w.dual) {
        const double sc = std::sin(c);
        w.w1 = sc * sc - gp * std::sin(2.0 * c);
        return w;
    }
    const double two_c = 2.0 * c;
    if (std::abs(two_c) >= pi / 2.0 - singularity_margin)
        throw Error::singularity("first-order weights undefined: |2C| within 1e-6 rad of pi/2");
    const double s = std::sin(two_c);
    const double cc = std::cos(two_c);
    const double im_aw1 = (1.0 + s) / cc;
    const double im_aw2 = -(1.0 - s) / cc;
    w.w1 = 0.5 * (1.0 - s) * (1.0 + 2.0 * gp * im_aw1);
    w.w2 = 0.5 * (1.0 + s) * (1.0 + 2.0 * gp * im_aw2);
    return w;
}

PostselectedPair postselected_spectra(const SchemeSpec& scheme, double g, const Spectrum& s,
                                      EvolveMode mode) {
    const Spectrum input = s.normalize();
    const SchemeSpec resolved = scheme.resolved(input);
    const auto& grid = input.axis().grid();

    if (mode == EvolveMode::first_order) {
        double max_abs_p = std::max(std::abs(grid.front()), std::abs(grid.back()));
        if (std::abs(g) * max_abs_p > first_order_max_gp)
            throw Error::regime("first-order mode requires |g|*max|p| <= 0.1");
        if (std::abs(resolved.epsilon) > first_order_max_epsilon)
            throw Error::regime("first-order mode requires |epsilon| <= 0.3");
    }

    const bool dual = resolved.detection == DetectionKind::dual;
    std::vector<double> d1(input.size()), d2(dual ? input.size() : 0);
    for (std::size_t i = 0; i < input.size(); ++i) {
        const PortWeights w = mode == EvolveMode::exact ? evolve_exact(resolved, g, grid[i])
                                                        : evolve_first_order(resolved, g, grid[i]);
        d1[i] = std::max(w.w1 * input.density()[i], 0.0);
        if (dual) d2[i] = std::max(w.w2 * input.density()[i], 0.0);
    }

    PostselectedPair pair{Spectrum::unnormalized(input.axis(), std::move(d1)), std::nullopt, mode};
    if (dual) pair.p2 = Spectrum::unnormalized(input.axis(), std::move(d2));
    return pair;
}

}  // namespace wva
