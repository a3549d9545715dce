#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "wva/constants.hpp"
#include "wva/errors.hpp"
#include "wva/spectrum.hpp"

using namespace wva;
using testsupport::simpson_mean;

TEST_CASE("make_gaussian reproduces the requested moments") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096);
    Moments m = moments(s);
    CHECK(std::abs(m.mean - 1540.0) < 1e-6 * 25.0);
    CHECK(std::abs(m.variance - 625.0) / 625.0 < 1e-6);
    CHECK(std::abs(s.integral() - 1.0) < 1e-12);
}

TEST_CASE("make_gaussian normalizes by construction") {
    Spectrum s = make_gaussian({1.0, 0.1});
    CHECK(s.normalized());
    CHECK(std::abs(s.integral() - 1.0) < 1e-12);
}

TEST_CASE("make_gaussian samples have zero skewness") {
    Spectrum s = make_gaussian({60.0, 1.0});
    Moments m = moments(s);
    std::vector<double> w(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s.axis().grid()[i] - m.mean;
        w[i] = d * d * d * s.density()[i];
    }
    const double third = trapezoid(s.axis().grid(), w);
    CHECK(std::abs(third) < 1e-9);
}

TEST_CASE("make_gaussian rejects invalid models") {
    CHECK_THROWS_AS(make_gaussian({60.0, -1.0}), Error);
    CHECK_THROWS_AS(make_gaussian({-5.0, 1.0}), Error);
    CHECK_THROWS_AS(make_gaussian({1.0, 2.0}), Error);        // center/width <= 1
    CHECK_THROWS_AS(make_gaussian({60.0, 1.0}, 3.0), Error);  // half width < 4
    CHECK_THROWS_AS(make_gaussian({60.0, 1.0}, 8.0, 4), Error);
}

TEST_CASE("load_spectrum round-trips a sampled gaussian") {
    Spectrum ref = make_gaussian({60.0, 1.0});
    std::vector<std::pair<double, double>> table;
    for (std::size_t i = 0; i < ref.size(); ++i)
        table.emplace_back(ref.axis().grid()[i], ref.density()[i]);
    LoadResult out = load_spectrum(table, DomainKind::generic_p);
    CHECK(out.clipped == 0);
    Moments a = moments(ref), b = moments(out.spectrum);
    CHECK(std::abs(a.mean - b.mean) < 1e-9);
    CHECK(std::abs(a.variance - b.variance) < 1e-9);
}

TEST_CASE("load_spectrum sorts rows and clips noise-level negatives") {
    std::vector<std::pair<double, double>> table = {
        {3.0, 0.5}, {1.0, 0.1}, {2.0, 0.4}, {4.0, -1e-6}, {5.0, 0.2},
        {6.0, 0.1}, {7.0, 0.05}, {8.0, 0.01},
    };
    LoadResult out = load_spectrum(table, DomainKind::generic_p);
    CHECK(out.clipped == 1);
    CHECK(out.spectrum.axis().grid().front() == 1.0);
    for (double v : out.spectrum.density()) CHECK(v >= 0.0);
    CHECK(std::abs(out.spectrum.integral() - 1.0) < 1e-12);
}

TEST_CASE("load_spectrum rejects malformed tables") {
    std::vector<std::pair<double, double>> small = {{1.0, 1.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(load_spectrum(small, DomainKind::generic_p), Error);

    std::vector<std::pair<double, double>> zeros(8);
    for (std::size_t i = 0; i < 8; ++i) zeros[i] = {static_cast<double>(i), 0.0};
    CHECK_THROWS_AS(load_spectrum(zeros, DomainKind::generic_p), Error);

    std::vector<std::pair<double, double>> dup(8);
    for (std::size_t i = 0; i < 8; ++i) dup[i] = {static_cast<double>(i / 2), 1.0};
    CHECK_THROWS_AS(load_spectrum(dup, DomainKind::generic_p), Error);

    std::vector<std::pair<double, double>> inf(8);
    for (std::size_t i = 0; i < 8; ++i) inf[i] = {static_cast<double>(i), 1.0};
    inf[3].second = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(load_spectrum(inf, DomainKind::generic_p), Error);

    try {
        load_spectrum(small, DomainKind::generic_p);
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::format);
    }
}

TEST_CASE("moments of a uniform density") {
    SpectralAxis axis = SpectralAxis::uniform(DomainKind::generic_p, 0.0, 1.0, 4096);
    Spectrum u(axis, std::vector<double>(4096, 1.0));
    Moments m = moments(u);
    CHECK(std::abs(m.mean - 0.5) < 1e-12);
    CHECK(std::abs(m.variance - 1.0 / 12.0) * 12.0 < 1e-6);
}

TEST_CASE("moments of a bimodal spectrum match an independent oracle") {
    Spectrum bi = testsupport::sld_spectrum();
    const double oracle = simpson_mean(testsupport::sld_density, 1360.0, 1720.0, 40960);
    CHECK(std::abs(moments(bi).mean - oracle) < 1e-8 * oracle);
}

TEST_CASE("moments flags a single-point mass as degenerate") {
    std::vector<double> d(64, 0.0);
    d[30] = 1.0;
    Spectrum spike(SpectralAxis::uniform(DomainKind::generic_p, 0.0, 1.0, 64), std::move(d));
    Moments m = moments(spike);
    CHECK(m.degenerate);
    CHECK(m.variance == 0.0);
}

TEST_CASE("square_normalize narrows a gaussian by sqrt(2)") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096);
    Moments m = moments(square_normalize(s));
    const double want = 25.0 / std::sqrt(2.0);
    CHECK(std::abs(std::sqrt(m.variance) - want) / want < 1e-3);
    CHECK(std::abs(m.mean - 1540.0) < 1e-6);
}

TEST_CASE("square_normalize keeps a narrow spike in place") {
    std::vector<double> d(64, 1e-12);
    d[20] = 1.0;
    SpectralAxis axis = SpectralAxis::uniform(DomainKind::generic_p, 0.0, 1.0, 64);
    const double where = axis.grid()[20];
    Spectrum spike(axis, std::move(d));
    Moments m = moments(square_normalize(spike));
    CHECK(std::abs(m.mean - where) < 1e-6);
}

TEST_CASE("square_normalize pulls an asymmetric triangle toward its mode") {
    // rising edge to the mode at 0.8, then a sharp fall; squaring moves the
    // mean from 0.6 to 0.65 (direct quadrature of the analytic density)
    SpectralAxis axis = SpectralAxis::uniform(DomainKind::generic_p, 0.0, 1.0, 4097);
    std::vector<double> d(axis.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double x = axis.grid()[i];
        d[i] = x < 0.8 ? x / 0.8 : (1.0 - x) / 0.2;
    }
    Spectrum tri(axis, std::move(d));
    const double before = moments(tri).mean;
    const double after = moments(square_normalize(tri)).mean;
    CHECK(std::abs(before - 0.6) < 1e-6);
    CHECK(std::abs(after - 0.65) < 1e-6);
    CHECK(after > before);
}

TEST_CASE("convert_domain maps 1540 nm to the right angular frequency") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096, DomainKind::wavelength);
    Spectrum omega = convert_domain(s, DomainKind::angular_frequency);
    // 2 pi c / 1540 nm with c = 299792458 m/s
    const double w0 = 2.0 * pi * speed_of_light_nm_per_s / 1540.0;
    CHECK(w0 == doctest::Approx(1.2231e15).epsilon(1e-4));
    CHECK(std::abs(moments(omega).mean - w0) / w0 < 1e-3);
    for (std::size_t i = 1; i < omega.size(); ++i)
        CHECK(omega.axis().grid()[i] > omega.axis().grid()[i - 1]);
}

TEST_CASE("convert_domain with jacobian is an involution") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096, DomainKind::wavelength);
    Spectrum back = convert_domain(convert_domain(s, DomainKind::angular_frequency),
                                   DomainKind::wavelength);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(back.axis().grid()[i] - s.axis().grid()[i]) < 1e-9 * s.axis().grid()[i]);
        CHECK(std::abs(back.density()[i] - s.density()[i]) <= 1e-9 * s.density()[i]);
    }
}

TEST_CASE("convert_domain jacobian shifts the mean at second order in width") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 4096, DomainKind::wavelength);
    const double with = moments(convert_domain(s, DomainKind::angular_frequency, true)).mean;
    const double without = moments(convert_domain(s, DomainKind::angular_frequency, false)).mean;
    const double w0 = 2.0 * pi * speed_of_light_nm_per_s / 1540.0;
    const double scale = std::pow(25.0 / 1540.0, 2) * w0;
    CHECK(std::abs(with - without) / scale > 1.5);
    CHECK(std::abs(with - without) / scale < 2.5);
}

TEST_CASE("convert_domain rejects grids through zero and generic axes") {
    std::vector<double> grid(16), dens(16, 1.0);
    for (std::size_t i = 0; i < 16; ++i) grid[i] = static_cast<double>(i) - 4.0;
    Spectrum crossing(SpectralAxis(DomainKind::wavelength, grid), dens);
    CHECK_THROWS_AS(convert_domain(crossing, DomainKind::angular_frequency), Error);

    Spectrum generic = make_gaussian({60.0, 1.0});
    CHECK_THROWS_AS(convert_domain(generic, DomainKind::wavelength), Error);
}

TEST_CASE("resample onto the same grid is the identity") {
    Spectrum s = make_gaussian({60.0, 1.0});
    Spectrum r = resample(s, s.axis());
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(std::abs(r.density()[i] - s.density()[i]) < 1e-12);
}

TEST_CASE("resample onto a refined grid preserves moments") {
    Spectrum s = make_gaussian({60.0, 1.0}, 8.0, 8192);
    SpectralAxis fine =
        SpectralAxis::uniform(DomainKind::generic_p, s.axis().front(), s.axis().back(), 16384);
    Moments a = moments(s), b = moments(resample(s, fine));
    CHECK(std::abs(a.mean - b.mean) / a.mean < 1e-6);
    CHECK(std::abs(a.variance - b.variance) / a.variance < 1e-6);
}

TEST_CASE("resample pads zeros outside the support and stays normalized") {
    Spectrum s = make_gaussian({60.0, 1.0});
    SpectralAxis wide = SpectralAxis::uniform(DomainKind::generic_p, 40.0, 80.0, 4096);
    Spectrum r = resample(s, wide);
    CHECK(r.density().front() == 0.0);
    CHECK(r.density().back() == 0.0);
    CHECK(std::abs(r.integral() - 1.0) < 1e-12);
}

TEST_CASE("every operation keeps densities nonnegative and normalized") {
    testsupport::Uniform rng(20260808);
    for (int trial = 0; trial < 20; ++trial) {
        const double center = rng.next(30.0, 90.0);
        const double width = rng.next(0.5, 3.0);
        Spectrum s = make_gaussian({center, width}, rng.next(4.0, 10.0), 2048);
        Spectrum sq = square_normalize(s);
        SpectralAxis target = SpectralAxis::uniform(
            DomainKind::generic_p, center - 5.0 * width, center + 5.0 * width, 1024);
        Spectrum r = resample(sq, target);
        for (const Spectrum* sp : {&s, &sq, &r}) {
            CHECK(std::abs(sp->integral() - 1.0) < 1e-9);
            for (double v : sp->density()) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("spectrum files round-trip through write and read") {
    Spectrum s = make_gaussian({1540.0, 25.0}, 8.0, 512, DomainKind::wavelength);
    std::ostringstream out;
    write_spectrum(out, s, {"demo header"});
    const std::string text = out.str();
    CHECK(text.rfind("# demo header", 0) == 0);
    CHECK(text.find("# normalized=true") != std::string::npos);

    const std::string path = "test_spectrum_roundtrip.txt";
    write_spectrum_file(path, s);
    LoadResult in = read_spectrum_file(path, DomainKind::wavelength);
    REQUIRE(in.spectrum.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(in.spectrum.axis().grid()[i] == s.axis().grid()[i]);
        CHECK(in.spectrum.density()[i] == doctest::Approx(s.density()[i]).epsilon(1e-15));
    }
    std::remove(path.c_str());
}

TEST_CASE("spectrum reader skips comments and extra columns") {
    const std::string path = "test_spectrum_columns.txt";
    {
        std::ofstream f(path);
        f << "# a comment line\n";
        f << "1.0 0.1 99\n2.0, 0.2, 98\n3.0 0.3 97\n4.0 0.4 96\n";
        f << "5.0 0.5 95\n6.0 0.4 94\n7.0 0.2 93\n8.0 0.1 92\n";
    }
    LoadResult in = read_spectrum_file(path, DomainKind::generic_p);
    CHECK(in.spectrum.size() == 8);
    CHECK(in.spectrum.axis().grid().back() == 8.0);
    std::remove(path.c_str());
}

TEST_CASE("fingerprint tracks content, not rounding noise") {
    Spectrum s = make_gaussian({60.0, 1.0});
    std::vector<double> jittered = s.density();
    for (double& v : jittered) v *= 1.0 + 3e-14;
    Spectrum t = Spectrum::unnormalized(s.axis(), std::move(jittered));
    CHECK(fingerprint(s) == fingerprint(t));
    CHECK(fingerprint(s) != fingerprint(make_gaussian({60.0, 1.1})));
}
