#include <doctest.h>

#include "cavmap/curves.hpp"
#include "cavmap/oracle.hpp"
#include "helpers.hpp"

using namespace cavmap;
using cavmap::testing::dftLaurentCoeff;
using cavmap::testing::randomValidMap;
using cavmap::testing::tableMap;

namespace {

// Independent arc-length oracle: fine trapezoid on the analytic derivative.
double ellipseArcLength(double a, double b, int samples = 1 << 16) {
    double acc = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double t = kTwoPi * j / samples;
        acc += std::hypot(a * std::sin(t), b * std::cos(t));
    }
    return acc * kTwoPi / samples;
}

double gridArcLength(const ParamCurve& c) {
    double acc = 0.0;
    for (const Complex& d : c.derivatives()) acc += std::abs(d);
    return acc * kTwoPi / c.size();
}

} // namespace

TEST_CASE("ellipse node layout matches the parameterization") {
    const ParamCurve c = ellipse(1.9, 1.1, 256);
    const int j0 = 256 / 2 - 1; // parameter t = 0
    CHECK(c.parameter(j0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.nodes()[j0].real() == doctest::Approx(1.9).epsilon(1e-15));
    CHECK(std::abs(c.nodes()[j0].imag()) < 1e-15);
}

TEST_CASE("circle special case has unit moduli") {
    const ParamCurve c = ellipse(1.0, 1.0, 64);
    for (const Complex& z : c.nodes()) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ellipse arc length against quadrature oracle") {
    const ParamCurve c = ellipse(2.0, 1.0, 128);
    const double oracle = ellipseArcLength(2.0, 1.0);
    CHECK(oracle == doctest::Approx(9.6884482).epsilon(1e-7));
    CHECK(gridArcLength(c) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("invalid discretizations are rejected") {
    CHECK_THROWS_AS(ellipse(1.0, 1.0, 63), DiscretizationError);
    CHECK_THROWS_AS(ellipse(1.0, 1.0, 8), DiscretizationError);
    CHECK_THROWS_AS(fromLaurent(tableMap(), 14), DiscretizationError);
}

TEST_CASE("fromLaurent reproduces a shifted disk") {
    LaurentMap map;
    map.a1 = 0.5;
    map.a0 = -1.0;
    const ParamCurve c = fromLaurent(map, 64);
    for (const Complex& z : c.nodes()) {
        CHECK(std::abs(z - Complex{-1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("benchmark cavity map yields a valid Jordan curve") {
    const ParamCurve c = fromLaurent(tableMap(), 256);
    CHECK(c.size() == 256);
    CHECK(c.counterclockwise());
}

TEST_CASE("clockwise parameterizations are rejected") {
    const ParamCurve ccw = ellipse(1.0, 0.5, 32);
    std::vector<Complex> nodes(ccw.nodes().rbegin(), ccw.nodes().rend());
    std::vector<Complex> derivs;
    for (auto it = ccw.derivatives().rbegin(); it != ccw.derivatives().rend(); ++it) {
        derivs.push_back(-*it);
    }
    CHECK_THROWS_AS(ParamCurve(std::move(nodes), std::move(derivs)), JordanCurveError);
}

TEST_CASE("degenerate slit map is rejected") {
    LaurentMap map;
    map.a1 = 1.0;
    map.negCoeffs = {Complex{1.0, 0.0}}; // phi'(z) = 1 - z^{-2} vanishes at +-1
    CHECK_THROWS_AS(fromLaurent(map, 64), JordanCurveError);
}

TEST_CASE("powerCoeffs: quadratic expansion of a linear map") {
    LaurentMap map;
    map.a1 = 0.5;
    map.a0 = -1.0;
    const LaurentSeriesPower p = powerCoeffs(map, 2);
    CHECK(std::abs(p.coeff(2) - Complex{0.25, 0.0}) == 0.0);
    CHECK(std::abs(p.coeff(1) - Complex{-1.0, 0.0}) == 0.0);
    CHECK(std::abs(p.coeff(0) - Complex{1.0, 0.0}) == 0.0);
    CHECK(std::abs(p.coeff(3)) == 0.0);
    CHECK(std::abs(p.coeff(-1)) == 0.0);
}

TEST_CASE("powerCoeffs: cross term of a1 and a_{-2}") {
    LaurentMap map;
    map.a1 = 0.5;
    map.negCoeffs = {Complex{0.0, 0.0}, Complex{0.1, 0.0}};
    const LaurentSeriesPower p = powerCoeffs(map, 2);
    CHECK(std::abs(p.coeff(-1) - Complex{2 * 0.5 * 0.1, 0.0}) < 1e-15);
    // FFT sampling cross-check of the same coefficient.
    const Complex viaDft =
        dftLaurentCoeff([&](Complex z) { const Complex v = map.eval(z); return v * v; }, -1, 2.0);
    CHECK(std::abs(p.coeff(-1) - viaDft) < 1e-12);
}

TEST_CASE("powerCoeffs with n = 1 returns the map itself") {
    std::mt19937_64 gen(7);
    const LaurentMap map = randomValidMap(gen, 4);
    const LaurentSeriesPower p = powerCoeffs(map, 1);
    for (int k = -4; k <= 1; ++k) CHECK(std::abs(p.coeff(k) - map.coeff(k)) == 0.0);
}

TEST_CASE("powerCoeffs agrees with the FFT oracle for random maps") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 4; ++trial) {
        const LaurentMap map = randomValidMap(gen, 8);
        for (int n : {2, 5, 8}) {
            const LaurentSeriesPower p = powerCoeffs(map, n);
            auto phin = [&](Complex z) {
                Complex acc{1.0, 0.0};
                for (int i = 0; i < n; ++i) acc *= map.eval(z);
                return acc;
            };
            // Dividing the Fourier coefficient by R^k amplifies the sampling
            // roundoff by 2^{|k|}; past k ~ -8 the oracle is compared in the
            // sampled metric instead.
            for (int k = -8; k <= n; ++k) {
                CHECK(std::abs(p.coeff(k) - dftLaurentCoeff(phin, k, 2.0)) < 1e-10);
            }
            for (int k = -n * 8; k < -8; k += 3) {
                const double scaled = std::abs(p.coeff(k) - dftLaurentCoeff(phin, k, 2.0)) *
                                      std::pow(2.0, k);
                CHECK(scaled < 1e-12);
            }
        }
    }
}

TEST_CASE("invertMap matches the stated relations") {
    LaurentMap linear;
    linear.a1 = 2.0;
    const LaurentMap invLinear = invertMap(linear, 4);
    CHECK(std::abs(invLinear.a1 - Complex{0.5, 0.0}) == 0.0);
    CHECK(std::abs(invLinear.a0) == 0.0);
    for (int m = 1; m <= 4; ++m) CHECK(std::abs(invLinear.coeff(-m)) == 0.0);

    LaurentMap shifted;
    shifted.a1 = Complex{2.0, 0.0};
    shifted.a0 = Complex{0.3, -0.4};
    const LaurentMap invShifted = invertMap(shifted, 2);
    CHECK(std::abs(invShifted.a0 - (-shifted.a0 / shifted.a1)) < 1e-15);

    LaurentMap perturbed;
    perturbed.a1 = 1.0;
    perturbed.negCoeffs = {Complex{0.2, 0.1}};
    const LaurentMap inv = invertMap(perturbed, 3);
    CHECK(std::abs(inv.coeff(-1) - Complex{-0.2, -0.1}) < 1e-15);
    // Sampling cross-check via the numerical inversion oracle.
    const LaurentMap oracleInv = laurentInversionOracle(perturbed, 3);
    for (int m = 1; m <= 3; ++m) {
        CHECK(std::abs(inv.coeff(-m) - oracleInv.coeff(-m)) < 1e-10);
    }
}

TEST_CASE("composition of map and inverse is the identity up to truncation") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 4; ++trial) {
        const LaurentMap map = randomValidMap(gen, 5);
        const LaurentMap inv = invertMap(map, 24);
        auto composed = [&](Complex z) { return map.eval(inv.eval(z)); };
        const double radius = 6.0;
        CHECK(std::abs(dftLaurentCoeff(composed, 1, radius) - 1.0) < 1e-10);
        CHECK(std::abs(dftLaurentCoeff(composed, 0, radius)) < 1e-10);
        for (int k = -5; k <= -1; ++k) {
            CHECK(std::abs(dftLaurentCoeff(composed, k, radius)) < 1e-10);
        }
    }
}

TEST_CASE("canonical rotation preserves arc length") {
    std::mt19937_64 gen(31);
    const LaurentMap map = randomValidMap(gen, 4, /*complexLeading=*/true);
    const LaurentMap canon = map.canonicalized();
    CHECK(canon.a1.imag() == 0.0);
    CHECK(canon.a1.real() > 0.0);
    const double len = gridArcLength(fromLaurent(map, 256));
    const double lenCanon = gridArcLength(fromLaurent(canon, 256));
    CHECK(len == doctest::Approx(lenCanon).epsilon(1e-12));
}
