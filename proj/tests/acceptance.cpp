// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cavmap/oracle.hpp"
#include "cavmap/pipeline.hpp"
#include "helpers.hpp"

using namespace cavmap;
using cavmap::testing::randomValidMap;
using cavmap::testing::tableMap;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& fn) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

MomentSequences oracleMoments(const LaurentMap& map, int order) {
    const OracleMoments om = momentsFromMap(map, order);
    MomentSequences seq;
    for (int m = 1; m <= order; ++m) {
        seq.mu.push_back(om.muSeq(m));
        seq.nu.push_back(om.nuSeq(m));
    }
    return seq;
}

ParamCurve circle(double rho, int n) {
    LaurentMap map;
    map.a1 = rho;
    return fromLaurent(map, n);
}

bool oracleRoundTrip(std::string& detail) {
    const LaurentMap truth = tableMap();
    const ReconstructionResult r = invertMoments(oracleMoments(truth, 8));
    double worst = std::max(std::abs(r.map.a1 - truth.a1), std::abs(r.map.a0 - truth.a0));
    for (int m = 1; m <= 7; ++m) {
        worst = std::max(worst, std::abs(r.map.coeff(-m) - truth.coeff(-m)));
    }
    detail = "max coefficient error " + std::to_string(worst);
    return worst <= 1e-8;
}

bool variantAdjudication(std::string& detail) {
    LaurentMap map;
    map.a1 = 0.5;
    map.negCoeffs = {Complex{0.0, 0.0}, Complex{0.1, 0.0}};
    const MomentSequences m = oracleMoments(map, 4);
    const Complex corrected = invertMoments(m, CoeffVariant::Corrected).map.coeff(-2);
    const Complex literal = invertMoments(m, CoeffVariant::Literal).map.coeff(-2);
    const Complex sampled = laurentInversionOracle(invertMap(map, 8), 4).coeff(-2);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "corrected=%.12g literal=%.12g sampling-oracle=%.12g",
                  corrected.real(), literal.real(), sampled.real());
    detail = buf;
    return std::abs(corrected - Complex{0.1, 0.0}) <= 1e-10 &&
           std::abs(corrected - sampled) <= 1e-9 &&
           std::abs(literal - Complex{0.05, 0.0}) <= 1e-10;
}

bool bemValidation(std::string& detail) {
    const double rho = 0.4;
    const int n = 256;
    const SingleLayerOperator S = assembleSingleLayer(makeGrid(circle(rho, n)));
    double worst = 0.0;
    for (int mode = 1; mode <= 8; ++mode) {
        Eigen::VectorXd f(n);
        for (int j = 0; j < n; ++j) f(j) = std::cos(mode * S.grid().curve.parameter(j));
        worst = std::max(worst, (S.apply(f) - rho / (2.0 * mode) * f).cwiseAbs().maxCoeff());
    }
    const double capErr = std::abs(equilibrium(S).capacity - rho);
    detail = "symbol error " + std::to_string(worst) + ", capacity error " + std::to_string(capErr);
    return worst <= 1e-10 && capErr <= 1e-8;
}

bool factorizationIdentity(std::string& detail) {
    const int n = 256, order = 8;
    const ForwardModel model = buildForwardModel(
        ellipse(1.9, 1.1, n), std::optional(fromLaurent(tableMap(), n)));
    const MeasurementSet set = assembleMeasurementSet(model, order, Complex{-0.5, 0.0});
    const Equilibrium cavityEq = equilibrium(*model.cavity);

    const Eigen::MatrixXd K = interactionNodal(*model.cavity, model.outer->grid(), model.outerEq) *
                              interactionNodal(*model.outer, model.cavity->grid(), cavityEq);

    // (I - K)^{-1} K column by column on the complex basis.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - K);
    Eigen::MatrixXcd mapped(n, 2 * order);
    for (int j = 0; j < 2 * order; ++j) {
        const Eigen::VectorXcd f = set.basis.traces.col(j);
        mapped.col(j) = lu.solve(Eigen::VectorXd(K * f.real())) +
                        Complex{0.0, 1.0} * lu.solve(Eigen::VectorXd(K * f.imag()));
    }

    // Bilinear-form matrices in the 2M basis.
    const Eigen::RowVectorXd meanForm =
        (model.outer->grid().weights.array() * model.outerEq.density.array())
            .matrix()
            .transpose();
    auto project = [&](const Eigen::MatrixXcd& cols) {
        Eigen::MatrixXcd out = cols;
        for (Eigen::Index j = 0; j < cols.cols(); ++j) {
            out.col(j).array() -= (meanForm.cast<Complex>() * cols.col(j))(0, 0);
        }
        return out;
    };
    const Eigen::MatrixXcd pf = project(set.basis.traces);
    Eigen::MatrixXd stacked(n, 4 * order);
    stacked.leftCols(2 * order) = pf.real();
    stacked.rightCols(2 * order) = pf.imag();
    const Eigen::MatrixXd solved = model.outer->solveMatrix(stacked);
    const Eigen::MatrixXcd densities =
        solved.leftCols(2 * order) + Complex{0.0, 1.0} * solved.rightCols(2 * order);
    const Eigen::MatrixXcd factorized = densities.transpose() *
                                        model.outer->grid().weights.asDiagonal() *
                                        project(mapped);

    const double rel = (set.measurement.entries - factorized).norm() / set.measurement.entries.norm();
    const double radius = spectralRadiusSelfAdjoint(K, *model.outer, model.outerEq);
    char buf[120];
    std::snprintf(buf, sizeof(buf), "relative norm %.3g, spectral radius %.8f", rel, radius);
    detail = buf;
    return rel <= 1e-6 && radius <= 1.0 - 1e-6;
}

bool referenceBenchmark(std::string& detail) {
    const int n = 256, order = 12;
    const LaurentMap truth = tableMap();
    const ForwardModel model = buildForwardModel(
        ellipse(1.9, 1.1, n), std::optional(fromLaurent(truth, n)));

    auto relErr = [&](const ReconstructionResult& r, int k) {
        return std::abs(r.map.coeff(k) - truth.coeff(k)) / std::abs(truth.coeff(k));
    };

    const MeasurementSet shifted = assembleMeasurementSet(model, order, Complex{-0.5, 0.0});
    const ReconstructionResult rShift =
        reconstructFromMeasurement(shifted.outerGram, shifted.measurement, shifted.centerScaled);
    double worstShift = 0.0;
    for (int k = 1; k >= -4; --k) worstShift = std::max(worstShift, relErr(rShift, k));

    const MeasurementSet centered = assembleMeasurementSet(model, order, Complex{0.0, 0.0});
    const ReconstructionResult rZero =
        reconstructFromMeasurement(centered.outerGram, centered.measurement,
                                   centered.centerScaled);
    double worstZeroLow = 0.0;
    for (int k = 1; k >= -2; --k) worstZeroLow = std::max(worstZeroLow, relErr(rZero, k));
    const double zeroHigh = std::max(relErr(rZero, -3), relErr(rZero, -4));

    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "r=-0.5 worst(a1..a-4)=%.3g%%; r=0 worst(a1..a-2)=%.3g%%, max(a-3,a-4)=%.3g%% "
                  "(the r=0 degradation clause expects >= 2%%; with exact data the recovery is "
                  "shift-covariant, so it cannot trigger)",
                  100.0 * worstShift, 100.0 * worstZeroLow, 100.0 * zeroHigh);
    detail = buf;
    return worstShift < 0.02 && worstZeroLow < 0.02 && zeroHigh >= 0.02;
}

bool noiseStudy(std::string& detail) {
    const int n = 256, order = 8; // project default order
    const LaurentMap truth = tableMap();
    const ForwardModel model = buildForwardModel(
        ellipse(1.9, 1.1, n), std::optional(fromLaurent(truth, n)));
    const MeasurementSet set = assembleMeasurementSet(model, order, Complex{-0.5, 0.0});

    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);

    const double deltas[] = {0.05, 0.15, 0.25, 0.35};
    const int expectedRetained[] = {4, 4, 2, 1};
    std::string summary;
    bool retainedOk = true;
    double medianA1 = 0.0, medianA0 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const NoiseStudy study = runNoiseStudy(set.outerGram, set.measurement, set.centerScaled,
                                               deltas[i], seeds);
        std::vector<double> errA1, errA0;
        for (const auto& r : study.results) {
            errA1.push_back(std::abs(r.map.a1 - truth.a1) / std::abs(truth.a1));
            errA0.push_back(std::abs(r.map.a0 - truth.a0) / std::abs(truth.a0));
        }
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v.empty() ? 1e9 : v[v.size() / 2];
        };
        medianA1 = median(errA1);
        medianA0 = median(errA0);
        if (std::abs(study.retainedOrder - expectedRetained[i]) > 1) retainedOk = false;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "[delta=%.0f%%: retained=%d medA1=%.1f%% medA0=%.1f%%] ",
                      100 * deltas[i], study.retainedOrder, 100 * medianA1, 100 * medianA0);
        summary += buf;
    }
    detail = summary;
    // medians at the final (35%) level must stay within 10%.
    return retainedOk && medianA1 <= 0.10 && medianA0 <= 0.10;
}

bool propertySuites(std::string& detail) {
    std::string notes;

    // Interaction-operator symmetry at 1e-8.
    bool symmetryOk = true;
    {
        const double s = 0.9 / 3.8;
        const int n = 128;
        const SingleLayerOperator outer =
            assembleSingleLayer(makeGrid(ellipse(1.9, 1.1, n).scaledBy(s)));
        const SingleLayerOperator cavity =
            assembleSingleLayer(makeGrid(fromLaurent(tableMap().scaledBy(s), n)));
        const Equilibrium outerEq = equilibrium(outer);
        const Equilibrium cavityEq = equilibrium(cavity);
        const Eigen::MatrixXd Kog = interactionNodal(outer, cavity.grid(), cavityEq);
        const Eigen::MatrixXd Kgo = interactionNodal(cavity, outer.grid(), outerEq);
        std::mt19937_64 gen(2024);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd q(n), p(n);
            for (int j = 0; j < n; ++j) {
                q(j) = unif(gen);
                p(j) = unif(gen);
            }
            q = projectTrace(outer.grid(), outerEq, q);
            p = projectTrace(cavity.grid(), cavityEq, p);
            const double lhs = halfPairing(cavity, cavityEq, Eigen::VectorXd(Kog * q), p);
            const double rhs = halfPairing(outer, outerEq, q, Eigen::VectorXd(Kgo * p));
            const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            if (std::abs(lhs - rhs) > 1e-8 * scale) symmetryOk = false;
        }
    }
    notes += symmetryOk ? "symmetry ok; " : "SYMMETRY FAILED; ";

    // mu_1 > 0 on 50 random cavities.
    bool muOk = true;
    {
        std::mt19937_64 gen(7);
        for (int trial = 0; trial < 50; ++trial) {
            const LaurentMap map = randomValidMap(gen, 5, trial % 2 == 1);
            const OracleMoments om = momentsFromMap(map, 2);
            if (!(om.muSeq(1).real() > 0.0) ||
                std::abs(om.muSeq(1).imag()) > 1e-10 * std::abs(om.muSeq(1))) {
                muOk = false;
            }
        }
    }
    notes += muOk ? "mu1>0 ok; " : "MU1 FAILED; ";

    // Scale equivariance of the full inversion at 1e-8.
    bool scaleOk = true;
    {
        const LaurentMap truth = tableMap();
        for (double s : {0.9 / 3.8, 0.45}) {
            const ReconstructionResult r = invertMoments(oracleMoments(truth.scaledBy(s), 8));
            const ReconstructionResult back = shiftAndRescale(r, Complex{0.0, 0.0}, s);
            if (std::abs(back.map.a1 - truth.a1) > 1e-8 ||
                std::abs(back.map.a0 - truth.a0) > 1e-8) {
                scaleOk = false;
            }
            for (int m = 1; m <= 7; ++m) {
                if (std::abs(back.map.coeff(-m) - truth.coeff(-m)) > 1e-8) scaleOk = false;
            }
        }
    }
    notes += scaleOk ? "scale ok; " : "SCALE FAILED; ";

    // Multi-index cardinalities against brute force for m <= 6.
    bool enumOk = true;
    {
        const int expected[] = {1, 2, 4, 6, 10, 14};
        for (int m = 1; m <= 6; ++m) {
            const MultiIndexSet set = enumerateIndices(m);
            std::set<std::vector<int>> brute;
            std::vector<int> alpha(static_cast<std::size_t>(m + 1), 0);
            while (true) {
                int weighted = 0;
                for (int k = 0; k <= m; ++k) {
                    weighted += (k + 1) * alpha[static_cast<std::size_t>(k)];
                }
                if (weighted == m + 1 && alpha[0] != m + 1) brute.insert(alpha);
                int pos = m;
                while (pos >= 0) {
                    if (++alpha[static_cast<std::size_t>(pos)] <= m + 1) break;
                    alpha[static_cast<std::size_t>(pos)] = 0;
                    --pos;
                }
                if (pos < 0) break;
            }
            const std::set<std::vector<int>> mine(set.indices.begin(), set.indices.end());
            if (static_cast<int>(set.indices.size()) != expected[m - 1] || mine != brute) {
                enumOk = false;
            }
        }
    }
    notes += enumOk ? "enumerate ok; " : "ENUMERATE FAILED; ";

    // Zero-noise identity, bit for bit.
    bool noiseOk = true;
    {
        MeasurementMatrix r;
        r.order = 4;
        r.scale = 1.0;
        r.entries = Eigen::MatrixXcd::Random(8, 8);
        const MeasurementMatrix same = applyNoise(r, 0.0, 4242);
        if ((same.entries - r.entries).cwiseAbs().maxCoeff() != 0.0) noiseOk = false;
    }
    notes += noiseOk ? "noise identity ok" : "NOISE IDENTITY FAILED";

    detail = notes;
    return symmetryOk && muOk && scaleOk && enumOk && noiseOk;
}

} // namespace

int main() {
    criterion(1, "oracle round-trip recovers the benchmark map to 1e-8", oracleRoundTrip);
    criterion(2, "coefficient-variant adjudication on 0.5 z + 0.1 z^-2", variantAdjudication);
    criterion(3, "circle single layer: Fourier symbols and capacity", bemValidation);
    criterion(4, "factorization identity and contraction on the benchmark", factorizationIdentity);
    criterion(5, "reference benchmark with exact data at r = -0.5 and r = 0", referenceBenchmark);
    criterion(6, "noise study: stability of a1, a0 and retained orders", noiseStudy);
    criterion(7, "property suites (symmetry, mu1, scaling, enumeration, noise)", propertySuites);

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
