#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cavmap/curves.hpp"
#include "cavmap/gpst.hpp"

namespace cavmap {

/// Multi-indices alpha in N^{m+1} with
///   alpha_0 + 2 alpha_1 + ... + (m+1) alpha_m = m+1  and  alpha_0 != m+1.
/// Every member automatically satisfies |alpha| <= m.
struct MultiIndexSet {
    int m = 0;
    std::vector<std::vector<int>> indices;
};

enum class CoeffVariant {
    /// Coefficient exactly as printed: no multiplicity factor.
    Literal,
    /// Literal coefficient times the multinomial multiplicity
    /// m! / ((m-|alpha|)! alpha_0! ... alpha_m!) of the ordered-tuple sum.
    Corrected,
};

/// Recovered map with run provenance and per-coefficient diagnostics.
struct ReconstructionResult {
    LaurentMap map;
    /// Relative errors for k = 1, 0, -1, ..., -M against a known truth;
    /// entries are empty where the true coefficient vanishes.
    std::vector<std::optional<double>> relativeErrors;
    int retainedOrder = 0;
    double noise = 0.0;
    Complex center{0.0, 0.0};
    double scale = 1.0;
};

/// Exhaustive, lexicographically ordered enumeration; 1 <= m <= 16.
MultiIndexSet enumerateIndices(int m);

double coefficientLiteral(const std::vector<int>& alpha, int m);
double coefficientCorrected(const std::vector<int>& alpha, int m);

/// Explicit inversion: a1 = sqrt(mu_1 / 2 pi), a0 = mu_2 / (2 mu_1),
/// a_{-m} = mu_1^{-m/2} sum_{alpha} C_alpha (mu_2/mu_1)^{alpha_0}
///          nu_1^{alpha_1} ... nu_m^{alpha_m}.
ReconstructionResult invertMoments(const MomentSequences& moments,
                                   CoeffVariant variant = CoeffVariant::Corrected);

/// Entrywise multiplicative perturbation R_ij -> (1 + delta N_ij) R_ij with
/// N_ij uniform on [-1, 1], drawn row-major from a seeded mt19937_64.
/// delta = 0 reproduces the input bit-for-bit.
MeasurementMatrix applyNoise(const MeasurementMatrix& measurement, double delta,
                             std::uint64_t seed);

/// a0 += center, then every coefficient is divided by scale.
ReconstructionResult shiftAndRescale(ReconstructionResult result, Complex center,
                                     double scale);

/// Largest order M' such that the across-seed dispersion of a_{-m}, relative
/// to the largest mean coefficient magnitude up to order m, stays <= 50% for
/// every m <= M'. Needs at least two results.
int truncateByStability(const std::vector<ReconstructionResult>& results);

/// Fills relativeErrors of `result` against a known true map.
void attachTruth(ReconstructionResult& result, const LaurentMap& truth);

} // namespace cavmap
