#pragma once

#include <Eigen/Dense>

#include "cavmap/curves.hpp"

namespace cavmap {

/// Moment tables mu^{m,m'}, nu^{m,m'} of a known map, computed by contour
/// integration on the unit circle. Entry (m-1, m'-1) holds order (m, m').
struct OracleMoments {
    int order = 0;
    Eigen::MatrixXcd mu;
    Eigen::MatrixXcd nu;

    Complex muSeq(int m) const { return mu(m - 1, 0); }
    Complex nuSeq(int m) const { return nu(m - 1, 0); }
};

/// Evaluates
///   mu^{m,m'} = int conj(e^{it} (phi_+^{m'})'(e^{it})) phi^m(e^{it}) dt
///   nu^{m,m'} = int e^{it} (phi_+^{m'})'(e^{it}) phi^m(e^{it}) dt
/// by the trapezoidal rule on enough uniform nodes to be exact for the
/// trigonometric degree of the integrand.
OracleMoments momentsFromMap(const LaurentMap& map, int order);

/// Numerically computed inverse-map coefficients, independent of any
/// combinatorial formula: Newton-solves phi(w) = z on a large circle and
/// Fourier-transforms the samples. Throws OracleError on non-convergence.
LaurentMap laurentInversionOracle(const LaurentMap& map, int order);

} // namespace cavmap
