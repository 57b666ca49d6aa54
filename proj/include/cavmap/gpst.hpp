#pragma once

#include <Eigen/Dense>

#include "cavmap/singlelayer.hpp"

namespace cavmap {

/// Traces of the mean-adjusted harmonic polynomials
/// Q^m = (z - r)^m + c^m and their conjugates on a boundary grid.
/// Columns 0..M-1 hold Q^1..Q^M, columns M..2M-1 the conjugates.
struct HarmonicBasis {
    int order = 0;
    Complex center{0.0, 0.0};
    std::vector<Complex> constants; // c^1, ..., c^M
    Eigen::MatrixXcd traces;        // N x 2M
};

/// c^m = -<e, (z-r)^m> makes every trace mean-free against the equilibrium
/// density.
HarmonicBasis buildBasis(const BoundaryGrid& grid, const Equilibrium& eq, int order,
                         Complex center);

enum class GpstBoundary { OuterExact, CavityRecovered };

/// 2M x 2M matrix of half-order inner products of basis traces: the
/// generalized Polya-Szego tensor of the boundary in the complex basis.
struct GpstMatrix {
    int order = 0;
    Eigen::MatrixXcd entries;
    GpstBoundary boundary = GpstBoundary::OuterExact;
};

/// Gram matrix <f_i, f_j>_{1/2} of the basis on the outer boundary.
GpstMatrix gramMatrix(const SingleLayerOperator& outer, const Equilibrium& eq,
                      const HarmonicBasis& basis);

/// Discrete recovery Q_gamma ~ Q_Gamma (Q_Gamma + R)^{-1} R of the cavity
/// tensor from the measurement matrix. Throws MeasurementError when
/// Q_Gamma + R is numerically singular.
GpstMatrix recoveredGpst(const GpstMatrix& outerGram, const MeasurementMatrix& measurement);

/// mu_m = <Q^m, conj Q^1>/2 and nu_m = <Q^m, Q^1>/2 for m = 1..M.
struct MomentSequences {
    std::vector<Complex> mu;
    std::vector<Complex> nu;

    int order() const { return static_cast<int>(mu.size()); }
};

/// Reads the Q^1 and conj(Q^1) columns of a cavity tensor, halved.
/// mu_1 must be positive and real within imagTolerance * |mu_1|; the
/// surviving imaginary part is discarded. Requires M >= 2.
MomentSequences extractMoments(const GpstMatrix& cavityGpst, double imagTolerance = 1e-6);

} // namespace cavmap
