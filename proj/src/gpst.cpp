#include "cavmap/gpst.hpp"

#include <cmath>

namespace cavmap {

HarmonicBasis buildBasis(const BoundaryGrid& grid, const Equilibrium& eq, int order,
                         Complex center) {
    if (order < 1) throw BoundError("basis order must be >= 1");
    const int n = grid.size();
    HarmonicBasis basis;
    basis.order = order;
    basis.center = center;
    basis.constants.resize(static_cast<std::size_t>(order));
    basis.traces.resize(n, 2 * order);

    Eigen::VectorXcd power = Eigen::VectorXcd::Ones(n);
    for (int m = 1; m <= order; ++m) {
        for (int j = 0; j < n; ++j) {
            power(j) *= grid.curve.nodes()[static_cast<std::size_t>(j)] - center;
        }
        Complex mean{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            mean += grid.weights(j) * eq.density(j) * power(j);
        }
        basis.constants[static_cast<std::size_t>(m - 1)] = -mean;
        basis.traces.col(m - 1) = power.array() - mean;
        basis.traces.col(order + m - 1) = basis.traces.col(m - 1).conjugate();
    }
    return basis;
}

GpstMatrix gramMatrix(const SingleLayerOperator& outer, const Equilibrium& eq,
                      const HarmonicBasis& basis) {
    const int n = outer.grid().size();
    const int cols = static_cast<int>(basis.traces.cols());

    // Project each trace onto H(Gamma); the basis is mean-free by
    // construction, so this only removes roundoff.
    Eigen::MatrixXcd projected(n, cols);
    const Eigen::RowVectorXd meanForm =
        (outer.grid().weights.array() * eq.density.array()).matrix().transpose();
    for (int j = 0; j < cols; ++j) {
        const Complex mean = (meanForm.cast<Complex>() * basis.traces.col(j))(0, 0);
        projected.col(j) = basis.traces.col(j).array() - mean;
    }

    Eigen::MatrixXd realParts(n, 2 * cols);
    realParts.leftCols(cols) = projected.real();
    realParts.rightCols(cols) = projected.imag();
    const Eigen::MatrixXd densities = outer.solveMatrix(realParts);
    const Eigen::MatrixXcd density =
        densities.leftCols(cols) + Complex{0.0, 1.0} * densities.rightCols(cols);

    GpstMatrix g;
    g.order = basis.order;
    g.boundary = GpstBoundary::OuterExact;
    g.entries = density.transpose() * outer.grid().weights.asDiagonal() * projected;
    return g;
}

GpstMatrix recoveredGpst(const GpstMatrix& outerGram, const MeasurementMatrix& measurement) {
    if (outerGram.entries.rows() != measurement.entries.rows()) {
        throw MeasurementError("Gram and measurement matrices have mismatched order");
    }
    const Eigen::MatrixXcd sum = outerGram.entries + measurement.entries;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sum);
    if (lu.rcond() < 1e-14) {
        throw MeasurementError("Q_Gamma + R is numerically singular");
    }
    GpstMatrix g;
    g.order = outerGram.order;
    g.boundary = GpstBoundary::CavityRecovered;
    g.entries = outerGram.entries * lu.solve(measurement.entries);
    return g;
}

MomentSequences extractMoments(const GpstMatrix& cavityGpst, double imagTolerance) {
    const int order = cavityGpst.order;
    if (order < 2) throw BoundError("moment extraction requires order >= 2");

    MomentSequences out;
    out.mu.resize(static_cast<std::size_t>(order));
    out.nu.resize(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m) {
        out.mu[static_cast<std::size_t>(m - 1)] = 0.5 * cavityGpst.entries(m - 1, order);
        out.nu[static_cast<std::size_t>(m - 1)] = 0.5 * cavityGpst.entries(m - 1, 0);
    }

    const Complex mu1 = out.mu[0];
    if (!(mu1.real() > 0.0)) {
        throw MeasurementError("mu_1 must be positive");
    }
    if (std::abs(mu1.imag()) > imagTolerance * std::abs(mu1)) {
        throw MeasurementError("mu_1 is not real within tolerance");
    }
    out.mu[0] = Complex{mu1.real(), 0.0};
    return out;
}

} // namespace cavmap
