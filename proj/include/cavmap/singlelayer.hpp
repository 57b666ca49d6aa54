#pragma once

#include <Eigen/Dense>

#include "cavmap/curves.hpp"

namespace cavmap {

/// Quadrature carrier on a closed curve: trapezoidal arc-length weights and
/// unit outward normals at the nodes.
struct BoundaryGrid {
    ParamCurve curve;
    Eigen::VectorXd weights;
    std::vector<Complex> normals;
    double arcLength = 0.0;
    double diameter = 0.0;

    int size() const { return curve.size(); }
};

BoundaryGrid makeGrid(const ParamCurve& curve);

/// Nystrom matrix of the single-layer trace operator, acting on nodal density
/// values and returning nodal trace values, with its LU factorization.
///
/// The log singularity is split off as -(1/4pi) log(4 sin^2((t-s)/2)) and
/// integrated with exact Fourier weights; the analytic remainder goes through
/// the plain trapezoidal rule, with diagonal limit -(1/2pi) log|x'(t)|.
class SingleLayerOperator {
public:
    SingleLayerOperator(BoundaryGrid grid, Eigen::MatrixXd matrix);

    const BoundaryGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    double rcond() const { return rcond_; }

    /// Density from trace (real or complex nodal values).
    Eigen::VectorXd solve(const Eigen::VectorXd& trace) const;
    Eigen::VectorXcd solve(const Eigen::VectorXcd& trace) const;
    Eigen::MatrixXd solveMatrix(const Eigen::MatrixXd& traces) const;
    /// Throws CapacityError when the matrix is numerically singular.
    void requireInvertible() const;
    /// Trace from density.
    Eigen::VectorXd apply(const Eigen::VectorXd& density) const { return matrix_ * density; }

private:
    BoundaryGrid grid_;
    Eigen::MatrixXd matrix_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double rcond_ = 0.0;
};

SingleLayerOperator assembleSingleLayer(const BoundaryGrid& grid);

/// Dense kernel matrix G(x_target - y_source) with source quadrature weights;
/// smooth kernel, plain trapezoid. Throws GeometryError when the curves touch.
Eigen::MatrixXd crossLayer(const BoundaryGrid& source, const BoundaryGrid& target);

/// Equilibrium density, its constant trace and the logarithmic capacity.
struct Equilibrium {
    Eigen::VectorXd density;
    double capacity = 0.0;
    double constantTrace = 0.0;
};

/// Solves the bordered system [S, -1; w^T, 0] [e; c] = [0; 1];
/// capacity = exp(-2 pi c). Throws CapacityError when the system is singular.
Equilibrium equilibrium(const SingleLayerOperator& S);

/// Solution of the coupled two-boundary system for one Dirichlet datum.
struct CoupledSolution {
    Eigen::VectorXd cavityDensity; // p-hat on gamma, mean-zero
    Eigen::VectorXd outerDensity;  // q-hat on Gamma
    double cavityConstant = 0.0;   // c^f
};

/// Factorization of the block system
///   [ S_gamma          X_{Gamma->gamma}  -1 ] [p]   [0]
///   [ X_{gamma->Gamma} S_Gamma            0 ] [q] = [f]
///   [ w_gamma^T        0                  0 ] [c]   [0]
/// reusable across right-hand sides.
class CoupledSolver {
public:
    CoupledSolver(const SingleLayerOperator& cavity, const SingleLayerOperator& outer);

    CoupledSolution solve(const Eigen::VectorXd& outerTrace) const;
    bool conditionWarning() const { return conditionWarning_; }
    double rcond() const { return rcond_; }

private:
    int nCavity_;
    int nOuter_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double rcond_ = 0.0;
    bool conditionWarning_ = false;
};

/// Matrix R of the measurement operator S_Gamma(Lambda_gamma - Lambda_0) in a
/// given trace basis, together with the geometric rescaling applied upstream.
struct MeasurementMatrix {
    int order = 0;
    Eigen::MatrixXcd entries;
    double scale = 1.0;

    static MeasurementMatrix zero(int order, double scale);
};

/// Column j solves S_Gamma g-hat = g_j and the coupled system with f = g_j;
/// the entry is the duality pairing of the density difference q-hat - g-hat
/// with f_i under arc-length weights (jump-relation route, no normal
/// derivatives).
MeasurementMatrix assembleMeasurement(const SingleLayerOperator& outer,
                                      const CoupledSolver& coupled,
                                      const Eigen::MatrixXcd& basisTraces,
                                      double scale = 1.0);

// Diagnostics for the boundary interaction operators.

/// Projection f -> f - <e, f> 1 onto the mean-free trace space H.
Eigen::VectorXd projectTrace(const BoundaryGrid& grid, const Equilibrium& eq,
                             const Eigen::VectorXd& trace);

/// Half-order pairing <f, g> = sum w (S^{-1} Pi f) (Pi g), complex-bilinear.
double halfPairing(const SingleLayerOperator& S, const Equilibrium& eq,
                   const Eigen::VectorXd& f, const Eigen::VectorXd& g);
Complex halfPairing(const SingleLayerOperator& S, const Equilibrium& eq,
                    const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

/// Nodal matrix of K_source^target: q -> Pi_target Tr_target S_source
/// (S_source^{-1} q).
Eigen::MatrixXd interactionNodal(const SingleLayerOperator& source,
                                 const BoundaryGrid& target, const Equilibrium& targetEq);

/// Largest eigenvalue of a self-adjoint positive operator on H(Gamma) by
/// power iteration in the half-order inner product.
double spectralRadiusSelfAdjoint(const Eigen::MatrixXd& op, const SingleLayerOperator& S,
                                 const Equilibrium& eq, int maxIterations = 5000,
                                 double tolerance = 1e-13);

} // namespace cavmap
