#include "cavmap/singlelayer.hpp"

#include <cmath>
#include <random>

namespace cavmap {

BoundaryGrid makeGrid(const ParamCurve& curve) {
    const int n = curve.size();
    BoundaryGrid grid{curve, Eigen::VectorXd(n), {}, 0.0, 0.0};
    grid.normals.resize(static_cast<std::size_t>(n));
    const double h = kTwoPi / n;
    for (int j = 0; j < n; ++j) {
        const Complex d = curve.derivatives()[static_cast<std::size_t>(j)];
        grid.weights(j) = h * std::abs(d);
        // Tangent rotated by -90 degrees points outward for a CCW curve.
        grid.normals[static_cast<std::size_t>(j)] = Complex{0.0, -1.0} * d / std::abs(d);
    }
    grid.arcLength = grid.weights.sum();
    grid.diameter = curve.diameter();
    return grid;
}

namespace {

// Weights of the Kussmaul-Martensen rule for the 2pi-periodic log kernel:
// int log(4 sin^2((t-s)/2)) f(s) ds ~ sum_k R_{(j-k) mod N} f(t_k),
// exact for trigonometric polynomials up to degree N/2.
std::vector<double> kressWeights(int n) {
    std::vector<double> r(static_cast<std::size_t>(n));
    const int half = n / 2;
    for (int d = 0; d < n; ++d) {
        double acc = 0.0;
        for (int m = 1; m < half; ++m) {
            acc += std::cos(kTwoPi * m * d / n) / m;
        }
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        r[static_cast<std::size_t>(d)] = -(4.0 * kPi / n) * acc - (4.0 * kPi / (n * n)) * sign;
    }
    return r;
}

double estimateRcond(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) { return lu.rcond(); }

} // namespace

SingleLayerOperator::SingleLayerOperator(BoundaryGrid grid, Eigen::MatrixXd matrix)
    : grid_(std::move(grid)), matrix_(std::move(matrix)), lu_(matrix_) {
    rcond_ = estimateRcond(lu_);
}

void SingleLayerOperator::requireInvertible() const {
    // The trace operator degenerates at unit logarithmic capacity.
    if (rcond_ < 1e-14) {
        throw CapacityError("single-layer trace operator is singular; rescale the geometry");
    }
}

Eigen::VectorXd SingleLayerOperator::solve(const Eigen::VectorXd& trace) const {
    requireInvertible();
    return lu_.solve(trace);
}

Eigen::VectorXcd SingleLayerOperator::solve(const Eigen::VectorXcd& trace) const {
    requireInvertible();
    Eigen::MatrixXd rhs(trace.size(), 2);
    rhs.col(0) = trace.real();
    rhs.col(1) = trace.imag();
    Eigen::MatrixXd sol = lu_.solve(rhs);
    return sol.col(0) + Complex{0.0, 1.0} * sol.col(1);
}

Eigen::MatrixXd SingleLayerOperator::solveMatrix(const Eigen::MatrixXd& traces) const {
    requireInvertible();
    return lu_.solve(traces);
}

SingleLayerOperator assembleSingleLayer(const BoundaryGrid& grid) {
    const int n = grid.size();
    const auto& z = grid.curve.nodes();
    const auto& dz = grid.curve.derivatives();

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]) <
                1e-14 * grid.diameter) {
                throw GeometryError("curve nodes coincide");
            }
        }
    }

    const std::vector<double> logw = kressWeights(n);
    const double h = kTwoPi / n;
    Eigen::MatrixXd S(n, n);
    for (int j = 0; j < n; ++j) {
        const double tj = grid.curve.parameter(j);
        for (int k = 0; k < n; ++k) {
            double smooth;
            if (j == k) {
                smooth = -std::log(std::abs(dz[static_cast<std::size_t>(j)])) / kTwoPi;
            } else {
                const double tk = grid.curve.parameter(k);
                const double s2 = 2.0 * std::sin(0.5 * (tj - tk));
                const double r2 =
                    std::norm(z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)]);
                smooth = -std::log(r2 / (s2 * s2)) / (4.0 * kPi);
            }
            const double logPart = -logw[static_cast<std::size_t>((j - k + n) % n)] / (4.0 * kPi);
            S(j, k) = (logPart + h * smooth) * std::abs(dz[static_cast<std::size_t>(k)]);
        }
    }
    return SingleLayerOperator(grid, std::move(S));
}

namespace {

int orientationSign(Complex a, Complex b, Complex c) {
    const double cross = (b.real() - a.real()) * (c.imag() - a.imag()) -
                         (b.imag() - a.imag()) * (c.real() - a.real());
    if (cross > 0.0) return 1;
    if (cross < 0.0) return -1;
    return 0;
}

bool segmentsCross(Complex a, Complex b, Complex c, Complex d) {
    const int o1 = orientationSign(a, b, c);
    const int o2 = orientationSign(a, b, d);
    const int o3 = orientationSign(c, d, a);
    const int o4 = orientationSign(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

// Polyline intersection over the sampled boundaries.
bool boundariesCross(const BoundaryGrid& a, const BoundaryGrid& b) {
    const auto& za = a.curve.nodes();
    const auto& zb = b.curve.nodes();
    for (std::size_t i = 0; i < za.size(); ++i) {
        const Complex a0 = za[i];
        const Complex a1 = za[(i + 1) % za.size()];
        for (std::size_t j = 0; j < zb.size(); ++j) {
            if (segmentsCross(a0, a1, zb[j], zb[(j + 1) % zb.size()])) return true;
        }
    }
    return false;
}

} // namespace

Eigen::MatrixXd crossLayer(const BoundaryGrid& source, const BoundaryGrid& target) {
    const int nt = target.size();
    const int ns = source.size();
    const double refScale = std::max(source.diameter, target.diameter);
    if (boundariesCross(source, target)) {
        throw GeometryError("boundaries touch or intersect");
    }
    Eigen::MatrixXd X(nt, ns);
    for (int j = 0; j < nt; ++j) {
        const Complex x = target.curve.nodes()[static_cast<std::size_t>(j)];
        for (int k = 0; k < ns; ++k) {
            const double r = std::abs(x - source.curve.nodes()[static_cast<std::size_t>(k)]);
            if (r < 1e-8 * refScale) {
                throw GeometryError("boundaries touch or intersect");
            }
            X(j, k) = -std::log(r) / kTwoPi * source.weights(k);
        }
    }
    return X;
}

Equilibrium equilibrium(const SingleLayerOperator& S) {
    const int n = S.grid().size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, n + 1);
    A.topLeftCorner(n, n) = S.matrix();
    A.col(n).head(n).setConstant(-1.0);
    A.row(n).head(n) = S.grid().weights.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rcond() < 1e-14) {
        throw CapacityError("equilibrium system is singular; rescale the geometry");
    }
    Eigen::VectorXd sol = lu.solve(rhs);
    Equilibrium eq;
    eq.density = sol.head(n);
    eq.constantTrace = sol(n);
    eq.capacity = std::exp(-kTwoPi * eq.constantTrace);
    return eq;
}

CoupledSolver::CoupledSolver(const SingleLayerOperator& cavity, const SingleLayerOperator& outer)
    : nCavity_(cavity.grid().size()), nOuter_(outer.grid().size()) {
    const Eigen::MatrixXd outerToCavity = crossLayer(outer.grid(), cavity.grid());
    const Eigen::MatrixXd cavityToOuter = crossLayer(cavity.grid(), outer.grid());

    const int n = nCavity_ + nOuter_ + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    A.topLeftCorner(nCavity_, nCavity_) = cavity.matrix();
    A.block(0, nCavity_, nCavity_, nOuter_) = outerToCavity;
    A.col(n - 1).head(nCavity_).setConstant(-1.0);
    A.block(nCavity_, 0, nOuter_, nCavity_) = cavityToOuter;
    A.block(nCavity_, nCavity_, nOuter_, nOuter_) = outer.matrix();
    A.row(n - 1).head(nCavity_) = cavity.grid().weights.transpose();

    lu_.compute(A);
    rcond_ = lu_.rcond();
    conditionWarning_ = rcond_ > 0.0 && 1.0 / rcond_ > 1e12;
}

CoupledSolution CoupledSolver::solve(const Eigen::VectorXd& outerTrace) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nCavity_ + nOuter_ + 1);
    rhs.segment(nCavity_, nOuter_) = outerTrace;
    Eigen::VectorXd sol = lu_.solve(rhs);
    CoupledSolution out;
    out.cavityDensity = sol.head(nCavity_);
    out.outerDensity = sol.segment(nCavity_, nOuter_);
    out.cavityConstant = sol(nCavity_ + nOuter_);
    return out;
}

MeasurementMatrix MeasurementMatrix::zero(int order, double scale) {
    return MeasurementMatrix{order, Eigen::MatrixXcd::Zero(2 * order, 2 * order), scale};
}

MeasurementMatrix assembleMeasurement(const SingleLayerOperator& outer,
                                      const CoupledSolver& coupled,
                                      const Eigen::MatrixXcd& basisTraces, double scale) {
    const int n = outer.grid().size();
    const int cols = static_cast<int>(basisTraces.cols());
    if (basisTraces.rows() != n) {
        throw DiscretizationError("basis traces do not match the outer grid");
    }

    Eigen::MatrixXcd densityDiff(n, cols);
    for (int j = 0; j < cols; ++j) {
        const Eigen::VectorXcd g = basisTraces.col(j);
        const Eigen::VectorXcd gHat = outer.solve(g);
        const CoupledSolution re = coupled.solve(Eigen::VectorXd(g.real()));
        const CoupledSolution im = coupled.solve(Eigen::VectorXd(g.imag()));
        const Eigen::VectorXcd qHat =
            re.outerDensity + Complex{0.0, 1.0} * im.outerDensity;
        densityDiff.col(j) = qHat - gHat;
    }

    MeasurementMatrix R;
    R.order = cols / 2;
    R.scale = scale;
    R.entries = basisTraces.transpose() * outer.grid().weights.asDiagonal() * densityDiff;
    return R;
}

Eigen::VectorXd projectTrace(const BoundaryGrid& grid, const Equilibrium& eq,
                             const Eigen::VectorXd& trace) {
    const double mean = (grid.weights.array() * eq.density.array() * trace.array()).sum();
    return trace.array() - mean;
}

double halfPairing(const SingleLayerOperator& S, const Equilibrium& eq,
                   const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    const Eigen::VectorXd pf = projectTrace(S.grid(), eq, f);
    const Eigen::VectorXd pg = projectTrace(S.grid(), eq, g);
    const Eigen::VectorXd density = S.solve(pf);
    return (S.grid().weights.array() * density.array() * pg.array()).sum();
}

Complex halfPairing(const SingleLayerOperator& S, const Equilibrium& eq,
                    const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
    const double rr = halfPairing(S, eq, Eigen::VectorXd(f.real()), Eigen::VectorXd(g.real()));
    const double ii = halfPairing(S, eq, Eigen::VectorXd(f.imag()), Eigen::VectorXd(g.imag()));
    const double ri = halfPairing(S, eq, Eigen::VectorXd(f.real()), Eigen::VectorXd(g.imag()));
    const double ir = halfPairing(S, eq, Eigen::VectorXd(f.imag()), Eigen::VectorXd(g.real()));
    return Complex{rr - ii, ri + ir};
}

Eigen::MatrixXd interactionNodal(const SingleLayerOperator& source, const BoundaryGrid& target,
                                 const Equilibrium& targetEq) {
    const Eigen::MatrixXd X = crossLayer(source.grid(), target);
    // Columns of S^{-1} via multi-RHS solve, then project the target traces.
    Eigen::MatrixXd K = X * source.solveMatrix(Eigen::MatrixXd::Identity(
                                source.grid().size(), source.grid().size()));
    const Eigen::RowVectorXd meanForm =
        (target.weights.array() * targetEq.density.array()).matrix().transpose();
    K -= Eigen::VectorXd::Ones(target.size()) * (meanForm * K);
    return K;
}

double spectralRadiusSelfAdjoint(const Eigen::MatrixXd& op, const SingleLayerOperator& S,
                                 const Equilibrium& eq, int maxIterations, double tolerance) {
    const int n = static_cast<int>(op.rows());
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = unif(gen);
    v = projectTrace(S.grid(), eq, v);

    auto hNorm = [&](const Eigen::VectorXd& x) { return std::sqrt(halfPairing(S, eq, x, x)); };
    v /= hNorm(v);

    double lambda = 0.0;
    for (int it = 0; it < maxIterations; ++it) {
        const Eigen::VectorXd w = op * v;
        const double rayleigh = halfPairing(S, eq, w, v);
        const double norm = hNorm(w);
        if (norm == 0.0) return 0.0;
        v = w / norm;
        if (it > 2 && std::abs(rayleigh - lambda) <= tolerance * std::abs(rayleigh)) {
            return rayleigh;
        }
        lambda = rayleigh;
    }
    return lambda;
}

} // namespace cavmap
