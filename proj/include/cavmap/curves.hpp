#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cavmap/errors.hpp"

namespace cavmap {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Closed Jordan curve sampled at N equispaced parameter values on (-pi, pi].
///
/// Nodes and parameter derivatives are stored per node; the parameterization
/// is 2*pi-periodic by construction. Instances are immutable after
/// construction and safe to share between threads.
class ParamCurve {
public:
    /// Validates N even and >= 16, regularity |dz| > 0 at every node and
    /// counterclockwise orientation (positive signed area).
    ParamCurve(std::vector<Complex> nodes, std::vector<Complex> derivatives);

    int size() const { return static_cast<int>(nodes_.size()); }
    /// Parameter value of node j, in (-pi, pi].
    double parameter(int j) const { return -kPi + kTwoPi * (j + 1) / size(); }

    const std::vector<Complex>& nodes() const { return nodes_; }
    const std::vector<Complex>& derivatives() const { return derivs_; }
    bool counterclockwise() const { return true; }

    /// Largest pairwise node distance.
    double diameter() const;
    /// Dilation about the origin by s > 0.
    ParamCurve scaledBy(double s) const;

private:
    std::vector<Complex> nodes_;
    std::vector<Complex> derivs_;
};

/// Truncated exterior map z -> a1*z + a0 + sum_{m>=1} a_{-m} z^{-m}.
/// a1 != 0 is enforced; canonical form has a1 real and positive.
struct LaurentMap {
    Complex a1{1.0, 0.0};
    Complex a0{0.0, 0.0};
    std::vector<Complex> negCoeffs; // a_{-1}, a_{-2}, ...

    int order() const { return static_cast<int>(negCoeffs.size()); }
    /// Coefficient a_k for any k (zero outside the stored range, k <= 1).
    Complex coeff(int k) const;

    Complex eval(Complex w) const;
    Complex derivative(Complex w) const;

    /// Reparameterized copy with a1 real positive (same image curve).
    LaurentMap canonicalized() const;
    /// Coefficients of the dilated cavity s*image.
    LaurentMap scaledBy(double s) const;
};

/// Coefficients a_k^n of the Laurent series of phi^n, k in {-n*M, ..., n}.
class LaurentSeriesPower {
public:
    LaurentSeriesPower(int exponent, int lowest, std::vector<Complex> coeffs)
        : n_(exponent), lo_(lowest), c_(std::move(coeffs)) {}

    int exponent() const { return n_; }
    int lowestIndex() const { return lo_; }
    int highestIndex() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    Complex coeff(int k) const {
        if (k < lo_ || k > highestIndex()) return {0.0, 0.0};
        return c_[static_cast<std::size_t>(k - lo_)];
    }

private:
    int n_;
    int lo_;
    std::vector<Complex> c_;
};

/// Axis-aligned ellipse t -> (a cos t, b sin t), counterclockwise.
ParamCurve ellipse(double semiMajor, double semiMinor, int nodeCount);

/// Boundary curve t -> phi(e^{it}) of a Laurent map, with derivatives
/// i e^{it} phi'(e^{it}). Throws JordanCurveError when the sampled image
/// self-intersects or the derivative degenerates.
ParamCurve fromLaurent(const LaurentMap& map, int nodeCount);

/// Exact coefficient convolution of the map sequence with itself n times.
/// No in-range coefficient is ever dropped.
LaurentSeriesPower powerCoeffs(const LaurentMap& map, int n);

/// Laurent coefficients b_1, b_0, b_{-1}, ..., b_{-order} of the inverse map,
/// via b_1 = 1/a_1, b_0 = -a_0/a_1 and b_{-m} = -(coefficient of z^{-1} in
/// phi^m)/m.
LaurentMap invertMap(const LaurentMap& map, int order);

/// Minimum-node-distance injectivity screen on a fine grid; throws
/// JordanCurveError on failure. Pairs closer than one grid step in parameter
/// are exempt.
void checkInjective(const LaurentMap& map, int fineNodes = 1024);

} // namespace cavmap
