#include "cavmap/curves.hpp"

#include <algorithm>
#include <cmath>

namespace cavmap {

namespace {

void requireValidNodeCount(int n) {
    if (n < 16 || n % 2 != 0) {
        throw DiscretizationError("node count must be even and >= 16, got " +
                                  std::to_string(n));
    }
}

} // namespace

ParamCurve::ParamCurve(std::vector<Complex> nodes, std::vector<Complex> derivatives)
    : nodes_(std::move(nodes)), derivs_(std::move(derivatives)) {
    requireValidNodeCount(static_cast<int>(nodes_.size()));
    if (derivs_.size() != nodes_.size()) {
        throw DiscretizationError("node/derivative count mismatch");
    }
    double scale = 0.0;
    for (const Complex& d : derivs_) scale = std::max(scale, std::abs(d));
    for (const Complex& d : derivs_) {
        if (std::abs(d) <= 1e-12 * scale) {
            throw JordanCurveError("parameterization is not regular: derivative vanishes");
        }
    }
    // Signed area (1/2) * integral Im(conj(z) z') dt, trapezoidal.
    double area = 0.0;
    const double h = kTwoPi / static_cast<double>(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        area += 0.5 * h * std::imag(std::conj(nodes_[j]) * derivs_[j]);
    }
    if (area <= 0.0) {
        throw JordanCurveError("curve must be parameterized counterclockwise");
    }
}

double ParamCurve::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
            d = std::max(d, std::abs(nodes_[i] - nodes_[j]));
        }
    }
    return d;
}

ParamCurve ParamCurve::scaledBy(double s) const {
    if (s <= 0.0) throw GeometryError("scale factor must be positive");
    std::vector<Complex> n(nodes_), d(derivs_);
    for (auto& z : n) z *= s;
    for (auto& z : d) z *= s;
    return ParamCurve(std::move(n), std::move(d));
}

Complex LaurentMap::coeff(int k) const {
    if (k == 1) return a1;
    if (k == 0) return a0;
    if (k < 0 && -k <= order()) return negCoeffs[static_cast<std::size_t>(-k - 1)];
    return {0.0, 0.0};
}

Complex LaurentMap::eval(Complex w) const {
    Complex acc = a1 * w + a0;
    Complex invw = 1.0 / w;
    Complex p = invw;
    for (const Complex& c : negCoeffs) {
        acc += c * p;
        p *= invw;
    }
    return acc;
}

Complex LaurentMap::derivative(Complex w) const {
    Complex acc = a1;
    Complex invw = 1.0 / w;
    Complex p = invw * invw;
    for (int m = 1; m <= order(); ++m) {
        acc -= static_cast<double>(m) * negCoeffs[static_cast<std::size_t>(m - 1)] * p;
        p *= invw;
    }
    return acc;
}

LaurentMap LaurentMap::canonicalized() const {
    if (a1 == Complex{0.0, 0.0}) throw JordanCurveError("leading coefficient a1 must be nonzero");
    const double theta = std::arg(a1);
    // Rotate the parameter, w -> e^{-i theta} w: a_k picks up e^{-ik theta},
    // so the image curve is unchanged while a1 becomes |a1|.
    LaurentMap out;
    out.a1 = std::abs(a1);
    out.a0 = a0;
    out.negCoeffs.resize(negCoeffs.size());
    for (int m = 1; m <= order(); ++m) {
        out.negCoeffs[static_cast<std::size_t>(m - 1)] =
            negCoeffs[static_cast<std::size_t>(m - 1)] *
            std::polar(1.0, static_cast<double>(m) * theta);
    }
    return out;
}

LaurentMap LaurentMap::scaledBy(double s) const {
    LaurentMap out = *this;
    out.a1 *= s;
    out.a0 *= s;
    for (auto& c : out.negCoeffs) c *= s;
    return out;
}

ParamCurve ellipse(double semiMajor, double semiMinor, int nodeCount) {
    if (!(semiMajor >= semiMinor && semiMinor > 0.0)) {
        throw GeometryError("ellipse requires semiMajor >= semiMinor > 0");
    }
    requireValidNodeCount(nodeCount);
    std::vector<Complex> nodes(static_cast<std::size_t>(nodeCount));
    std::vector<Complex> derivs(static_cast<std::size_t>(nodeCount));
    for (int j = 0; j < nodeCount; ++j) {
        const double t = -kPi + kTwoPi * (j + 1) / nodeCount;
        nodes[static_cast<std::size_t>(j)] = {semiMajor * std::cos(t), semiMinor * std::sin(t)};
        derivs[static_cast<std::size_t>(j)] = {-semiMajor * std::sin(t), semiMinor * std::cos(t)};
    }
    return ParamCurve(std::move(nodes), std::move(derivs));
}

void checkInjective(const LaurentMap& map, int fineNodes) {
    if (map.a1 == Complex{0.0, 0.0}) throw JordanCurveError("leading coefficient a1 must be nonzero");
    const int n = std::max(fineNodes, 4 * map.order() + 16);
    std::vector<Complex> z(static_cast<std::size_t>(n));
    double diam = 0.0;
    for (int j = 0; j < n; ++j) {
        const Complex w = std::polar(1.0, -kPi + kTwoPi * (j + 1) / n);
        z[static_cast<std::size_t>(j)] = map.eval(w);
        if (std::abs(map.derivative(w)) < 1e-12 * std::abs(map.a1)) {
            throw JordanCurveError("map derivative vanishes on the unit circle");
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            diam = std::max(diam, std::abs(z[static_cast<std::size_t>(i)] -
                                           z[static_cast<std::size_t>(j)]));
        }
    }
    // Pairs more than one grid step apart in parameter must stay separated.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // cyclically adjacent
            const double dist = std::abs(z[static_cast<std::size_t>(i)] -
                                         z[static_cast<std::size_t>(j)]);
            if (dist <= 1e-8 * diam) {
                throw JordanCurveError("sampled boundary self-intersects");
            }
        }
    }
}

ParamCurve fromLaurent(const LaurentMap& map, int nodeCount) {
    requireValidNodeCount(nodeCount);
    checkInjective(map, std::max(nodeCount, 512));
    std::vector<Complex> nodes(static_cast<std::size_t>(nodeCount));
    std::vector<Complex> derivs(static_cast<std::size_t>(nodeCount));
    for (int j = 0; j < nodeCount; ++j) {
        const double t = -kPi + kTwoPi * (j + 1) / nodeCount;
        const Complex w = std::polar(1.0, t);
        nodes[static_cast<std::size_t>(j)] = map.eval(w);
        derivs[static_cast<std::size_t>(j)] = Complex{0.0, 1.0} * w * map.derivative(w);
    }
    return ParamCurve(std::move(nodes), std::move(derivs));
}

LaurentSeriesPower powerCoeffs(const LaurentMap& map, int n) {
    if (n < 1) throw BoundError("power exponent must be >= 1");
    const int M = map.order();
    // Base sequence supported on [-M, 1].
    std::vector<Complex> base(static_cast<std::size_t>(M + 2));
    for (int k = -M; k <= 1; ++k) base[static_cast<std::size_t>(k + M)] = map.coeff(k);

    std::vector<Complex> acc = base;
    int lo = -M;
    for (int p = 2; p <= n; ++p) {
        const int accHi = lo + static_cast<int>(acc.size()) - 1;
        const int newLo = lo - M;
        const int newHi = accHi + 1;
        std::vector<Complex> next(static_cast<std::size_t>(newHi - newLo + 1), Complex{0.0, 0.0});
        for (int i = 0; i < static_cast<int>(acc.size()); ++i) {
            if (acc[static_cast<std::size_t>(i)] == Complex{0.0, 0.0}) continue;
            for (int j = 0; j < static_cast<int>(base.size()); ++j) {
                next[static_cast<std::size_t>(i + j)] +=
                    acc[static_cast<std::size_t>(i)] * base[static_cast<std::size_t>(j)];
            }
        }
        acc = std::move(next);
        lo = newLo;
    }
    return LaurentSeriesPower(n, lo, std::move(acc));
}

LaurentMap invertMap(const LaurentMap& map, int order) {
    if (map.a1 == Complex{0.0, 0.0}) throw JordanCurveError("leading coefficient a1 must be nonzero");
    LaurentMap inv;
    inv.a1 = 1.0 / map.a1;
    inv.a0 = -map.a0 / map.a1;
    inv.negCoeffs.assign(static_cast<std::size_t>(order), Complex{0.0, 0.0});
    for (int m = 1; m <= order; ++m) {
        const Complex am1 = powerCoeffs(map, m).coeff(-1);
        inv.negCoeffs[static_cast<std::size_t>(m - 1)] = -am1 / static_cast<double>(m);
    }
    return inv;
}

} // namespace cavmap
