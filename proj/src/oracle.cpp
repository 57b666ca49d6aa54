#include "cavmap/oracle.hpp"

#include <cmath>
#include <vector>

namespace cavmap {

OracleMoments momentsFromMap(const LaurentMap& map, int order) {
    if (order < 1) throw BoundError("moment order must be >= 1");
    const int mapOrder = map.order();

    std::vector<LaurentSeriesPower> powers;
    powers.reserve(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m) powers.push_back(powerCoeffs(map, m));

    // Integrand frequencies lie in [-(order*mapOrder + order), 2*order];
    // the uniform rule is exact once nq exceeds the bandwidth.
    int nq = 2 * (order * (mapOrder + 1) + 2 * order) + 8;
    nq = std::max(nq, 4 * (order + 1));

    OracleMoments out;
    out.order = order;
    out.mu = Eigen::MatrixXcd::Zero(order, order);
    out.nu = Eigen::MatrixXcd::Zero(order, order);

    // phiPow(j, m-1) = phi^m(e^{it_j}); dplus(j, m'-1) = e^{it}(phi_+^{m'})'.
    Eigen::MatrixXcd phiPow(nq, order), dplus(nq, order);
    for (int j = 0; j < nq; ++j) {
        const double t = kTwoPi * j / nq;
        for (int m = 1; m <= order; ++m) {
            const LaurentSeriesPower& p = powers[static_cast<std::size_t>(m - 1)];
            Complex sum{0.0, 0.0};
            for (int k = p.lowestIndex(); k <= p.highestIndex(); ++k) {
                sum += p.coeff(k) * std::polar(1.0, k * t);
            }
            phiPow(j, m - 1) = sum;
            Complex dsum{0.0, 0.0};
            for (int k = 1; k <= p.highestIndex(); ++k) {
                dsum += static_cast<double>(k) * p.coeff(k) * std::polar(1.0, k * t);
            }
            dplus(j, m - 1) = dsum;
        }
    }

    const double h = kTwoPi / nq;
    for (int m = 1; m <= order; ++m) {
        for (int mp = 1; mp <= order; ++mp) {
            Complex muAcc{0.0, 0.0}, nuAcc{0.0, 0.0};
            for (int j = 0; j < nq; ++j) {
                muAcc += std::conj(dplus(j, mp - 1)) * phiPow(j, m - 1);
                nuAcc += dplus(j, mp - 1) * phiPow(j, m - 1);
            }
            out.mu(m - 1, mp - 1) = h * muAcc;
            out.nu(m - 1, mp - 1) = h * nuAcc;
        }
    }
    return out;
}

LaurentMap laurentInversionOracle(const LaurentMap& map, int order) {
    double coeffSum = std::abs(map.a1) + std::abs(map.a0);
    for (const Complex& c : map.negCoeffs) coeffSum += std::abs(c);
    const double radius = 3.0 * coeffSum;

    const int nq = std::max(256, 8 * (order + 2));
    std::vector<Complex> w(static_cast<std::size_t>(nq));
    for (int j = 0; j < nq; ++j) {
        const Complex z = radius * std::polar(1.0, kTwoPi * j / nq);
        Complex wj = z / map.a1; // near-identity at this radius
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            const Complex f = map.eval(wj) - z;
            if (std::abs(f) <= 1e-13 * radius) {
                converged = true;
                break;
            }
            wj -= f / map.derivative(wj);
        }
        if (!converged) {
            throw OracleError("Newton iteration for the inverse map did not converge");
        }
        w[static_cast<std::size_t>(j)] = wj;
    }

    auto fourierCoeff = [&](int k) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < nq; ++j) {
            acc += w[static_cast<std::size_t>(j)] * std::polar(1.0, -k * kTwoPi * j / nq);
        }
        return acc / static_cast<double>(nq) / std::pow(radius, k);
    };

    LaurentMap inv;
    inv.a1 = fourierCoeff(1);
    inv.a0 = fourierCoeff(0);
    inv.negCoeffs.resize(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m) {
        inv.negCoeffs[static_cast<std::size_t>(m - 1)] = fourierCoeff(-m);
    }
    return inv;
}

} // namespace cavmap
