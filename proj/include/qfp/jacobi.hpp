#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qfp/matrix.hpp"

namespace qfp {

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector for values[k]
};

// Cyclic Jacobi diagonalization of a complex Hermitian matrix. Each sweep
// visits every off-diagonal pair (p,q) and annihilates it with the unitary
// rotation G = [[c, -s e^{i phi}], [s e^{-i phi}, c]], phi = arg(a_pq);
// conjugating by diag(e^{i phi/2}, e^{-i phi/2}) reduces the 2x2 block to
// the real symmetric case, where the standard rotation angle applies.
inline EigenSystem jacobi_eigensystem(const Matrix& input, int max_sweeps = 60,
                                      double tol = 1e-14) {
    const double scale = std::max(1.0, max_abs_entry(input));
    if (!is_hermitian(input, 1e-12 * scale))
        throw std::invalid_argument("jacobi: input is not Hermitian");

    const int n = input.dim;
    Matrix m = input;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(m.at(p, q));
        if (std::sqrt(off) < tol * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const std::complex<double> apq = m.at(p, q);
                const double mag = std::abs(apq);
                if (mag < tol * scale * 1e-2) continue;

                const double app = m.at(p, p).real();
                const double aqq = m.at(q, q).real();
                const std::complex<double> phase = apq / mag;  // e^{i phi}

                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const std::complex<double> sp = s * phase;        // G_qp = conj below
                // update columns p,q of m (right-multiply by G)
                for (int i = 0; i < n; ++i) {
                    const std::complex<double> mip = m.at(i, p);
                    const std::complex<double> miq = m.at(i, q);
                    m.at(i, p) = c * mip + s * std::conj(phase) * miq;
                    m.at(i, q) = -sp * mip + c * miq;
                }
                // update rows p,q of m (left-multiply by G^dag)
                for (int j = 0; j < n; ++j) {
                    const std::complex<double> mpj = m.at(p, j);
                    const std::complex<double> mqj = m.at(q, j);
                    m.at(p, j) = c * mpj + s * phase * mqj;
                    m.at(q, j) = -std::conj(sp) * mpj + c * mqj;
                }
                // accumulate eigenvectors (right-multiply V by G)
                for (int i = 0; i < n; ++i) {
                    const std::complex<double> vip = v.at(i, p);
                    const std::complex<double> viq = v.at(i, q);
                    v.at(i, p) = c * vip + s * std::conj(phase) * viq;
                    v.at(i, q) = -sp * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return m.at(a, a).real() < m.at(b, b).real(); });

    EigenSystem sys;
    sys.vectors = Matrix(n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        sys.values.push_back(m.at(src, src).real());
        for (int i = 0; i < n; ++i) sys.vectors.at(i, k) = v.at(i, src);
    }
    return sys;
}

inline std::vector<double> hermitian_eigenvalues(const Matrix& m) {
    return jacobi_eigensystem(m).values;
}

}  // namespace qfp
