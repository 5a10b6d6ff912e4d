#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qfp {

// Dense complex square matrix, row-major. Dimensions here are tiny
// (2^n for n <= 4 qubits), so no attempt at anything clever.
struct Matrix {
    int dim = 0;
    std::vector<std::complex<double>> a;

    Matrix() = default;
    explicit Matrix(int d) : dim(d), a(static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
        if (d < 1) throw std::invalid_argument("matrix: dimension must be positive");
    }

    std::complex<double>& at(int i, int j) {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
                 static_cast<std::size_t>(j)];
    }
    const std::complex<double>& at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim) +
                 static_cast<std::size_t>(j)];
    }

    static Matrix identity(int d) {
        Matrix m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("matrix multiply: dimension mismatch");
    Matrix out(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int k = 0; k < x.dim; ++k) {
            const std::complex<double> xik = x.at(i, k);
            if (xik == std::complex<double>{}) continue;
            for (int j = 0; j < x.dim; ++j) out.at(i, j) += xik * y.at(k, j);
        }
    return out;
}

inline Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("matrix add: dimension mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
    return out;
}

inline Matrix operator*(std::complex<double> c, const Matrix& x) {
    Matrix out = x;
    for (auto& v : out.a) v *= c;
    return out;
}

inline Matrix adjoint(const Matrix& x) {
    Matrix out(x.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) out.at(i, j) = std::conj(x.at(j, i));
    return out;
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix out(x.dim * y.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j)
            for (int k = 0; k < y.dim; ++k)
                for (int l = 0; l < y.dim; ++l)
                    out.at(i * y.dim + k, j * y.dim + l) = x.at(i, j) * y.at(k, l);
    return out;
}

inline double max_abs_entry(const Matrix& x) {
    double m = 0.0;
    for (const auto& v : x.a) m = std::max(m, std::abs(v));
    return m;
}

inline bool is_hermitian(const Matrix& x, double tol = 1e-12) {
    for (int i = 0; i < x.dim; ++i)
        for (int j = i; j < x.dim; ++j)
            if (std::abs(x.at(i, j) - std::conj(x.at(j, i))) > tol) return false;
    return true;
}

inline bool is_unitary(const Matrix& x, double tol = 1e-12) {
    const Matrix p = adjoint(x) * x;
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < x.dim; ++j) {
            const std::complex<double> expect = i == j ? 1.0 : 0.0;
            if (std::abs(p.at(i, j) - expect) > tol) return false;
        }
    return true;
}

}  // namespace qfp
