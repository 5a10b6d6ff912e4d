#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qfp/jacobi.hpp"
#include "qfp/matrix.hpp"
#include "qfp/neldermead.hpp"
#include "qfp/pauli.hpp"
#include "qfp/rng.hpp"
#include "qfp/simulator.hpp"

// Frame-bound constants C(O_A) = sup { sum |c_O| : ||sum c_O O|| <= 1 }:
// the analytic sqrt(3) for local Pauli families, a derivative-free numeric
// optimizer for arbitrary families, and the closed-form diamond distance
// between unitary channels.

namespace qfp {

// Kronecker product of the single-qubit factors, ordered so that qubit 0 is
// the least significant index bit (matching the simulator).
inline Matrix pauli_matrix(const PauliObservable& obs) {
    auto factor = [](PauliFactor f) {
        Matrix m(2);
        switch (f) {
            case PauliFactor::I: m.at(0, 0) = 1.0; m.at(1, 1) = 1.0; break;
            case PauliFactor::X: m.at(0, 1) = 1.0; m.at(1, 0) = 1.0; break;
            case PauliFactor::Y:
                m.at(0, 1) = std::complex<double>{0.0, -1.0};
                m.at(1, 0) = std::complex<double>{0.0, 1.0};
                break;
            case PauliFactor::Z: m.at(0, 0) = 1.0; m.at(1, 1) = -1.0; break;
        }
        return m;
    };
    Matrix out = factor(obs.factors[0]);
    for (int q = 1; q < obs.n_qubits(); ++q) out = kron(factor(obs.factors[static_cast<std::size_t>(q)]), out);
    return out;
}

// Operator norm (max |eigenvalue|) of a Hermitian matrix via cyclic Jacobi.
inline double hermitian_opnorm(const Matrix& m) {
    const std::vector<double> w = hermitian_eigenvalues(m);
    return std::max(std::abs(w.front()), std::abs(w.back()));
}

// C = sqrt(3) for the local Pauli family {X_i, Y_i, Z_i}, any qubit count:
// the per-qubit Cauchy-Schwarz bound is block-additive across wires.
inline double frame_bound_analytic_local(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("frame_bound_analytic_local: n must be >= 1");
    return 1.7320508075688772935;
}

struct FrameBoundResult {
    double c_estimate = 0.0;
    std::vector<double> witness_coefficients;
    int restarts_used = 0;
    std::vector<double> objective_trace;  // best value per restart
    double std_error = 0.0;               // across restarts that reached within 1% of the best
};

inline double frame_bound_objective(const std::vector<double>& c, const std::vector<Matrix>& mats) {
    double abs_sum = 0.0;
    for (double ci : c) abs_sum += std::abs(ci);
    if (abs_sum == 0.0) return 0.0;
    Matrix combo(mats[0].dim);
    for (std::size_t i = 0; i < mats.size(); ++i)
        combo = combo + (std::complex<double>{c[i], 0.0} * mats[i]);
    const double nrm = hermitian_opnorm(combo);
    if (nrm < 1e-12) return 0.0;
    return abs_sum / nrm;
}

// Maximizes sum|c| / ||sum c_O O|| by random unit directions refined with
// Nelder-Mead. Each restart runs the simplex twice, the second pass starting
// from the first pass's output with a fresh simplex; a single pass stalls
// well short of the optimum on the 15-observable family.
inline FrameBoundResult frame_bound_numeric(const std::vector<PauliObservable>& family,
                                            int restarts, int iters, Rng& rng) {
    if (family.empty()) throw std::invalid_argument("frame_bound_numeric: family must be non-empty");
    if (restarts < 1) throw std::invalid_argument("frame_bound_numeric: restarts must be >= 1");

    std::vector<Matrix> mats;
    mats.reserve(family.size());
    for (const PauliObservable& obs : family) mats.push_back(pauli_matrix(obs));

    const std::size_t k = family.size();
    auto objective = [&](const std::vector<double>& c) { return frame_bound_objective(c, mats); };
    auto negated = [&](const std::vector<double>& c) { return -objective(c); };

    NelderMeadOptions opts;
    opts.max_iters = iters;

    FrameBoundResult result;
    result.restarts_used = restarts;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> c0(k);
        double norm2 = 0.0;
        for (double& ci : c0) {
            ci = rng.normal();
            norm2 += ci * ci;
        }
        const double norm = std::sqrt(norm2);
        if (norm > 0.0)
            for (double& ci : c0) ci /= norm;

        NelderMeadResult pass = nelder_mead_minimize(negated, c0, opts);
        pass = nelder_mead_minimize(negated, pass.x, opts);

        const double value = -pass.value;
        result.objective_trace.push_back(value);
        if (value > result.c_estimate) {
            result.c_estimate = value;
            result.witness_coefficients = pass.x;
        }
    }

    // normalize the witness so the combination has unit operator norm
    Matrix combo(mats[0].dim);
    for (std::size_t i = 0; i < k; ++i)
        combo = combo + (std::complex<double>{result.witness_coefficients[i], 0.0} * mats[i]);
    const double nrm = hermitian_opnorm(combo);
    if (nrm > 0.0)
        for (double& ci : result.witness_coefficients) ci /= nrm;

    std::vector<double> converged;
    for (double v : result.objective_trace)
        if (v >= 0.99 * result.c_estimate) converged.push_back(v);
    if (converged.size() > 1) {
        double mean = 0.0;
        for (double v : converged) mean += v;
        mean /= static_cast<double>(converged.size());
        double var = 0.0;
        for (double v : converged) var += (v - mean) * (v - mean);
        var /= static_cast<double>(converged.size() - 1);
        result.std_error = std::sqrt(var / static_cast<double>(converged.size()));
    }
    return result;
}

// ---- diamond distance between unitary channels ------------------------------

// Eigenvalues of a normal matrix: diagonalize the Hermitian part, then
// diagonalize the anti-Hermitian part restricted to each (near-)degenerate
// eigenspace, and read lambda_k = v_k^dag M v_k in the combined basis.
inline std::vector<std::complex<double>> normal_eigenvalues(const Matrix& m) {
    const int n = m.dim;
    const Matrix mh = adjoint(m);
    Matrix re(n), im(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            re.at(i, j) = 0.5 * (m.at(i, j) + mh.at(i, j));
            im.at(i, j) = std::complex<double>{0.0, -0.5} * (m.at(i, j) - mh.at(i, j));
        }

    const EigenSystem base = jacobi_eigensystem(re);
    Matrix basis = base.vectors;

    const double group_tol = 1e-8 * std::max(1.0, std::abs(base.values.back()) +
                                                      std::abs(base.values.front()));
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && std::abs(base.values[static_cast<std::size_t>(end)] -
                                   base.values[static_cast<std::size_t>(start)]) < group_tol)
            ++end;
        const int g = end - start;
        if (g > 1) {
            Matrix sub(g);
            for (int a = 0; a < g; ++a)
                for (int b = 0; b < g; ++b) {
                    std::complex<double> acc{0.0, 0.0};
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            acc += std::conj(basis.at(i, start + a)) * im.at(i, j) *
                                   basis.at(j, start + b);
                    sub.at(a, b) = acc;
                }
            const EigenSystem rot = jacobi_eigensystem(sub);
            Matrix updated(n);
            for (int i = 0; i < n; ++i)
                for (int b = 0; b < g; ++b) {
                    std::complex<double> acc{0.0, 0.0};
                    for (int a = 0; a < g; ++a)
                        acc += basis.at(i, start + a) * rot.vectors.at(a, b);
                    updated.at(i, start + b) = acc;
                }
            for (int i = 0; i < n; ++i)
                for (int b = 0; b < g; ++b) basis.at(i, start + b) = updated.at(i, start + b);
        }
        start = end;
    }

    std::vector<std::complex<double>> eigs;
    for (int kcol = 0; kcol < n; ++kcol) {
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            std::complex<double> mv{0.0, 0.0};
            for (int j = 0; j < n; ++j) mv += m.at(i, j) * basis.at(j, kcol);
            acc += std::conj(basis.at(i, kcol)) * mv;
        }
        eigs.push_back(acc);
    }
    return eigs;
}

namespace detail {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double segment_distance_to_origin(const Point2& a, const Point2& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(-(a.x * dx + a.y * dy) / len2, 0.0, 1.0);
    const double px = a.x + t * dx, py = a.y + t * dy;
    return std::sqrt(px * px + py * py);
}

// Distance from the origin to the convex hull of a point set (0 if inside).
inline double hull_distance_to_origin(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return std::abs(a.x - b.x) < 1e-14 && std::abs(a.y - b.y) < 1e-14;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n == 1) return std::hypot(pts[0].x, pts[0].y);
    if (n == 2) return segment_distance_to_origin(pts[0], pts[1]);

    // monotone chain
    std::vector<Point2> hull(2 * n);
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0.0) --h;
        hull[h++] = pts[i];
    }
    const std::size_t lower = h + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (h >= lower && cross(hull[h - 2], hull[h - 1], pts[i]) <= 0.0) --h;
        hull[h++] = pts[i];
    }
    hull.resize(h - 1);

    if (hull.size() < 3) return segment_distance_to_origin(hull[0], hull.back());

    // inside iff the origin is on the same (left) side of every ccw edge
    bool inside = true;
    const Point2 origin{0.0, 0.0};
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2& a = hull[i];
        const Point2& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, origin) < 0.0) {
            inside = false;
            break;
        }
    }
    if (inside) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i)
        best = std::min(best, segment_distance_to_origin(hull[i], hull[(i + 1) % hull.size()]));
    return best;
}

}  // namespace detail

// Closed form for unitary channels: d = 2 sqrt(1 - dist(0, conv(spec(U^dag V)))^2),
// where spec() is the eigenvalue set on the unit circle.
inline double diamond_distance_unitary(const Matrix& u, const Matrix& v) {
    if (u.dim != v.dim) throw std::invalid_argument("diamond_distance_unitary: dimension mismatch");
    if (!is_unitary(u, 1e-10) || !is_unitary(v, 1e-10))
        throw std::invalid_argument("diamond_distance_unitary: inputs must be unitary");
    const Matrix w = adjoint(u) * v;
    const std::vector<std::complex<double>> eigs = normal_eigenvalues(w);
    std::vector<detail::Point2> pts;
    pts.reserve(eigs.size());
    for (const std::complex<double>& e : eigs) pts.push_back({e.real(), e.imag()});
    const double dist = detail::hull_distance_to_origin(std::move(pts));
    const double clamped = std::min(dist, 1.0);
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - clamped * clamped));
}

// Dense unitary of a circuit, assembled column-by-column through the simulator.
inline Matrix circuit_unitary(const Circuit& circuit) {
    const int dim = 1 << circuit.n_qubits;
    Matrix u(dim);
    for (int col = 0; col < dim; ++col) {
        std::vector<Complex> amps(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
        amps[static_cast<std::size_t>(col)] = 1.0;
        const Statevector out = run_circuit(circuit, Statevector(circuit.n_qubits, std::move(amps)));
        for (int row = 0; row < dim; ++row)
            u.at(row, col) = out.amplitudes[static_cast<std::size_t>(row)];
    }
    return u;
}

}  // namespace qfp
