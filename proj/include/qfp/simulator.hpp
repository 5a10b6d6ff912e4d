#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfp/pauli.hpp"
#include "qfp/rng.hpp"

// Minimal pure-state simulator for up to 4 qubits.
//
// Conventions (held throughout the project):
//   * bit ordering is little-endian: qubit 0 is the least significant bit of
//     a basis index, and character k of a counts bitstring is qubit k's bit;
//   * S = diag(1, i), P(theta) = diag(1, e^{i theta}),
//     RZ(theta) = diag(e^{-i theta/2}, e^{i theta/2});
//   * noise acts on the measurement distribution only, never mid-circuit.

namespace qfp {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 4;

struct Statevector {
    int n_qubits = 0;
    std::vector<Complex> amplitudes;

    Statevector() = default;
    Statevector(int n, std::vector<Complex> amps) : n_qubits(n), amplitudes(std::move(amps)) {
        if (n < 1 || n > kMaxQubits) throw std::invalid_argument("statevector: qubit count out of range");
        if (amplitudes.size() != (std::size_t{1} << n))
            throw std::invalid_argument("statevector: amplitude length must be 2^n_qubits");
    }

    static Statevector zero(int n) {
        if (n < 1 || n > kMaxQubits) throw std::invalid_argument("statevector: qubit count out of range");
        std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
        amps[0] = Complex{1.0, 0.0};
        return Statevector(n, std::move(amps));
    }

    std::size_t dim() const { return amplitudes.size(); }

    double norm() const {
        double s = 0.0;
        for (const Complex& a : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }
};

enum class GateKind { H, S, Sdg, X, Y, Z, RX, RY, RZ, P, CX, CZ };

struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;        // second qubit for CX/CZ
    double theta = 0.0; // angle for RX/RY/RZ/P

    bool is_two_qubit() const { return kind == GateKind::CX || kind == GateKind::CZ; }

    static Gate h(int q) { return {GateKind::H, q}; }
    static Gate s(int q) { return {GateKind::S, q}; }
    static Gate sdg(int q) { return {GateKind::Sdg, q}; }
    static Gate x(int q) { return {GateKind::X, q}; }
    static Gate y(int q) { return {GateKind::Y, q}; }
    static Gate z(int q) { return {GateKind::Z, q}; }
    static Gate rx(int q, double t) { return {GateKind::RX, q, -1, t}; }
    static Gate ry(int q, double t) { return {GateKind::RY, q, -1, t}; }
    static Gate rz(int q, double t) { return {GateKind::RZ, q, -1, t}; }
    static Gate p(int q, double t) { return {GateKind::P, q, -1, t}; }
    static Gate cx(int control, int target) { return {GateKind::CX, control, target}; }
    static Gate cz(int q0, int q1) { return {GateKind::CZ, q0, q1}; }

    Gate inverse() const {
        Gate g = *this;
        switch (kind) {
            case GateKind::S: g.kind = GateKind::Sdg; break;
            case GateKind::Sdg: g.kind = GateKind::S; break;
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::P: g.theta = -theta; break;
            default: break;  // H, X, Y, Z, CX, CZ are self-inverse
        }
        return g;
    }

    friend bool operator==(const Gate& a, const Gate& b) {
        return a.kind == b.kind && a.q0 == b.q0 && a.q1 == b.q1 && a.theta == b.theta;
    }
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> ops;

    explicit Circuit(int n = 0) : n_qubits(n) {}

    void append(const Gate& g) { ops.push_back(g); }
};

namespace detail {

inline void check_target(const Statevector& state, int q, const char* what) {
    if (q < 0 || q >= state.n_qubits)
        throw std::out_of_range(std::string(what) + ": target index out of range");
}

// 2x2 unitary entries for a single-qubit gate
inline void gate_coeffs(const Gate& g, Complex& u00, Complex& u01, Complex& u10, Complex& u11) {
    const double r = 0.70710678118654752440;  // 1/sqrt(2)
    switch (g.kind) {
        case GateKind::H: u00 = r; u01 = r; u10 = r; u11 = -r; break;
        case GateKind::S: u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = Complex{0.0, 1.0}; break;
        case GateKind::Sdg: u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = Complex{0.0, -1.0}; break;
        case GateKind::X: u00 = 0.0; u01 = 1.0; u10 = 1.0; u11 = 0.0; break;
        case GateKind::Y: u00 = 0.0; u01 = Complex{0.0, -1.0}; u10 = Complex{0.0, 1.0}; u11 = 0.0; break;
        case GateKind::Z: u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = -1.0; break;
        case GateKind::RX: {
            double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
            u00 = c; u01 = Complex{0.0, -s}; u10 = Complex{0.0, -s}; u11 = c;
            break;
        }
        case GateKind::RY: {
            double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
            u00 = c; u01 = -s; u10 = s; u11 = c;
            break;
        }
        case GateKind::RZ:
            u00 = std::polar(1.0, -g.theta / 2); u01 = 0.0; u10 = 0.0;
            u11 = std::polar(1.0, g.theta / 2);
            break;
        case GateKind::P:
            u00 = 1.0; u01 = 0.0; u10 = 0.0; u11 = std::polar(1.0, g.theta);
            break;
        default:
            throw std::logic_error("gate_coeffs: two-qubit gate");
    }
}

}  // namespace detail

inline Statevector apply_gate(const Statevector& state, const Gate& gate) {
    Statevector out = state;
    detail::check_target(state, gate.q0, "apply_gate");
    if (gate.is_two_qubit()) {
        detail::check_target(state, gate.q1, "apply_gate");
        if (gate.q0 == gate.q1) throw std::invalid_argument("apply_gate: targets must be distinct");
        const std::size_t cbit = std::size_t{1} << gate.q0;
        const std::size_t tbit = std::size_t{1} << gate.q1;
        if (gate.kind == GateKind::CX) {
            for (std::size_t i = 0; i < out.dim(); ++i)
                if ((i & cbit) && !(i & tbit)) std::swap(out.amplitudes[i], out.amplitudes[i | tbit]);
        } else {  // CZ
            for (std::size_t i = 0; i < out.dim(); ++i)
                if ((i & cbit) && (i & tbit)) out.amplitudes[i] = -out.amplitudes[i];
        }
        return out;
    }
    Complex u00, u01, u10, u11;
    detail::gate_coeffs(gate, u00, u01, u10, u11);
    const std::size_t bit = std::size_t{1} << gate.q0;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        if (i & bit) continue;
        const Complex a0 = out.amplitudes[i];
        const Complex a1 = out.amplitudes[i | bit];
        out.amplitudes[i] = u00 * a0 + u01 * a1;
        out.amplitudes[i | bit] = u10 * a0 + u11 * a1;
    }
    return out;
}

inline Statevector run_circuit(const Circuit& circuit, Statevector init) {
    if (circuit.n_qubits != init.n_qubits)
        throw std::invalid_argument("run_circuit: qubit-count mismatch");
    for (const Gate& g : circuit.ops) init = apply_gate(init, g);
    return init;
}

// <psi|O|psi> by direct action of the Pauli string on the amplitudes.
// Per factor on bit b: X|b> = |1-b>, Y|b> = i(-1)^b |1-b>, Z|b> = (-1)^b |b>.
inline double pauli_expectation_exact(const Statevector& state, const PauliObservable& obs) {
    if (obs.n_qubits() != state.n_qubits)
        throw std::invalid_argument("pauli_expectation_exact: dimension mismatch");
    std::size_t flip_mask = 0, y_mask = 0, z_mask = 0;
    for (int q = 0; q < obs.n_qubits(); ++q) {
        switch (obs.factors[static_cast<std::size_t>(q)]) {
            case PauliFactor::I: break;
            case PauliFactor::X: flip_mask |= std::size_t{1} << q; break;
            case PauliFactor::Y: flip_mask |= std::size_t{1} << q; y_mask |= std::size_t{1} << q; break;
            case PauliFactor::Z: z_mask |= std::size_t{1} << q; break;
        }
    }
    const int y_count = std::popcount(y_mask);
    Complex acc{0.0, 0.0};
    for (std::size_t b = 0; b < state.dim(); ++b) {
        const Complex& amp = state.amplitudes[b];
        if (amp == Complex{0.0, 0.0}) continue;
        // coefficient: i^{#Y} * (-1)^{parity of b on Y and Z wires}
        int sign_bits = std::popcount(b & (y_mask | z_mask));
        Complex coeff{1.0, 0.0};
        switch (y_count % 4) {
            case 0: coeff = {1.0, 0.0}; break;
            case 1: coeff = {0.0, 1.0}; break;
            case 2: coeff = {-1.0, 0.0}; break;
            case 3: coeff = {0.0, -1.0}; break;
        }
        if (sign_bits % 2) coeff = -coeff;
        acc += std::conj(state.amplitudes[b ^ flip_mask]) * coeff * amp;
    }
    return acc.real();
}

// Appends pre-measurement basis rotations so Z-basis readout realizes obs:
// H before X, Sdg then H before Y, nothing before Z.
inline Circuit measurement_circuit(const Circuit& base, const PauliObservable& obs) {
    if (obs.n_qubits() != base.n_qubits)
        throw std::invalid_argument("measurement_circuit: qubit-count mismatch");
    Circuit out = base;
    for (int q = 0; q < obs.n_qubits(); ++q) {
        switch (obs.factors[static_cast<std::size_t>(q)]) {
            case PauliFactor::X: out.append(Gate::h(q)); break;
            case PauliFactor::Y:
                out.append(Gate::sdg(q));
                out.append(Gate::h(q));
                break;
            default: break;
        }
    }
    return out;
}

// Readout-level noise: the Z-basis distribution is mixed with the uniform
// distribution (weight depolarize_lambda), then each readout bit flips
// independently with probability readout_flip_eps. lambda = eps = 0 leaves
// the ideal sampling path untouched, including the consumed RNG stream.
struct NoiseModel {
    double depolarize_lambda = 0.0;
    double readout_flip_eps = 0.0;

    bool is_off() const { return depolarize_lambda == 0.0 && readout_flip_eps == 0.0; }
};

struct Counts {
    std::map<std::string, long long> tallies;
    long long total_shots = 0;
};

inline std::string bitstring_of_index(std::size_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q)
        if (index & (std::size_t{1} << q)) s[static_cast<std::size_t>(q)] = '1';
    return s;
}

inline Counts sample_counts(const Statevector& state, long long shots, const NoiseModel& noise, Rng& rng) {
    if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
    if (noise.depolarize_lambda < 0.0 || noise.depolarize_lambda > 1.0 ||
        noise.readout_flip_eps < 0.0 || noise.readout_flip_eps > 1.0)
        throw std::invalid_argument("sample_counts: noise parameters must lie in [0,1]");

    const std::size_t dim = state.dim();
    std::vector<double> cdf(dim);
    const double lambda = noise.depolarize_lambda;
    const double uniform_p = lambda / static_cast<double>(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += (1.0 - lambda) * std::norm(state.amplitudes[i]) + uniform_p;
        cdf[i] = acc;
    }
    cdf[dim - 1] = 1.0;  // guard against rounding

    std::vector<long long> tally(dim, 0);
    const double eps = noise.readout_flip_eps;
    for (long long s = 0; s < shots; ++s) {
        const double u = rng.uniform();
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (idx >= dim) idx = dim - 1;
        if (eps > 0.0) {
            for (int q = 0; q < state.n_qubits; ++q)
                if (rng.bernoulli(eps)) idx ^= std::size_t{1} << q;
        }
        ++tally[idx];
    }

    Counts counts;
    counts.total_shots = shots;
    for (std::size_t i = 0; i < dim; ++i)
        if (tally[i] > 0) counts.tallies[bitstring_of_index(i, state.n_qubits)] = tally[i];
    return counts;
}

inline double expectation_from_counts(const Counts& counts, const PauliObservable& obs) {
    if (counts.total_shots < 1 || counts.tallies.empty())
        throw std::invalid_argument("expectation_from_counts: empty counts");
    long long signed_sum = 0;
    for (const auto& [bits, tally] : counts.tallies) {
        if (bits.size() != static_cast<std::size_t>(obs.n_qubits()))
            throw std::invalid_argument("expectation_from_counts: bitstring length mismatch");
        int parity = 0;
        for (int q = 0; q < obs.n_qubits(); ++q)
            if (obs.factors[static_cast<std::size_t>(q)] != PauliFactor::I &&
                bits[static_cast<std::size_t>(q)] == '1')
                parity ^= 1;
        signed_sum += parity ? -tally : tally;
    }
    return static_cast<double>(signed_sum) / static_cast<double>(counts.total_shots);
}

}  // namespace qfp
