#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfp {

enum class PauliFactor { I, X, Y, Z };

inline char factor_char(PauliFactor f) {
    switch (f) {
        case PauliFactor::I: return 'I';
        case PauliFactor::X: return 'X';
        case PauliFactor::Y: return 'Y';
        case PauliFactor::Z: return 'Z';
    }
    return '?';
}

// An n-qubit Pauli string. factors[q] is the factor on wire q+1 (qubit q);
// labels use 1-based wire indices, identity factors omitted: "X1" = X on
// wire 1, "Z1Z2" = Z on both wires. The all-identity string is rejected.
struct PauliObservable {
    std::vector<PauliFactor> factors;
    std::string label;

    int n_qubits() const { return static_cast<int>(factors.size()); }
};

inline std::string pauli_label(const std::vector<PauliFactor>& factors) {
    std::string label;
    for (std::size_t q = 0; q < factors.size(); ++q) {
        if (factors[q] == PauliFactor::I) continue;
        label += factor_char(factors[q]);
        label += std::to_string(q + 1);
    }
    return label;
}

inline PauliObservable make_observable(std::vector<PauliFactor> factors) {
    if (factors.empty()) throw std::invalid_argument("observable: empty factor list");
    bool nontrivial = false;
    for (PauliFactor f : factors)
        if (f != PauliFactor::I) nontrivial = true;
    if (!nontrivial) throw std::invalid_argument("observable: identity string is excluded");
    PauliObservable obs;
    obs.label = pauli_label(factors);
    obs.factors = std::move(factors);
    return obs;
}

// Parses labels of the form ("X"|"Y"|"Z")<wire> repeated, e.g. "Y1", "X1Z2".
inline PauliObservable parse_observable(const std::string& label, int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("observable: n_qubits must be positive");
    std::vector<PauliFactor> factors(static_cast<std::size_t>(n_qubits), PauliFactor::I);
    std::size_t i = 0;
    while (i < label.size()) {
        PauliFactor f;
        switch (label[i]) {
            case 'X': f = PauliFactor::X; break;
            case 'Y': f = PauliFactor::Y; break;
            case 'Z': f = PauliFactor::Z; break;
            default: throw std::invalid_argument("observable label '" + label + "': expected X/Y/Z");
        }
        ++i;
        if (i >= label.size() || !std::isdigit(static_cast<unsigned char>(label[i])))
            throw std::invalid_argument("observable label '" + label + "': missing wire index");
        std::size_t start = i;
        while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
        int wire = std::stoi(label.substr(start, i - start));
        if (wire < 1 || wire > n_qubits)
            throw std::invalid_argument("observable label '" + label + "': wire out of range");
        if (factors[static_cast<std::size_t>(wire - 1)] != PauliFactor::I)
            throw std::invalid_argument("observable label '" + label + "': duplicate wire");
        factors[static_cast<std::size_t>(wire - 1)] = f;
    }
    return make_observable(std::move(factors));
}

}  // namespace qfp
