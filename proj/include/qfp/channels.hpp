#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfp/pauli.hpp"
#include "qfp/simulator.hpp"

// The two-qubit channels under verification: ZZ feature-map encoder, the
// honest inversion-test kernel circuit, and the adversarial / drifted
// variants layered on top of it.

namespace qfp {

inline constexpr double kPi = 3.14159265358979323846;

struct FeatureVector {
    double x0 = 0.0;
    double x1 = 0.0;
};

// Coherent per-qubit over-rotations emulating calibration drift: RZ(beta)
// followed by RX(alpha) on each qubit (unitary factor RX(alpha)*RZ(beta)).
struct DriftParams {
    std::array<double, 2> alpha{0.0, 0.0};
    std::array<double, 2> beta{0.0, 0.0};
    std::optional<double> lambda_override;  // replaces NoiseModel.depolarize_lambda when set

    void validate() const {
        for (double a : alpha)
            if (std::abs(a) > kPi) throw std::invalid_argument("drift: |alpha| exceeds pi cap");
        for (double b : beta)
            if (std::abs(b) > kPi) throw std::invalid_argument("drift: |beta| exceeds pi cap");
    }

    bool is_zero() const {
        return alpha[0] == 0.0 && alpha[1] == 0.0 && beta[0] == 0.0 && beta[1] == 0.0;
    }
};

enum class ChannelKind { Honest, Sneaky, WeakenedSneaky, Drifted };

struct ChannelSpec {
    ChannelKind kind = ChannelKind::Honest;
    DriftParams drift{};  // only read when kind == Drifted

    static ChannelSpec honest() { return {ChannelKind::Honest, {}}; }
    static ChannelSpec sneaky() { return {ChannelKind::Sneaky, {}}; }
    static ChannelSpec weakened_sneaky() { return {ChannelKind::WeakenedSneaky, {}}; }
    static ChannelSpec drifted(DriftParams params) {
        params.validate();
        return {ChannelKind::Drifted, params};
    }
};

inline std::string channel_descriptor(const ChannelSpec& spec) {
    switch (spec.kind) {
        case ChannelKind::Honest: return "honest";
        case ChannelKind::Sneaky: return "sneaky";
        case ChannelKind::WeakenedSneaky: return "weak-sneaky";
        case ChannelKind::Drifted: {
            std::ostringstream oss;
            oss << "drift(alpha=" << spec.drift.alpha[0] << "," << spec.drift.alpha[1]
                << ";beta=" << spec.drift.beta[0] << "," << spec.drift.beta[1] << ")";
            return oss.str();
        }
    }
    return "?";
}

// Standard two-qubit ZZFeatureMap. Per repetition: H on each wire, P(2*x_i)
// on wire i, then the entangler CX(0,1), P(2*(pi-x0)*(pi-x1)) on wire 2,
// CX(0,1). 7 gates per repetition.
inline Circuit zz_feature_map(const FeatureVector& x, int reps) {
    if (reps < 1) throw std::invalid_argument("zz_feature_map: reps must be >= 1");
    Circuit c(2);
    for (int r = 0; r < reps; ++r) {
        c.append(Gate::h(0));
        c.append(Gate::h(1));
        c.append(Gate::p(0, 2.0 * x.x0));
        c.append(Gate::p(1, 2.0 * x.x1));
        c.append(Gate::cx(0, 1));
        c.append(Gate::p(1, 2.0 * (kPi - x.x0) * (kPi - x.x1)));
        c.append(Gate::cx(0, 1));
    }
    return c;
}

// Reverses the gate list and inverts each gate.
inline Circuit adjoint_circuit(const Circuit& circuit) {
    Circuit out(circuit.n_qubits);
    out.ops.reserve(circuit.ops.size());
    for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it)
        out.append(it->inverse());
    return out;
}

// Inversion-test kernel circuit: encode x_i, then un-encode x_j, so the
// prepared state is U(x_j)^dag U(x_i)|00> and the kernel value is the
// probability of reading 00. Adversarial variants append their per-qubit
// rotation after the honest circuit, immediately before measurement.
inline Circuit kernel_circuit(const ChannelSpec& spec, const FeatureVector& x_i,
                              const FeatureVector& x_j, int reps = 2) {
    Circuit c = zz_feature_map(x_i, reps);
    const Circuit undo = adjoint_circuit(zz_feature_map(x_j, reps));
    c.ops.insert(c.ops.end(), undo.ops.begin(), undo.ops.end());
    switch (spec.kind) {
        case ChannelKind::Honest:
            break;
        case ChannelKind::Sneaky:
            c.append(Gate::s(0));
            c.append(Gate::s(1));
            break;
        case ChannelKind::WeakenedSneaky:
            c.append(Gate::rz(0, kPi / 6.0));
            c.append(Gate::rz(1, kPi / 6.0));
            break;
        case ChannelKind::Drifted:
            spec.drift.validate();
            // zero angles are skipped so zero drift reduces bit-exactly to Honest
            for (int q = 0; q < 2; ++q) {
                if (spec.drift.beta[static_cast<std::size_t>(q)] != 0.0)
                    c.append(Gate::rz(q, spec.drift.beta[static_cast<std::size_t>(q)]));
                if (spec.drift.alpha[static_cast<std::size_t>(q)] != 0.0)
                    c.append(Gate::rx(q, spec.drift.alpha[static_cast<std::size_t>(q)]));
            }
            break;
    }
    return c;
}

enum class FamilyTier { Weak, Complete, Tier2, Tier3 };

inline std::string tier_name(FamilyTier tier) {
    switch (tier) {
        case FamilyTier::Weak: return "weak";
        case FamilyTier::Complete: return "complete";
        case FamilyTier::Tier2: return "tier2";
        case FamilyTier::Tier3: return "tier3";
    }
    return "?";
}

inline FamilyTier tier_from_name(const std::string& name) {
    if (name == "weak") return FamilyTier::Weak;
    if (name == "complete") return FamilyTier::Complete;
    if (name == "tier2") return FamilyTier::Tier2;
    if (name == "tier3") return FamilyTier::Tier3;
    throw std::invalid_argument("unknown family tier '" + name + "'");
}

// Canonical two-qubit observable families. Ordering: X1, Y1, Z1, X2, Y2, Z2,
// then correlation strings in lexicographic order.
inline std::vector<PauliObservable> observable_family(FamilyTier tier) {
    auto obs = [](const char* label) { return parse_observable(label, 2); };
    switch (tier) {
        case FamilyTier::Weak:
            return {obs("Z1Z2")};
        case FamilyTier::Complete:
            return {obs("X1"), obs("Y1"), obs("Z1"), obs("X2"), obs("Y2"), obs("Z2")};
        case FamilyTier::Tier2:
            return {obs("X1"), obs("Y1"), obs("Z1"), obs("X2"), obs("Y2"), obs("Z2"),
                    obs("X1X2"), obs("Y1Y2"), obs("Z1Z2")};
        case FamilyTier::Tier3:
            return {obs("X1"),   obs("Y1"),   obs("Z1"),   obs("X2"),   obs("Y2"),
                    obs("Z2"),   obs("X1X2"), obs("X1Y2"), obs("X1Z2"), obs("Y1X2"),
                    obs("Y1Y2"), obs("Y1Z2"), obs("Z1X2"), obs("Z1Y2"), obs("Z1Z2")};
    }
    throw std::logic_error("observable_family: unknown tier");
}

}  // namespace qfp
