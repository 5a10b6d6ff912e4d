#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfp/pauli.hpp"
#include "qfp/rng.hpp"
#include "qfp/sha256.hpp"
#include "qfp/simulator.hpp"

// Observable-contract core: stage specifications, behavioral fingerprints,
// contract deviation, the dual-mode verifier loop, and the hash-chained
// audit trail.

namespace qfp {

// Canonical rendering of a real for hashing: 17 significant decimal digits,
// enough to round-trip any double bit pattern.
inline std::string format_real17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline std::string canonical_spec_text(const std::vector<std::string>& family_labels,
                                       double epsilon_a, const std::string& channel) {
    std::string text = "channel=" + channel + "\n";
    text += "epsilon_a=" + format_real17(epsilon_a) + "\n";
    text += "family=";
    for (std::size_t i = 0; i < family_labels.size(); ++i) {
        if (i > 0) text += ",";
        text += family_labels[i];
    }
    text += "\n";
    return text;
}

inline std::string spec_hash(const std::vector<PauliObservable>& family, double epsilon_a,
                             const std::string& channel) {
    if (family.empty()) throw std::invalid_argument("spec_hash: family must be non-empty");
    if (!(epsilon_a > 0.0) || epsilon_a > 2.0)
        throw std::invalid_argument("spec_hash: epsilon_a must lie in (0, 2]");
    std::vector<std::string> labels;
    labels.reserve(family.size());
    for (const PauliObservable& o : family) labels.push_back(o.label);
    return sha256_hex(canonical_spec_text(labels, epsilon_a, channel));
}

// The declared contract of a pipeline stage: hash anchor,
// observable family, tolerance, issuance timestamp.
struct StageSpec {
    std::string hash;
    std::vector<PauliObservable> family;
    double epsilon_a = 0.0;
    std::string timestamp;  // UTC ISO-8601
    std::string channel;    // declared-channel descriptor, part of the hash

    std::vector<std::string> family_labels() const {
        std::vector<std::string> labels;
        labels.reserve(family.size());
        for (const PauliObservable& o : family) labels.push_back(o.label);
        return labels;
    }
};

inline StageSpec make_stage_spec(std::vector<PauliObservable> family, double epsilon_a,
                                 std::string channel, std::string timestamp) {
    StageSpec spec;
    spec.hash = spec_hash(family, epsilon_a, channel);
    spec.family = std::move(family);
    spec.epsilon_a = epsilon_a;
    spec.channel = std::move(channel);
    spec.timestamp = std::move(timestamp);
    return spec;
}

// Behavioral fingerprint: expectations indexed by the family, in family
// order. shots_per_observable is empty for exact (simulator) fingerprints.
struct Fingerprint {
    std::vector<std::string> labels;
    std::vector<double> values;
    std::optional<long long> shots_per_observable;
    std::string channel;      // provenance
    std::uint64_t seed = 0;   // provenance; 0 for exact mode

    double value_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return values[i];
        throw std::invalid_argument("fingerprint: no entry for label '" + label + "'");
    }
};

inline Fingerprint compute_fingerprint(const Circuit& circuit,
                                       const std::vector<PauliObservable>& family,
                                       const std::string& channel = "") {
    if (family.empty()) throw std::invalid_argument("compute_fingerprint: family must be non-empty");
    Fingerprint fp;
    fp.channel = channel;
    const Statevector state = run_circuit(circuit, Statevector::zero(circuit.n_qubits));
    for (const PauliObservable& obs : family) {
        fp.labels.push_back(obs.label);
        fp.values.push_back(pauli_expectation_exact(state, obs));
    }
    return fp;
}

inline Fingerprint compute_fingerprint(const Circuit& circuit,
                                       const std::vector<PauliObservable>& family,
                                       long long shots_per_observable, const NoiseModel& noise,
                                       Rng& rng, const std::string& channel = "",
                                       std::uint64_t seed = 0) {
    if (family.empty()) throw std::invalid_argument("compute_fingerprint: family must be non-empty");
    if (shots_per_observable < 1)
        throw std::invalid_argument("compute_fingerprint: shots_per_observable must be >= 1");
    Fingerprint fp;
    fp.shots_per_observable = shots_per_observable;
    fp.channel = channel;
    fp.seed = seed;
    for (const PauliObservable& obs : family) {
        const Circuit mc = measurement_circuit(circuit, obs);
        const Statevector state = run_circuit(mc, Statevector::zero(mc.n_qubits));
        const Counts counts = sample_counts(state, shots_per_observable, noise, rng);
        fp.labels.push_back(obs.label);
        fp.values.push_back(expectation_from_counts(counts, obs));
    }
    return fp;
}

// Per-observable |delta| and its maximum: the L-infinity distance between
// fingerprints.
struct Deviation {
    std::vector<std::pair<std::string, double>> per_observable;
    double max_dev = 0.0;
    std::string argmax_label;
};

inline Deviation contract_deviation(const Fingerprint& fp_a, const Fingerprint& fp_b) {
    if (fp_a.labels != fp_b.labels)
        throw std::invalid_argument("contract_deviation: fingerprint families differ");
    Deviation dev;
    for (std::size_t i = 0; i < fp_a.labels.size(); ++i) {
        const double d = std::abs(fp_a.values[i] - fp_b.values[i]);
        dev.per_observable.emplace_back(fp_a.labels[i], d);
        if (dev.argmax_label.empty() || d > dev.max_dev) {
            dev.max_dev = d;
            dev.argmax_label = fp_a.labels[i];
        }
    }
    return dev;
}

// ---- audit trail ----------------------------------------------------------

struct AuditEntry {
    enum class Decision { DriftLogged, Halt };

    int round = 0;
    std::string observable;
    double mu_hat = 0.0;
    double deviation = 0.0;
    Decision decision = Decision::DriftLogged;
    std::string prev_hash;
    std::string entry_hash;
};

inline const char* decision_name(AuditEntry::Decision d) {
    return d == AuditEntry::Decision::Halt ? "halt" : "drift-logged";
}

inline std::string audit_payload_text(int round, const std::string& observable, double mu_hat,
                                      double deviation, AuditEntry::Decision decision) {
    std::string text = "round=" + std::to_string(round) + ";observable=" + observable +
                       ";mu_hat=" + format_real17(mu_hat) +
                       ";deviation=" + format_real17(deviation) +
                       ";decision=" + decision_name(decision);
    return text;
}

inline AuditEntry make_audit_entry(int round, const std::string& observable, double mu_hat,
                                   double deviation, AuditEntry::Decision decision,
                                   const std::string& prev_hash) {
    AuditEntry e;
    e.round = round;
    e.observable = observable;
    e.mu_hat = mu_hat;
    e.deviation = deviation;
    e.decision = decision;
    e.prev_hash = prev_hash;
    e.entry_hash = sha256_hex(prev_hash + "|" +
                              audit_payload_text(round, observable, mu_hat, deviation, decision));
    return e;
}

// True iff every entry_hash recomputes from its predecessor and the first
// entry chains from the spec hash. An empty trail verifies vacuously.
inline bool verify_audit_chain(const std::vector<AuditEntry>& trail, const std::string& spec_hash) {
    std::string expected_prev = spec_hash;
    for (const AuditEntry& e : trail) {
        if (e.prev_hash != expected_prev) return false;
        const std::string recomputed = sha256_hex(
            e.prev_hash + "|" +
            audit_payload_text(e.round, e.observable, e.mu_hat, e.deviation, e.decision));
        if (recomputed != e.entry_hash) return false;
        expected_prev = e.entry_hash;
    }
    return true;
}

// ---- dual-mode verifier ----------------------------------------------------

enum class Verdict { Accept, Halt };

struct VerifierConfig {
    int rounds = 0;
    long long shots_per_round = 0;
    NoiseModel noise;
    std::uint64_t seed = 0;
};

struct VerdictReport {
    Verdict verdict = Verdict::Accept;
    std::optional<int> halted_round;
    std::vector<AuditEntry> trail;
    VerifierConfig config;
};

// One bounded verification session. Per round an observable is drawn
// uniformly from the family, estimated with shots_per_round shots, and the
// deviation against the reference decides halt (> epsilon_a) versus a logged
// drift event. The audit chain is anchored at the spec hash.
inline VerdictReport run_verifier(const StageSpec& spec, const Fingerprint& reference,
                                  const Circuit& channel, int rounds, long long shots_per_round,
                                  const NoiseModel& noise, Rng& rng, std::uint64_t seed_echo = 0) {
    if (rounds < 1) throw std::invalid_argument("run_verifier: rounds must be >= 1");
    if (shots_per_round < 1) throw std::invalid_argument("run_verifier: shots_per_round must be >= 1");
    if (reference.labels != spec.family_labels())
        throw std::invalid_argument("run_verifier: reference does not match spec family");

    VerdictReport report;
    report.config = VerifierConfig{rounds, shots_per_round, noise, seed_echo};
    std::string prev_hash = spec.hash;

    for (int t = 1; t <= rounds; ++t) {
        const std::size_t pick = rng.uniform_index(spec.family.size());
        const PauliObservable& obs = spec.family[pick];
        const Circuit mc = measurement_circuit(channel, obs);
        const Statevector state = run_circuit(mc, Statevector::zero(mc.n_qubits));
        const Counts counts = sample_counts(state, shots_per_round, noise, rng);
        const double mu_hat = expectation_from_counts(counts, obs);
        const double delta = std::abs(mu_hat - reference.values[pick]);

        const bool beyond = delta > spec.epsilon_a;
        const AuditEntry entry = make_audit_entry(
            t, obs.label, mu_hat, delta,
            beyond ? AuditEntry::Decision::Halt : AuditEntry::Decision::DriftLogged, prev_hash);
        prev_hash = entry.entry_hash;
        report.trail.push_back(entry);

        if (beyond) {
            report.verdict = Verdict::Halt;
            report.halted_round = t;
            return report;
        }
    }
    report.verdict = Verdict::Accept;
    return report;
}

}  // namespace qfp
