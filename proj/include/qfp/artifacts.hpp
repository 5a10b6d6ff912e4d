#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qfp/budget.hpp"
#include "qfp/channels.hpp"
#include "qfp/contract.hpp"
#include "qfp/framebound.hpp"

// JSON artifact schema. Every file carries schema_version; fingerprints are
// revalidated ([-1,1] bounds, well-formed labels) on load.

namespace qfp {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const Fingerprint& fp) {
    Json entries = Json::array();
    for (std::size_t i = 0; i < fp.labels.size(); ++i)
        entries.push_back({{"observable", fp.labels[i]}, {"expectation", fp.values[i]}});
    Json j{{"schema_version", kSchemaVersion},
           {"kind", "fingerprint"},
           {"entries", entries},
           {"channel", fp.channel},
           {"seed", fp.seed}};
    if (fp.shots_per_observable)
        j["shots_per_observable"] = *fp.shots_per_observable;
    else
        j["shots_per_observable"] = "exact";
    return j;
}

inline Fingerprint fingerprint_from_json(const Json& j) {
    Fingerprint fp;
    for (const Json& e : j.at("entries")) {
        const std::string label = e.at("observable").get<std::string>();
        const double value = e.at("expectation").get<double>();
        parse_observable(label, kMaxQubits);  // well-formedness check
        if (value < -1.0 || value > 1.0)
            throw std::invalid_argument("fingerprint load: expectation for " + label +
                                        " outside [-1, 1]");
        fp.labels.push_back(label);
        fp.values.push_back(value);
    }
    if (fp.labels.empty()) throw std::invalid_argument("fingerprint load: no entries");
    const Json& shots = j.at("shots_per_observable");
    if (shots.is_string()) {
        if (shots.get<std::string>() != "exact")
            throw std::invalid_argument("fingerprint load: bad shots_per_observable");
    } else {
        fp.shots_per_observable = shots.get<long long>();
    }
    fp.channel = j.value("channel", std::string{});
    fp.seed = j.value("seed", std::uint64_t{0});
    return fp;
}

inline Json to_json(const StageSpec& spec) {
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "stage_spec"},
                {"spec_hash", spec.hash},
                {"family", spec.family_labels()},
                {"epsilon_a", spec.epsilon_a},
                {"timestamp", spec.timestamp},
                {"channel", spec.channel}};
}

inline StageSpec stage_spec_from_json(const Json& j, int n_qubits = 2) {
    std::vector<PauliObservable> family;
    for (const Json& label : j.at("family"))
        family.push_back(parse_observable(label.get<std::string>(), n_qubits));
    StageSpec spec = make_stage_spec(std::move(family), j.at("epsilon_a").get<double>(),
                                     j.at("channel").get<std::string>(),
                                     j.value("timestamp", std::string{}));
    const std::string recorded = j.at("spec_hash").get<std::string>();
    if (recorded != spec.hash)
        throw std::invalid_argument("stage spec load: hash does not recompute");
    return spec;
}

inline Json to_json(const Deviation& dev) {
    Json per = Json::array();
    for (const auto& [label, d] : dev.per_observable)
        per.push_back({{"observable", label}, {"abs_deviation", d}});
    return Json{{"per_observable", per}, {"max_dev", dev.max_dev}, {"argmax", dev.argmax_label}};
}

inline Json to_json(const AuditEntry& e) {
    return Json{{"round", e.round},
                {"observable", e.observable},
                {"mu_hat", e.mu_hat},
                {"deviation", e.deviation},
                {"decision", decision_name(e.decision)},
                {"prev_hash", e.prev_hash},
                {"entry_hash", e.entry_hash}};
}

inline AuditEntry audit_entry_from_json(const Json& j) {
    AuditEntry e;
    e.round = j.at("round").get<int>();
    e.observable = j.at("observable").get<std::string>();
    e.mu_hat = j.at("mu_hat").get<double>();
    e.deviation = j.at("deviation").get<double>();
    const std::string d = j.at("decision").get<std::string>();
    if (d == "halt")
        e.decision = AuditEntry::Decision::Halt;
    else if (d == "drift-logged")
        e.decision = AuditEntry::Decision::DriftLogged;
    else
        throw std::invalid_argument("audit entry load: unknown decision '" + d + "'");
    e.prev_hash = j.at("prev_hash").get<std::string>();
    e.entry_hash = j.at("entry_hash").get<std::string>();
    return e;
}

inline Json to_json(const VerdictReport& report) {
    Json trail = Json::array();
    for (const AuditEntry& e : report.trail) trail.push_back(to_json(e));
    Json j{{"schema_version", kSchemaVersion},
           {"kind", "verdict_report"},
           {"verdict", report.verdict == Verdict::Halt ? "halt" : "accept"},
           {"trail", trail},
           {"config",
            {{"rounds", report.config.rounds},
             {"shots_per_round", report.config.shots_per_round},
             {"noise_lambda", report.config.noise.depolarize_lambda},
             {"noise_readout", report.config.noise.readout_flip_eps},
             {"seed", report.config.seed}}}};
    if (report.halted_round)
        j["halted_round"] = *report.halted_round;
    else
        j["halted_round"] = nullptr;
    return j;
}

inline VerdictReport verdict_report_from_json(const Json& j) {
    VerdictReport report;
    report.verdict = j.at("verdict").get<std::string>() == "halt" ? Verdict::Halt : Verdict::Accept;
    if (!j.at("halted_round").is_null()) report.halted_round = j.at("halted_round").get<int>();
    for (const Json& e : j.at("trail")) report.trail.push_back(audit_entry_from_json(e));
    const Json& c = j.at("config");
    report.config.rounds = c.at("rounds").get<int>();
    report.config.shots_per_round = c.at("shots_per_round").get<long long>();
    report.config.noise.depolarize_lambda = c.at("noise_lambda").get<double>();
    report.config.noise.readout_flip_eps = c.at("noise_readout").get<double>();
    report.config.seed = c.at("seed").get<std::uint64_t>();
    return report;
}

inline Json to_json(const Counts& counts) {
    Json tallies = Json::object();
    for (const auto& [bits, tally] : counts.tallies) tallies[bits] = tally;
    return Json{{"total_shots", counts.total_shots}, {"tallies", tallies}};
}

inline Json to_json(const ToleranceInterval& interval) {
    Json j{{"d_typ", interval.d_typ}, {"upper", interval.upper}, {"empty", interval.empty}};
    if (interval.empty)
        j["recommended"] = nullptr;
    else
        j["recommended"] = interval.recommended;
    return j;
}

inline Json to_json(const FrameBoundResult& result) {
    return Json{{"schema_version", kSchemaVersion},
                {"kind", "frame_bound"},
                {"c_estimate", result.c_estimate},
                {"witness_coefficients", result.witness_coefficients},
                {"restarts_used", result.restarts_used},
                {"objective_trace", result.objective_trace},
                {"std_error", result.std_error}};
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    Json j;
    in >> j;
    return j;
}

}  // namespace qfp
