// Command-line entry point: fingerprinting, verification, budget and
// tolerance arithmetic, frame-bound optimization, and the three experiments.
//
// Exit codes: 0 success / verifier accept, 2 verifier halt (integrity
// violation), 1 usage or configuration error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfp/artifacts.hpp"
#include "qfp/budget.hpp"
#include "qfp/channels.hpp"
#include "qfp/contract.hpp"
#include "qfp/experiments.hpp"
#include "qfp/framebound.hpp"
#include "qfp/version.hpp"

namespace {

struct ChannelFlags {
    std::string channel = "honest";
    std::vector<double> xi{0.4, 1.2};
    std::vector<double> xj{1.1, 0.3};
    std::vector<double> drift_alpha{0.0, 0.0};
    std::vector<double> drift_beta{0.0, 0.0};
    int reps = 2;
};

void add_channel_flags(CLI::App* cmd, ChannelFlags& flags) {
    cmd->add_option("--channel", flags.channel, "honest|sneaky|weak-sneaky|drift")
        ->check(CLI::IsMember({"honest", "sneaky", "weak-sneaky", "drift"}));
    cmd->add_option("--xi", flags.xi, "first feature vector (two reals)")->expected(2);
    cmd->add_option("--xj", flags.xj, "second feature vector (two reals)")->expected(2);
    cmd->add_option("--drift-alpha", flags.drift_alpha, "per-qubit RX drift angles")->expected(2);
    cmd->add_option("--drift-beta", flags.drift_beta, "per-qubit RZ drift angles")->expected(2);
    cmd->add_option("--reps", flags.reps, "feature-map repetitions");
}

qfp::ChannelSpec channel_spec_of(const ChannelFlags& flags) {
    if (flags.channel == "honest") return qfp::ChannelSpec::honest();
    if (flags.channel == "sneaky") return qfp::ChannelSpec::sneaky();
    if (flags.channel == "weak-sneaky") return qfp::ChannelSpec::weakened_sneaky();
    qfp::DriftParams drift;
    drift.alpha = {flags.drift_alpha[0], flags.drift_alpha[1]};
    drift.beta = {flags.drift_beta[0], flags.drift_beta[1]};
    return qfp::ChannelSpec::drifted(drift);
}

qfp::Circuit channel_circuit(const ChannelFlags& flags) {
    return qfp::kernel_circuit(channel_spec_of(flags), {flags.xi[0], flags.xi[1]},
                               {flags.xj[0], flags.xj[1]}, flags.reps);
}

void write_or_print(const qfp::Json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        qfp::save_json(out_path, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavioral fingerprinting and observable-contract verification "
                 "for small quantum kernel channels"};
    app.set_version_flag("--version", qfp::kVersion);
    app.require_subcommand(1);

    // fingerprint ------------------------------------------------------------
    auto* fp_cmd = app.add_subcommand("fingerprint", "compute a channel fingerprint");
    ChannelFlags fp_flags;
    add_channel_flags(fp_cmd, fp_flags);
    std::string fp_family = "complete";
    bool fp_exact = false;
    long long fp_shots = 2280;
    double fp_lambda = 0.02, fp_readout = 0.01;
    std::uint64_t fp_seed = 1;
    std::string fp_out;
    fp_cmd->add_option("--family", fp_family, "weak|complete|tier2|tier3");
    fp_cmd->add_flag("--exact", fp_exact, "exact simulator expectations (no sampling)");
    fp_cmd->add_option("--shots", fp_shots, "shots per observable");
    fp_cmd->add_option("--noise-lambda", fp_lambda, "measurement depolarizing weight");
    fp_cmd->add_option("--noise-readout", fp_readout, "per-qubit readout flip probability");
    fp_cmd->add_option("--seed", fp_seed, "master seed");
    fp_cmd->add_option("--out", fp_out, "output JSON path (stdout when omitted)");

    // verify -----------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run the dual-mode verifier");
    ChannelFlags verify_flags;
    add_channel_flags(verify_cmd, verify_flags);
    std::string verify_family = "complete";
    double verify_epsilon = 0.15;
    int verify_rounds = 12;
    long long verify_shots = 2280;
    double verify_lambda = 0.02, verify_readout = 0.01;
    std::uint64_t verify_seed = 1;
    std::string verify_out, verify_reference;
    verify_cmd->add_option("--family", verify_family, "weak|complete|tier2|tier3");
    verify_cmd->add_option("--epsilon", verify_epsilon, "contract tolerance epsilon_A");
    verify_cmd->add_option("--rounds", verify_rounds, "verification rounds");
    verify_cmd->add_option("--shots", verify_shots, "shots per round");
    verify_cmd->add_option("--noise-lambda", verify_lambda, "measurement depolarizing weight");
    verify_cmd->add_option("--noise-readout", verify_readout, "per-qubit readout flip probability");
    verify_cmd->add_option("--seed", verify_seed, "master seed");
    verify_cmd->add_option("--reference", verify_reference,
                           "frozen reference fingerprint JSON (default: exact honest)");
    verify_cmd->add_option("--out", verify_out, "verdict report JSON path");

    // budget -----------------------------------------------------------------
    auto* budget_cmd = app.add_subcommand("budget", "shot budget from the margin formula");
    double b_delta = 0.5, b_epsilon = 0.15, b_frame_c = qfp::kSqrt3, b_opnorm = 1.0, b_eta = 0.05;
    int b_k = 6;
    std::string b_mode = "sampled", b_out;
    budget_cmd->add_option("--delta", b_delta, "diamond-norm separation");
    budget_cmd->add_option("--epsilon", b_epsilon, "contract tolerance epsilon_A");
    budget_cmd->add_option("--frame-c", b_frame_c, "frame-bound constant C");
    budget_cmd->add_option("--k", b_k, "family size");
    budget_cmd->add_option("--b", b_opnorm, "observable operator-norm bound B");
    budget_cmd->add_option("--eta", b_eta, "failure probability");
    budget_cmd->add_option("--mode", b_mode, "precomputed|sampled")
        ->check(CLI::IsMember({"precomputed", "sampled"}));
    budget_cmd->add_option("--out", b_out, "output JSON path (stdout when omitted)");

    // calibrate ----------------------------------------------------------------
    auto* cal_cmd = app.add_subcommand("calibrate", "tolerance interval from timepoint fingerprints");
    std::vector<std::string> cal_fps;
    double cal_delta_min = 0.5, cal_frame_c = qfp::kSqrt3;
    std::string cal_out;
    cal_cmd->add_option("--fp", cal_fps, "timepoint fingerprint JSON files (>= 2)")
        ->required()
        ->expected(-2);
    cal_cmd->add_option("--delta-min", cal_delta_min, "minimum adversarial separation");
    cal_cmd->add_option("--frame-c", cal_frame_c, "frame-bound constant C");
    cal_cmd->add_option("--out", cal_out, "output JSON path (stdout when omitted)");

    // framebound ----------------------------------------------------------------
    auto* fb_cmd = app.add_subcommand("framebound", "numeric frame-bound constant for a family");
    std::string fb_family = "complete", fb_out;
    int fb_restarts = 200, fb_iters = 1500;
    std::uint64_t fb_seed = 1;
    fb_cmd->add_option("--family", fb_family, "weak|complete|tier2|tier3|local1");
    fb_cmd->add_option("--restarts", fb_restarts, "random restarts");
    fb_cmd->add_option("--iters", fb_iters, "Nelder-Mead iterations per pass");
    fb_cmd->add_option("--seed", fb_seed, "optimizer seed");
    fb_cmd->add_option("--out", fb_out, "output JSON path (stdout when omitted)");

    // experiment ----------------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "run one of the canned experiments");
    std::string exp_which;
    exp_cmd->add_option("which", exp_which, "detection|sample|drift")
        ->required()
        ->check(CLI::IsMember({"detection", "sample", "drift"}));
    std::string exp_config, exp_out = "runs", exp_family, exp_channel;
    std::uint64_t exp_seed = 0;
    long long exp_shots = 0, exp_reference_shots = -1;
    int exp_trials = 0;
    bool exp_exact = false;
    double exp_lambda = -1.0, exp_readout = -1.0, exp_epsilon = 0.0;
    exp_cmd->add_option("--config", exp_config, "experiment config JSON file");
    exp_cmd->add_option("--out", exp_out, "output directory");
    exp_cmd->add_option("--seed", exp_seed, "master seed override");
    exp_cmd->add_option("--shots", exp_shots, "shots per observable override");
    exp_cmd->add_option("--reference-shots", exp_reference_shots,
                        "reference fingerprint shots (0 = exact)");
    exp_cmd->add_option("--trials", exp_trials, "trials per setting override");
    exp_cmd->add_flag("--exact", exp_exact, "exact expectations (no sampling)");
    exp_cmd->add_option("--family", exp_family, "weak|complete|tier2|tier3");
    exp_cmd->add_option("--channel", exp_channel, "honest|sneaky|weak-sneaky|drift");
    exp_cmd->add_option("--noise-lambda", exp_lambda, "measurement depolarizing weight");
    exp_cmd->add_option("--noise-readout", exp_readout, "per-qubit readout flip probability");
    exp_cmd->add_option("--epsilon", exp_epsilon, "contract tolerance override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fp_cmd->parsed()) {
            const auto family = qfp::observable_family(qfp::tier_from_name(fp_family));
            const qfp::Circuit circuit = channel_circuit(fp_flags);
            qfp::Fingerprint fp;
            if (fp_exact) {
                fp = qfp::compute_fingerprint(circuit, family,
                                              qfp::channel_descriptor(channel_spec_of(fp_flags)));
            } else {
                qfp::Rng rng(qfp::derive_seed(fp_seed, 0));
                fp = qfp::compute_fingerprint(circuit, family, fp_shots,
                                              qfp::NoiseModel{fp_lambda, fp_readout}, rng,
                                              qfp::channel_descriptor(channel_spec_of(fp_flags)),
                                              fp_seed);
            }
            write_or_print(qfp::to_json(fp), fp_out);
            return 0;
        }

        if (verify_cmd->parsed()) {
            const auto family = qfp::observable_family(qfp::tier_from_name(verify_family));
            const qfp::StageSpec spec = qfp::make_stage_spec(family, verify_epsilon, "honest",
                                                             qfp::iso8601_utc_now());
            ChannelFlags honest_flags = verify_flags;
            honest_flags.channel = "honest";
            qfp::Fingerprint reference;
            if (verify_reference.empty())
                reference = qfp::compute_fingerprint(channel_circuit(honest_flags), family, "honest");
            else
                reference = qfp::fingerprint_from_json(qfp::load_json(verify_reference));
            qfp::Rng rng(qfp::derive_seed(verify_seed, 0));
            const qfp::VerdictReport report = qfp::run_verifier(
                spec, reference, channel_circuit(verify_flags), verify_rounds, verify_shots,
                qfp::NoiseModel{verify_lambda, verify_readout}, rng, verify_seed);
            qfp::Json j = qfp::to_json(report);
            j["spec"] = qfp::to_json(spec);
            j["reference_source"] =
                verify_reference.empty() ? "exact-simulator" : "file:" + verify_reference;
            write_or_print(j, verify_out);
            return report.verdict == qfp::Verdict::Halt ? 2 : 0;
        }

        if (budget_cmd->parsed()) {
            qfp::BudgetParams params;
            params.delta = b_delta;
            params.epsilon_a = b_epsilon;
            params.frame_c = b_frame_c;
            params.k = b_k;
            params.opnorm_b = b_opnorm;
            params.eta = b_eta;
            params.mode =
                b_mode == "sampled" ? qfp::BudgetMode::Sampled : qfp::BudgetMode::Precomputed;
            try {
                const long long n = qfp::shot_budget(params);
                const qfp::Json j{
                    {"gamma", qfp::detection_margin(b_delta, b_frame_c, b_epsilon)},
                    {"mode", b_mode},
                    {"n_total", n},
                    {"n_per_observable", qfp::shots_per_observable(n, b_k)}};
                write_or_print(j, b_out);
            } catch (const qfp::NonPositiveMarginError& e) {
                write_or_print(qfp::Json{{"error", "non-positive margin"}, {"gamma", e.gamma()}},
                               b_out);
                return 1;
            }
            return 0;
        }

        if (cal_cmd->parsed()) {
            std::vector<qfp::Fingerprint> fps;
            for (const std::string& path : cal_fps)
                fps.push_back(qfp::fingerprint_from_json(qfp::load_json(path)));
            const qfp::ToleranceInterval interval =
                qfp::calibrate_tolerance(fps, cal_delta_min, cal_frame_c);
            write_or_print(qfp::to_json(interval), cal_out);
            return 0;
        }

        if (fb_cmd->parsed()) {
            std::vector<qfp::PauliObservable> family;
            if (fb_family == "local1")
                family = {qfp::parse_observable("X1", 1), qfp::parse_observable("Y1", 1),
                          qfp::parse_observable("Z1", 1)};
            else
                family = qfp::observable_family(qfp::tier_from_name(fb_family));
            qfp::Rng rng(fb_seed);
            const qfp::FrameBoundResult result =
                qfp::frame_bound_numeric(family, fb_restarts, fb_iters, rng);
            write_or_print(qfp::to_json(result), fb_out);
            return 0;
        }

        if (exp_cmd->parsed()) {
            qfp::ExperimentConfig config;
            if (!exp_config.empty()) config = qfp::ExperimentConfig::from_json(qfp::load_json(exp_config));
            config.experiment = exp_which;
            if (exp_cmd->count("--seed")) config.master_seed = exp_seed;
            if (exp_cmd->count("--shots")) config.shots_per_observable = exp_shots;
            if (exp_cmd->count("--reference-shots")) config.reference_shots = exp_reference_shots;
            if (exp_cmd->count("--trials")) config.trials = exp_trials;
            if (exp_cmd->count("--exact")) config.exact = exp_exact;
            if (exp_cmd->count("--family")) config.tier = qfp::tier_from_name(exp_family);
            if (exp_cmd->count("--channel")) config.channel = exp_channel;
            if (exp_cmd->count("--noise-lambda")) config.noise.depolarize_lambda = exp_lambda;
            if (exp_cmd->count("--noise-readout")) config.noise.readout_flip_eps = exp_readout;
            if (exp_cmd->count("--epsilon")) config.epsilon_a = exp_epsilon;
            if (exp_cmd->count("--out")) config.out_dir = exp_out;
            if (config.out_dir.empty()) config.out_dir = exp_out;

            const qfp::RunArtifact artifact = qfp::run_experiment(config);
            qfp::emit_report(artifact, config.out_dir, qfp::ReportFormat::Json);
            qfp::emit_report(artifact, config.out_dir, qfp::ReportFormat::Csv);
            std::cout << "wrote " << config.out_dir << "/run.json";
            for (const qfp::CsvTable& t : artifact.tables)
                std::cout << " " << config.out_dir << "/" << t.name << ".csv";
            std::cout << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
