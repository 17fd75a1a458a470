// Command-line front end: every subcommand reads/writes the JSON artifact
// formats of the library, so runs can be chained and re-verified.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qidlab/counterexample.hpp"
#include "qidlab/errors.hpp"
#include "qidlab/harness.hpp"
#include "qidlab/rng.hpp"

namespace {

using namespace qidlab;

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitNumericalError = 4;

struct CliOptions {
    // gen-channel
    std::string channel_kind = "identity";
    int dim = 2, dA = 2, dC = 1;
    std::string w_path;
    // gen-code
    std::string channel_path, code_kind = "haar", decoder_kind = "pgm";
    int block_n = 1, messages = 2;
    uint64_t seed = 1;
    // gen-family
    int ground_M = 4, count = 2;
    double eps = 0.5, lambda = 0.5;
    long long max_attempts = -1;
    bool exhaustive = false;
    // build-id / verify-id / orthogonalize
    std::string mode = "zero-entropy";
    std::string code_path, family_path, report_path;
    int trials = 200;
    // counterexample
    int K = 2, M = 3, samples = 0;
    std::string phases_arg;
    // pipeline / sweep
    std::string config_path;
    // shared
    std::string out_path;
};

std::vector<double> parse_phases(const std::string& arg) {
    std::vector<double> phases;
    size_t start = 0;
    while (start <= arg.size()) {
        const size_t comma = arg.find(',', start);
        const std::string tok = arg.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!tok.empty()) phases.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return phases;
}

int cmd_gen_channel(const CliOptions& opt) {
    ChannelSpec spec;
    spec.kind = opt.channel_kind;
    spec.dim = opt.dim;
    spec.dA = opt.dA;
    spec.dC = opt.dC;
    if (spec.kind == "cq") spec.w = load_json_file(opt.w_path).get<std::vector<std::vector<double>>>();
    write_json_file(opt.out_path, spec.build().to_json());
    return kExitOk;
}

int cmd_gen_code(const CliOptions& opt) {
    const KrausChannel channel = KrausChannel::from_json(load_json_file(opt.channel_path));
    const TransmissionCode code =
        random_code(channel, opt.block_n, opt.messages, code_kind_from_string(opt.code_kind),
                    decoder_kind_from_string(opt.decoder_kind), opt.seed);
    write_json_file(opt.out_path, code.to_json());
    std::cout << "messages=" << code.messages() << " avg_error=" << avg_error(code)
              << " max_error=" << max_error(code) << '\n';
    return kExitOk;
}

int cmd_orthogonalize(const CliOptions& opt) {
    const TransmissionCode code = TransmissionCode::from_json(load_json_file(opt.code_path));
    auto [ocode, report] = orthogonalize_code(code);
    write_json_file(opt.out_path, ocode.to_json());
    if (!opt.report_path.empty()) write_json_file(opt.report_path, report.to_json());
    std::cout << "M=" << report.M << " L=" << report.L << " M'=" << report.M_prime
              << " delta_out=" << report.delta_out << " bound=" << report.bound_delta << '\n';
    return report.delta_out <= report.bound_delta + tol::fvg ? kExitOk : kExitBoundViolation;
}

int cmd_gen_family(const CliOptions& opt) {
    if (!family_condition_holds(opt.eps, opt.lambda))
        std::cerr << "warning: lambda*log2(1/eps - 1) <= 2; the existence guarantee does not apply\n";
    const SubsetFamily family = opt.exhaustive
                                    ? exhaustive_family(opt.ground_M, opt.eps, opt.lambda, opt.count)
                                    : generate_family(opt.ground_M, opt.eps, opt.lambda, opt.count,
                                                      opt.seed, opt.max_attempts);
    const FamilyCheck check = verify_family(family);
    write_json_file(opt.out_path, family.to_json());
    std::cout << "subsets=" << family.subsets.size() << " size=" << family.subset_size
              << " worst_overlap=" << check.worst_overlap << '\n';
    return check.ok ? kExitOk : kExitBoundViolation;
}

int cmd_build_id(const CliOptions& opt) {
    const TransmissionCode code = TransmissionCode::from_json(load_json_file(opt.code_path));
    const SubsetFamily family = SubsetFamily::from_json(load_json_file(opt.family_path));
    if (opt.mode == "loeber") {
        const IdCode id = build_loeber_code(code, family);
        write_json_file(opt.out_path, id.to_json());
        return kExitOk;
    }
    if (opt.mode == "zero-entropy") {
        auto [id, stats] = build_zero_entropy_code(code, family, PhasePolicy::uniform, opt.seed, opt.trials);
        write_json_file(opt.out_path, id.to_json());
        if (!opt.report_path.empty()) write_json_file(opt.report_path, stats.to_json());
        std::cout << "delta=" << stats.delta << " rejections=" << stats.total_rejections() << '\n';
        return kExitOk;
    }
    throw BadParams("unknown build-id mode: " + opt.mode);
}

int cmd_verify_id(const CliOptions& opt) {
    const IdCode code = IdCode::from_json(load_json_file(opt.code_path));
    const IdErrorReport report = verify_id_code(code);
    json out = report.to_json();
    try {
        out["size_bounds"] = check_size_bounds(code, report).to_json();
    } catch (const TrivialRegime&) {
        out["size_bounds"] = nullptr;
    }
    if (!opt.report_path.empty()) write_json_file(opt.report_path, out);
    std::cout << "lambda1_max=" << report.lambda1_max << " lambda2_max=" << report.lambda2_max << '\n';
    return kExitOk;
}

int cmd_counterexample(const CliOptions& opt) {
    const CounterexampleInstance inst = build_counterexample(opt.K, opt.M);
    json out{{"K", opt.K},
             {"M", opt.M},
             {"tr_psi_D", fixed_phase_failure(inst)},
             {"tr_phi_F_first", std::real(
                  inst.basis[0].dot(inst.povm.effect(0) * inst.basis[0]))},
             {"expected_first", (1.0 - 1.0 / opt.K) * (1.0 - 1.0 / opt.K)}};
    if (!opt.phases_arg.empty()) {
        const auto phases = parse_phases(opt.phases_arg);
        const DetectionResult det = random_phase_detection(inst, phases);
        out["detection"] = det.tr_detection;
        out["closed_form"] = det.closed_form;
    } else if (opt.samples > 0) {
        out["mean_detection"] = mean_random_phase_detection(inst, opt.samples, opt.seed);
        out["expected_mean"] = 1.0 - 1.0 / opt.K;
        out["samples"] = opt.samples;
    }
    std::cout << out.dump(2) << '\n';
    if (!opt.out_path.empty()) write_json_file(opt.out_path, out);
    return kExitOk;
}

int cmd_pipeline(const CliOptions& opt) {
    const ExperimentConfig config = ExperimentConfig::from_json(load_json_file(opt.config_path));
    const ExperimentReport report = run_pipeline(config);
    if (config.out_dir.empty()) std::cout << report.to_json().dump(2) << '\n';
    return pipeline_exit_code(report);
}

int cmd_sweep(const CliOptions& opt) {
    const std::string csv = run_sweep_csv(load_json_file(opt.config_path));
    if (opt.out_path.empty())
        std::cout << csv;
    else
        write_text_file(opt.out_path, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"identification-via-quantum-channels laboratory"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* gen_channel = app.add_subcommand("gen-channel", "write a channel JSON");
    gen_channel->add_option("--kind", opt.channel_kind)->check(CLI::IsMember({"identity", "trace", "extended", "cq"}));
    gen_channel->add_option("--dim", opt.dim);
    gen_channel->add_option("--dA", opt.dA);
    gen_channel->add_option("--dC", opt.dC);
    gen_channel->add_option("--W", opt.w_path, "row-stochastic matrix JSON (cq)");
    gen_channel->add_option("--out", opt.out_path)->required();

    auto* gen_code = app.add_subcommand("gen-code", "generate a seeded transmission code");
    gen_code->add_option("--channel", opt.channel_path)->required();
    gen_code->add_option("--n", opt.block_n)->required();
    gen_code->add_option("--messages", opt.messages)->required();
    gen_code->add_option("--kind", opt.code_kind)->check(CLI::IsMember({"haar", "basis"}));
    gen_code->add_option("--decoder", opt.decoder_kind)->check(CLI::IsMember({"pgm", "projective"}));
    gen_code->add_option("--seed", opt.seed)->required();
    gen_code->add_option("--out", opt.out_path)->required();

    auto* ortho = app.add_subcommand("orthogonalize", "pure orthogonal code from a transmission code");
    ortho->add_option("--code", opt.code_path)->required();
    ortho->add_option("--out", opt.out_path)->required();
    ortho->add_option("--report", opt.report_path);

    auto* gen_family = app.add_subcommand("gen-family", "subsets with bounded pairwise overlap");
    gen_family->add_option("--M", opt.ground_M)->required();
    gen_family->add_option("--eps", opt.eps)->required();
    gen_family->add_option("--lambda", opt.lambda)->required();
    gen_family->add_option("--count", opt.count)->required();
    gen_family->add_option("--seed", opt.seed);
    gen_family->add_option("--max-attempts", opt.max_attempts);
    gen_family->add_flag("--exhaustive", opt.exhaustive, "enumerate all subsets (M <= 20)");
    gen_family->add_option("--out", opt.out_path)->required();

    auto* build_id = app.add_subcommand("build-id", "identification code from code + family");
    build_id->add_option("--mode", opt.mode)->check(CLI::IsMember({"loeber", "zero-entropy"}));
    build_id->add_option("--code", opt.code_path)->required();
    build_id->add_option("--family", opt.family_path)->required();
    build_id->add_option("--seed", opt.seed);
    build_id->add_option("--trials", opt.trials);
    build_id->add_option("--out", opt.out_path)->required();
    build_id->add_option("--report", opt.report_path, "build statistics (zero-entropy mode)");

    auto* verify_id = app.add_subcommand("verify-id", "evaluate both error kinds of an ID code");
    verify_id->add_option("--code", opt.code_path)->required();
    verify_id->add_option("--report", opt.report_path);

    auto* cx = app.add_subcommand("counterexample", "adversarial POVM demonstration");
    cx->add_option("--K", opt.K)->required();
    cx->add_option("--M", opt.M)->required();
    cx->add_option("--phases", opt.phases_arg, "comma-separated K phase angles");
    cx->add_option("--samples", opt.samples);
    cx->add_option("--seed", opt.seed);
    cx->add_option("--out", opt.out_path);

    auto* pipeline = app.add_subcommand("pipeline", "seeded end-to-end run from a config file");
    pipeline->add_option("--config", opt.config_path)->required();

    auto* sweep = app.add_subcommand("sweep", "grid of pipeline runs, CSV output");
    sweep->add_option("--config", opt.config_path)->required();
    sweep->add_option("--out", opt.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (gen_channel->parsed()) return cmd_gen_channel(opt);
        if (gen_code->parsed()) return cmd_gen_code(opt);
        if (ortho->parsed()) return cmd_orthogonalize(opt);
        if (gen_family->parsed()) return cmd_gen_family(opt);
        if (build_id->parsed()) return cmd_build_id(opt);
        if (verify_id->parsed()) return cmd_verify_id(opt);
        if (cx->parsed()) return cmd_counterexample(opt);
        if (pipeline->parsed()) return cmd_pipeline(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
    } catch (const BadParams& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumericalError;
    }
    return kExitConfigError;
}
