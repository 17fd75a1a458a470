#include "qidlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "qidlab/errors.hpp"
#include "qidlab/rng.hpp"

namespace qidlab {

KrausChannel ChannelSpec::build() const {
    if (kind == "identity") return make_identity_channel(dim);
    if (kind == "trace") return make_trace_channel(dim);
    if (kind == "extended") return make_extended_channel(dA, dC);
    if (kind == "cq") return classical_channel_as_cq(w);
    if (kind == "kraus") return KrausChannel::from_json(kraus);
    throw BadParams("unknown channel kind: " + kind);
}

json ChannelSpec::to_json() const {
    json j{{"kind", kind}};
    if (kind == "identity" || kind == "trace") j["dim"] = dim;
    if (kind == "extended") {
        j["dA"] = dA;
        j["dC"] = dC;
    }
    if (kind == "cq") j["W"] = w;
    if (kind == "kraus") j["channel"] = kraus;
    return j;
}

ChannelSpec ChannelSpec::from_json(const json& j) {
    ChannelSpec spec;
    spec.kind = j.at("kind").get<std::string>();
    if (spec.kind == "identity" || spec.kind == "trace") spec.dim = j.at("dim").get<int>();
    if (spec.kind == "extended") {
        spec.dA = j.at("dA").get<int>();
        spec.dC = j.at("dC").get<int>();
    }
    if (spec.kind == "cq") spec.w = j.at("W").get<std::vector<std::vector<double>>>();
    if (spec.kind == "kraus") spec.kraus = j.at("channel");
    spec.build();  // validate now
    return spec;
}

json ExperimentConfig::to_json() const {
    return json{{"seed", seed},
                {"channel", channel.to_json()},
                {"block_n", block_n},
                {"messages", messages},
                {"code_kind", code_kind == CodeKind::basis ? "basis" : "haar"},
                {"decoder_kind", decoder_kind == DecoderKind::pgm ? "pgm" : "projective"},
                {"family", json{{"eps", family_eps}, {"lambda", family_lambda}, {"count", family_count}}},
                {"trials", trials},
                {"samples", samples},
                {"out_dir", out_dir},
                {"timings", timings}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    if (!j.contains("seed")) throw BadParams("config: seed is mandatory");
    c.seed = j.at("seed").get<uint64_t>();
    c.channel = ChannelSpec::from_json(j.at("channel"));
    c.block_n = j.at("block_n").get<int>();
    c.messages = j.at("messages").get<int>();
    c.code_kind = code_kind_from_string(j.value("code_kind", "haar"));
    c.decoder_kind = decoder_kind_from_string(j.value("decoder_kind", "pgm"));
    const auto& fam = j.at("family");
    c.family_eps = fam.at("eps").get<double>();
    c.family_lambda = fam.at("lambda").get<double>();
    c.family_count = fam.at("count").get<int>();
    c.trials = j.value("trials", 200);
    c.samples = j.value("samples", 0);
    c.out_dir = j.value("out_dir", std::string{});
    c.timings = j.value("timings", false);
    if (c.block_n < 1 || c.messages < 1 || c.trials < 1 || c.samples < 0)
        throw BadParams("config: sizes must be positive");
    return c;
}

namespace {

class StageTimer {
  public:
    explicit StageTimer(bool enabled) : enabled_(enabled) {}

    template <typename F>
    auto run(const std::string& name, F&& f) -> decltype(f()) {
        const auto start = std::chrono::steady_clock::now();
        try {
            auto result = f();
            record(name, start);
            return result;
        } catch (const PipelineFailure&) {
            throw;
        } catch (const Error& e) {
            throw PipelineFailure(name, e.what());
        }
    }

    const json& timings() const { return timings_; }

  private:
    void record(const std::string& name, std::chrono::steady_clock::time_point start) {
        if (!enabled_) return;
        const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        timings_[name] = static_cast<double>(us) / 1000.0;
    }

    bool enabled_;
    json timings_ = json::object();
};

}  // namespace

ExperimentReport run_pipeline(const ExperimentConfig& config) {
    ExperimentReport report;
    report.body = json::object();
    report.body["version"] = kVersion;
    report.body["seed"] = config.seed;
    report.body["config"] = config.to_json();
    json violations = json::array();
    StageTimer timer(config.timings);

    const KrausChannel channel = timer.run("channel", [&] { return config.channel.build(); });

    const TransmissionCode tcode = timer.run("transmission", [&] {
        return random_code(channel, config.block_n, config.messages, config.code_kind,
                           config.decoder_kind, derive_seed(config.seed, "code"));
    });
    report.body["stages"]["transmission"] = json{{"messages", tcode.messages()},
                                                 {"avg_error", avg_error(tcode)},
                                                 {"max_error", max_error(tcode)}};

    auto [ocode, ortho_report] = timer.run("orthogonalize", [&] { return orthogonalize_code(tcode); });
    report.body["stages"]["orthogonalize"] = ortho_report.to_json();
    if (ortho_report.gram_deviation > tol::orth)
        violations.push_back("orthogonalize: Gram deviation above tolerance");
    const double m_floor =
        std::floor((1.0 - ortho_report.eps_in) * (1.0 - ortho_report.eps_in) * ortho_report.M / 2.0);
    if (ortho_report.M_prime < static_cast<int>(m_floor))
        violations.push_back("orthogonalize: M' below (1-eps)^2 M / 2");
    if (ortho_report.delta_out > ortho_report.bound_delta + tol::fvg)
        violations.push_back("orthogonalize: max error above the analytic bound");

    const SubsetFamily family = timer.run("family", [&] {
        return generate_family(ocode.messages(), config.family_eps, config.family_lambda,
                               config.family_count, derive_seed(config.seed, "family"));
    });
    const FamilyCheck fcheck = verify_family(family);
    report.body["stages"]["family"] =
        json{{"count", static_cast<int>(family.subsets.size())},
             {"size", family.subset_size},
             {"worst_overlap", fcheck.worst_overlap},
             {"ok", fcheck.ok},
             {"condition_holds", family_condition_holds(config.family_eps, config.family_lambda)}};

    auto [idcode, build_stats] = timer.run("zero_entropy", [&] {
        return build_zero_entropy_code(ocode, family, PhasePolicy::uniform,
                                       derive_seed(config.seed, "phases"), config.trials);
    });
    const IdErrorReport id_report = timer.run("verify", [&] { return verify_id_code(idcode); });
    const double thr1 = 3.0 * build_stats.delta;
    const double thr2 = 5.0 * build_stats.delta;
    report.body["stages"]["zero_entropy"] = json{{"build", build_stats.to_json()},
                                                 {"report", id_report.to_json()},
                                                 {"bound_lambda1", thr1},
                                                 {"bound_lambda2", thr2}};
    if (id_report.lambda1_max > thr1 + 1e-12) violations.push_back("zero_entropy: lambda1 above 3*delta");
    if (id_report.lambda2_max > thr2 + 1e-12) violations.push_back("zero_entropy: lambda2 above 5*delta");

    const SizeBoundCheck size_check =
        timer.run("size_bounds", [&] { return check_size_bounds(idcode, id_report); });
    report.body["stages"]["size_bounds"] = size_check.to_json();
    if (!size_check.satisfied) violations.push_back("size_bounds: dimension bound violated");

    if (config.samples > 0) {
        const ConcentrationStats conc = timer.run("concentration", [&] {
            return estimate_concentration(ocode, family, 0, std::max(build_stats.delta, 1e-6),
                                          config.samples, derive_seed(config.seed, "concentration"));
        });
        report.body["stages"]["concentration"] = conc.to_json();
    }

    report.bounds_ok = violations.empty();
    report.body["violations"] = violations;
    report.body["bounds_ok"] = report.bounds_ok;
    if (config.timings) report.body["timings_ms"] = timer.timings();

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        const auto path = [&](const char* name) { return (fs::path(config.out_dir) / name).string(); };
        write_json_file(path("tcode.json"), tcode.to_json());
        write_json_file(path("ocode.json"), ocode.to_json());
        write_json_file(path("ortho_report.json"), ortho_report.to_json());
        write_json_file(path("family.json"), family.to_json());
        write_json_file(path("idcode.json"), idcode.to_json());
        write_json_file(path("id_report.json"), id_report.to_json());
        write_json_file(path("report.json"), report.body);
    }
    return report;
}

int pipeline_exit_code(const ExperimentReport& report) { return report.bounds_ok ? 0 : 2; }

namespace {

void set_by_path(json& target, const std::string& path, const json& value) {
    json* node = &target;
    size_t start = 0;
    while (true) {
        const size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw BadParams("sweep: empty key in path '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

std::string cell_from_json(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

}  // namespace

std::string run_sweep_csv(const json& grid_config) {
    if (!grid_config.contains("base") || !grid_config.contains("grid"))
        throw BadParams("sweep config needs 'base' and 'grid'");
    const json& base = grid_config["base"];
    const json& grid = grid_config["grid"];
    if (!grid.is_object() || grid.empty()) throw BadParams("sweep grid must be a non-empty object");
    const bool timings = grid_config.value("timings", false);

    std::vector<std::string> keys;
    for (auto it = grid.begin(); it != grid.end(); ++it) {
        if (!it.value().is_array() || it.value().empty())
            throw BadParams("sweep grid entry '" + it.key() + "' must be a non-empty array");
        keys.push_back(it.key());
    }
    std::sort(keys.begin(), keys.end());

    std::ostringstream csv;
    for (const auto& k : keys) csv << k << ',';
    csv << "lambda1_max,lambda2_max,bound_lambda1,bound_lambda2,rejections,runtime_ms,status\n";

    std::vector<size_t> idx(keys.size(), 0);
    bool done = false;
    while (!done) {
        json config_json = base;
        for (size_t i = 0; i < keys.size(); ++i)
            set_by_path(config_json, keys[i], grid[keys[i]][idx[i]]);
        for (size_t i = 0; i < keys.size(); ++i) csv << cell_from_json(grid[keys[i]][idx[i]]) << ',';

        const auto start = std::chrono::steady_clock::now();
        std::string status = "ok";
        json row = json::object();
        try {
            ExperimentConfig config = ExperimentConfig::from_json(config_json);
            config.out_dir.clear();  // sweeps do not write per-point artifacts
            config.timings = false;
            const ExperimentReport rep = run_pipeline(config);
            const json& ze = rep.body["stages"]["zero_entropy"];
            row["lambda1_max"] = ze["report"]["lambda1_max"];
            row["lambda2_max"] = ze["report"]["lambda2_max"];
            row["bound_lambda1"] = ze["bound_lambda1"];
            row["bound_lambda2"] = ze["bound_lambda2"];
            row["rejections"] = ze["build"]["total_rejections"];
            if (!rep.bounds_ok) status = "bound_violation";
        } catch (const PipelineFailure& e) {
            status = "error:" + e.stage;
        } catch (const Error&) {
            status = "error";
        }
        for (const char* col : {"lambda1_max", "lambda2_max", "bound_lambda1", "bound_lambda2", "rejections"}) {
            if (row.contains(col)) csv << cell_from_json(row[col]);
            csv << ',';
        }
        if (timings) {
            const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            csv << format_double(static_cast<double>(us) / 1000.0);
        }
        csv << ',' << status << '\n';

        // odometer, rightmost key fastest
        size_t pos = keys.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < grid[keys[pos]].size()) break;
            idx[pos] = 0;
            if (pos == 0) done = true;
        }
    }
    return csv.str();
}

}  // namespace qidlab
