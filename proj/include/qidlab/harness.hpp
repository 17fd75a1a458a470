#pragma once

#include "qidlab/idcodes.hpp"
#include "qidlab/orthogonalize.hpp"

namespace qidlab {

inline constexpr const char* kVersion = "qidlab 0.1.0";

/// Channel description that can be stored in a config file.
struct ChannelSpec {
    std::string kind;  // identity | trace | extended | cq | kraus
    int dim = 2;       // identity, trace
    int dA = 2, dC = 1;
    std::vector<std::vector<double>> w;  // cq
    json kraus;                          // inline channel JSON

    KrausChannel build() const;
    json to_json() const;
    static ChannelSpec from_json(const json& j);
};

/// One end-to-end run: transmission code -> orthogonal pure code ->
/// subset family -> zero-entropy ID code -> verification and bounds.
struct ExperimentConfig {
    uint64_t seed = 0;
    ChannelSpec channel;
    int block_n = 1;
    int messages = 2;
    CodeKind code_kind = CodeKind::haar;
    DecoderKind decoder_kind = DecoderKind::pgm;
    double family_eps = 0.5;
    double family_lambda = 0.5;
    int family_count = 2;
    int trials = 200;
    int samples = 0;      // concentration stage; 0 skips it
    std::string out_dir;  // empty: keep artifacts in memory only
    bool timings = false;

    json to_json() const;
    static ExperimentConfig from_json(const json& j);
};

struct ExperimentReport {
    json body;       // stage blocks, bounds, version, seed
    bool bounds_ok = true;

    json to_json() const { return body; }
};

/// Runs all stages, writes artifacts under out_dir when set, and returns the
/// report. Stage failures surface as PipelineFailure.
ExperimentReport run_pipeline(const ExperimentConfig& config);

/// Exit code contract: 0 ok, 2 bound violation.
int pipeline_exit_code(const ExperimentReport& report);

/// Cartesian sweep over config fields. Grid JSON:
///   {"base": <config>, "grid": {"messages": [4,8], "family.lambda": [0,0.5]}}
/// Keys are sorted; the rightmost key varies fastest. Returns CSV text with
/// LF line endings and '.' decimals. Failed points are flagged in the status
/// column and the sweep continues.
std::string run_sweep_csv(const json& grid_config);

}  // namespace qidlab
