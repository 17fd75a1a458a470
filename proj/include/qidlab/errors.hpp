#pragma once

#include <stdexcept>
#include <string>

namespace qidlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
    using Error::Error;
};
struct NotPsd : Error {
    using Error::Error;
};
struct DimMismatch : Error {
    using Error::Error;
};
struct DimGuardExceeded : Error {
    using Error::Error;
};
struct NotStochastic : Error {
    using Error::Error;
};
struct BadDistribution : Error {
    using Error::Error;
};
struct EmptyCode : Error {
    using Error::Error;
};
struct SizeMismatch : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct AllZero : Error {
    using Error::Error;
};
struct TargetUnreachable : Error {
    using Error::Error;
};
struct RankTooHigh : Error {
    using Error::Error;
};
struct TrivialRegime : Error {
    using Error::Error;
};
struct BadParams : Error {
    using Error::Error;
};

// Phase search for one message ran out of retries.
struct PhaseSearchExhausted : Error {
    int message_index;
    explicit PhaseSearchExhausted(int j, const std::string& what) : Error(what), message_index(j) {}
};

// A pipeline stage failed; carries the stage name.
struct PipelineFailure : Error {
    std::string stage;
    PipelineFailure(std::string stage_name, const std::string& what)
        : Error("stage '" + stage_name + "': " + what), stage(std::move(stage_name)) {}
};

}  // namespace qidlab
