#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavmap/pipeline.hpp"

namespace cavmap::cli {

struct CurveSpec {
    enum class Kind { Ellipse, Laurent, None };
    Kind kind = Kind::None;
    double semiMajor = 0.0;
    double semiMinor = 0.0;
    LaurentMap map;

    ParamCurve build(int nodes) const;
};

struct SweepSpec {
    enum class Kind { CenterAbscissa, Noise };
    Kind kind = Kind::CenterAbscissa;
    std::vector<double> values;
};

/// Effective run configuration: config file merged with flag overrides.
struct RunConfig {
    CurveSpec outer;
    CurveSpec cavity;
    int nodes = 256;
    int order = 8;
    Complex center{0.0, 0.0};
    double noise = 0.0;
    std::vector<std::uint64_t> seeds;
    CoeffVariant variant = CoeffVariant::Corrected;
    std::string outDir = "out";
    std::optional<SweepSpec> sweep;
    std::string hash; // FNV-1a of the canonical serialization

    std::optional<LaurentMap> truthMap() const;
};

/// Parses and validates a JSON configuration document.
/// Throws ConfigError on malformed input.
RunConfig parseConfigText(const std::string& jsonText);
RunConfig loadConfig(const std::string& path);

/// Pipeline runners; they write their outputs under config.outDir and throw
/// on failure (ConfigError -> exit 2, any other Error -> exit 3).
void runForward(const RunConfig& config);
void runReconstruct(const RunConfig& config, const std::string& measurementDir);
void runSweep(const RunConfig& config);
void runOracleCheck(const RunConfig& config);

/// Full command-line entry point; returns the process exit code
/// (0 success, 2 configuration error, 3 numerical failure).
int dispatch(int argc, const char* const* argv);

} // namespace cavmap::cli
