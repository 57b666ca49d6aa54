#include "cavmap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavmap/oracle.hpp"

namespace cavmap::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Complex parseComplex(const json& j, const char* what) {
    if (j.is_number()) return Complex{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex{j[0].get<double>(), j[1].get<double>()};
    }
    throw ConfigError(std::string(what) + " must be a number or [re, im] pair");
}

json complexToJson(Complex z) { return json::array({z.real(), z.imag()}); }

CurveSpec parseCurveSpec(const json& j, const char* what, bool allowEllipse, bool allowNone) {
    if (!j.is_object() || !j.contains("type")) {
        throw ConfigError(std::string(what) + " must be an object with a \"type\" field");
    }
    const std::string type = j.at("type").get<std::string>();
    CurveSpec spec;
    if (type == "none") {
        if (!allowNone) throw ConfigError(std::string(what) + " cannot be \"none\"");
        spec.kind = CurveSpec::Kind::None;
        return spec;
    }
    if (type == "ellipse") {
        if (!allowEllipse) throw ConfigError(std::string(what) + " cannot be an ellipse");
        spec.kind = CurveSpec::Kind::Ellipse;
        spec.semiMajor = j.at("semiMajor").get<double>();
        spec.semiMinor = j.at("semiMinor").get<double>();
        if (!(spec.semiMajor >= spec.semiMinor && spec.semiMinor > 0.0)) {
            throw ConfigError("ellipse requires semiMajor >= semiMinor > 0");
        }
        return spec;
    }
    if (type == "laurent") {
        spec.kind = CurveSpec::Kind::Laurent;
        spec.map.a1 = parseComplex(j.at("a1"), "a1");
        spec.map.a0 = j.contains("a0") ? parseComplex(j.at("a0"), "a0") : Complex{0.0, 0.0};
        if (j.contains("neg")) {
            for (const auto& c : j.at("neg")) {
                spec.map.negCoeffs.push_back(parseComplex(c, "neg coefficient"));
            }
        }
        if (spec.map.a1 == Complex{0.0, 0.0}) throw ConfigError("a1 must be nonzero");
        return spec;
    }
    throw ConfigError(std::string(what) + ": unknown curve type \"" + type + "\"");
}

json curveSpecToJson(const CurveSpec& spec) {
    json j;
    switch (spec.kind) {
    case CurveSpec::Kind::None:
        j["type"] = "none";
        break;
    case CurveSpec::Kind::Ellipse:
        j["type"] = "ellipse";
        j["semiMajor"] = spec.semiMajor;
        j["semiMinor"] = spec.semiMinor;
        break;
    case CurveSpec::Kind::Laurent:
        j["type"] = "laurent";
        j["a1"] = complexToJson(spec.map.a1);
        j["a0"] = complexToJson(spec.map.a0);
        j["neg"] = json::array();
        for (const Complex& c : spec.map.negCoeffs) j["neg"].push_back(complexToJson(c));
        break;
    }
    return j;
}

std::string canonicalSerialization(const RunConfig& c) {
    json j;
    j["outer"] = curveSpecToJson(c.outer);
    j["cavity"] = curveSpecToJson(c.cavity);
    j["nodes"] = c.nodes;
    j["order"] = c.order;
    j["center"] = complexToJson(c.center);
    j["noise"] = c.noise;
    j["seeds"] = c.seeds;
    j["variant"] = c.variant == CoeffVariant::Corrected ? "corrected" : "literal";
    j["out"] = c.outDir;
    if (c.sweep) {
        j["sweep"]["type"] = c.sweep->kind == SweepSpec::Kind::Noise ? "noise" : "center-abscissa";
        j["sweep"]["values"] = c.sweep->values;
    }
    return j.dump();
}

void validate(RunConfig& config) {
    if (config.nodes < 16 || config.nodes % 2 != 0) {
        throw ConfigError("nodes must be even and >= 16");
    }
    if (config.order < 2 || config.order > 16) {
        throw ConfigError("order must be in [2, 16]");
    }
    if (config.noise < 0.0 || config.noise > 1.0) {
        throw ConfigError("noise must be in [0, 1]");
    }
    if (config.seeds.empty()) {
        for (std::uint64_t s = 1; s <= 20; ++s) config.seeds.push_back(s);
    }
    config.hash = hex64(fnv1a64(canonicalSerialization(config)));
}

std::string commentLine(const RunConfig& config, double scale) {
    return "# config_hash=" + config.hash + " scale=" + fmt(scale) + "\n";
}

void writeFileAtomically(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file " + path.string());
    out << contents;
    if (!out.good()) throw Error("failed writing " + path.string());
}

std::string complexMatrixCsv(const RunConfig& config, double scale, const Eigen::MatrixXcd& m) {
    std::string s = commentLine(config, scale);
    s += "i,j,re,im\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            s += std::to_string(i) + "," + std::to_string(j) + "," + fmt(m(i, j).real()) + "," +
                 fmt(m(i, j).imag()) + "\n";
        }
    }
    return s;
}

Eigen::MatrixXcd readComplexMatrixCsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::vector<std::tuple<int, int, Complex>> cells;
    int maxIdx = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        std::istringstream row(line);
        std::string field;
        int idx[2] = {0, 0};
        double val[2] = {0.0, 0.0};
        for (int f = 0; f < 4; ++f) {
            if (!std::getline(row, field, ',')) throw ConfigError("malformed CSV in " + path.string());
            if (f < 2) idx[f] = std::stoi(field);
            else val[f - 2] = std::strtod(field.c_str(), nullptr);
        }
        cells.emplace_back(idx[0], idx[1], Complex{val[0], val[1]});
        maxIdx = std::max({maxIdx, idx[0], idx[1]});
    }
    if (maxIdx < 0) throw ConfigError("empty matrix file " + path.string());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(maxIdx + 1, maxIdx + 1);
    for (const auto& [i, j, v] : cells) m(i, j) = v;
    return m;
}

std::vector<Complex> sampleMap(const LaurentMap& map, int count) {
    std::vector<Complex> pts(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double t = -kPi + kTwoPi * (j + 1) / count;
        pts[static_cast<std::size_t>(j)] = map.eval(std::polar(1.0, t));
    }
    return pts;
}

std::string svgOverlay(const RunConfig& config, double scale,
                       const std::vector<Complex>& recon,
                       const std::optional<std::vector<Complex>>& truth, Complex center) {
    double xmin = center.real(), xmax = center.real();
    double ymin = center.imag(), ymax = center.imag();
    auto grow = [&](const std::vector<Complex>& pts) {
        for (const Complex& p : pts) {
            xmin = std::min(xmin, p.real());
            xmax = std::max(xmax, p.real());
            ymin = std::min(ymin, p.imag());
            ymax = std::max(ymax, p.imag());
        }
    };
    grow(recon);
    if (truth) grow(*truth);
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double pad = 0.08 * span;
    xmin -= pad;
    ymin -= pad;
    const double box = span + 2.0 * pad;
    const double view = 640.0;
    auto px = [&](Complex p) {
        const double x = (p.real() - xmin) / box * view;
        const double y = view - (p.imag() - ymin) / box * view;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g", x, y);
        return std::string(buf);
    };
    auto polygon = [&](const std::vector<Complex>& pts, const char* stroke) {
        std::string s = "  <polygon fill=\"none\" stroke=\"" + std::string(stroke) +
                        "\" stroke-width=\"2\" points=\"";
        for (const Complex& p : pts) s += px(p) + " ";
        s += "\"/>\n";
        return s;
    };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 640\">\n";
    s += "  <!-- config_hash=" + config.hash + " scale=" + fmt(scale) + " -->\n";
    if (truth) s += polygon(*truth, "#9a9a9a");
    s += polygon(recon, "#cc2222");
    s += "  <circle cx=\"" + px(center).substr(0, px(center).find(',')) + "\" cy=\"" +
         px(center).substr(px(center).find(',') + 1) + "\" r=\"4\" fill=\"#2244cc\"/>\n";
    s += "</svg>\n";
    return s;
}

struct MeasurementFiles {
    MeasurementMatrix measurement;
    GpstMatrix outerGram;
    Complex centerScaled;
    double scale = 1.0;
    int order = 0;
};

MeasurementFiles readMeasurementDir(const std::filesystem::path& dir) {
    std::ifstream metaIn(dir / "meta.json");
    if (!metaIn) throw ConfigError("cannot read " + (dir / "meta.json").string());
    MeasurementFiles files;
    try {
        json meta = json::parse(metaIn, nullptr, true, true);
        files.scale = meta.at("scale").get<double>();
        files.order = meta.at("order").get<int>();
        files.centerScaled = parseComplex(meta.at("center_scaled"), "center_scaled");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid meta.json: ") + e.what());
    }

    files.measurement.entries = readComplexMatrixCsv(dir / "R.csv");
    files.measurement.order = files.order;
    files.measurement.scale = files.scale;
    files.outerGram.entries = readComplexMatrixCsv(dir / "QGamma.csv");
    files.outerGram.order = files.order;
    files.outerGram.boundary = GpstBoundary::OuterExact;

    if (files.measurement.entries.rows() != 2 * files.order ||
        files.outerGram.entries.rows() != 2 * files.order) {
        throw ConfigError("measurement files do not match the recorded order");
    }
    return files;
}

std::string coefficientsCsv(const RunConfig& config, double scale, const LaurentMap& map,
                            const std::optional<LaurentMap>& truth) {
    std::string s = commentLine(config, scale);
    s += truth ? "k,re,im,rel_err\n" : "k,re,im\n";
    for (int idx = 0; idx < map.order() + 2; ++idx) {
        const int k = 1 - idx;
        const Complex v = map.coeff(k);
        s += std::to_string(k) + "," + fmt(v.real()) + "," + fmt(v.imag());
        if (truth) {
            const Complex t = truth->coeff(k);
            s += ",";
            if (std::abs(t) > 0.0) s += fmt(std::abs(v - t) / std::abs(t));
        }
        s += "\n";
    }
    return s;
}

LaurentMap truncated(const LaurentMap& map, int order) {
    LaurentMap out = map;
    out.negCoeffs.resize(static_cast<std::size_t>(std::min(order, map.order())));
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

ParamCurve CurveSpec::build(int nodes) const {
    switch (kind) {
    case Kind::Ellipse:
        return ellipse(semiMajor, semiMinor, nodes);
    case Kind::Laurent:
        return fromLaurent(map, nodes);
    case Kind::None:
        break;
    }
    throw ConfigError("cannot build a curve from an empty spec");
}

std::optional<LaurentMap> RunConfig::truthMap() const {
    if (cavity.kind == CurveSpec::Kind::Laurent) return cavity.map;
    return std::nullopt;
}

RunConfig parseConfigText(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        RunConfig config;
        config.outer = parseCurveSpec(j.at("outer"), "outer", true, false);
        config.cavity = j.contains("cavity")
                            ? parseCurveSpec(j.at("cavity"), "cavity", false, true)
                            : CurveSpec{};
        if (j.contains("nodes")) config.nodes = j.at("nodes").get<int>();
        if (j.contains("order")) config.order = j.at("order").get<int>();
        if (j.contains("center")) config.center = parseComplex(j.at("center"), "center");
        if (j.contains("noise")) config.noise = j.at("noise").get<double>();
        if (j.contains("seeds")) {
            for (const auto& s : j.at("seeds")) config.seeds.push_back(s.get<std::uint64_t>());
        }
        if (j.contains("variant")) {
            const std::string v = j.at("variant").get<std::string>();
            if (v == "corrected") config.variant = CoeffVariant::Corrected;
            else if (v == "literal") config.variant = CoeffVariant::Literal;
            else throw ConfigError("variant must be \"literal\" or \"corrected\"");
        }
        if (j.contains("out")) config.outDir = j.at("out").get<std::string>();
        if (j.contains("sweep")) {
            SweepSpec sweep;
            const std::string type = j.at("sweep").at("type").get<std::string>();
            if (type == "center-abscissa") sweep.kind = SweepSpec::Kind::CenterAbscissa;
            else if (type == "noise") sweep.kind = SweepSpec::Kind::Noise;
            else throw ConfigError("sweep type must be \"center-abscissa\" or \"noise\"");
            if (j.at("sweep").contains("values")) {
                for (const auto& v : j.at("sweep").at("values")) {
                    sweep.values.push_back(v.get<double>());
                }
            }
            config.sweep = sweep;
        }
        validate(config);
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

RunConfig loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseConfigText(buf.str());
}

void runForward(const RunConfig& config) {
    const ParamCurve outerCurve = config.outer.build(config.nodes);
    std::optional<ParamCurve> cavityCurve;
    if (config.cavity.kind == CurveSpec::Kind::Laurent) {
        cavityCurve = config.cavity.build(config.nodes);
    }

    const ForwardModel model = buildForwardModel(outerCurve, cavityCurve);
    const MeasurementSet set = assembleMeasurementSet(model, config.order, config.center);

    std::filesystem::create_directories(config.outDir);
    const std::filesystem::path dir(config.outDir);
    writeFileAtomically(dir / "R.csv",
                        complexMatrixCsv(config, set.scale, set.measurement.entries));
    writeFileAtomically(dir / "QGamma.csv",
                        complexMatrixCsv(config, set.scale, set.outerGram.entries));

    json meta;
    meta["config_hash"] = config.hash;
    meta["scale"] = set.scale;
    meta["order"] = config.order;
    meta["nodes"] = config.nodes;
    meta["center"] = complexToJson(config.center);
    meta["center_scaled"] = complexToJson(set.centerScaled);
    meta["capacity_outer"] = model.outerEq.capacity;
    meta["coupled_condition_warning"] = model.coupled ? model.coupled->conditionWarning() : false;
    writeFileAtomically(dir / "meta.json", meta.dump(2) + "\n");
}

void runReconstruct(const RunConfig& config, const std::string& measurementDir) {
    const MeasurementFiles files = readMeasurementDir(measurementDir);
    const std::optional<LaurentMap> truth = config.truthMap();

    LaurentMap reported;
    int retained = files.order;
    std::vector<std::uint64_t> failedSeeds;
    if (config.noise == 0.0) {
        const ReconstructionResult result = reconstructFromMeasurement(
            files.outerGram, files.measurement, files.centerScaled, config.variant);
        reported = result.map;
    } else {
        const NoiseStudy study = runNoiseStudy(files.outerGram, files.measurement,
                                               files.centerScaled, config.noise, config.seeds,
                                               config.variant);
        if (study.results.empty()) {
            throw MeasurementError("all noise seeds failed to reconstruct");
        }
        // Report the across-seed mean map, truncated by the stability rule.
        reported = study.results.front().map;
        reported.a1 = 0.0;
        reported.a0 = 0.0;
        std::fill(reported.negCoeffs.begin(), reported.negCoeffs.end(), Complex{0.0, 0.0});
        for (const auto& r : study.results) {
            reported.a1 += r.map.a1;
            reported.a0 += r.map.a0;
            for (int m = 1; m <= reported.order(); ++m) {
                reported.negCoeffs[static_cast<std::size_t>(m - 1)] +=
                    r.map.negCoeffs[static_cast<std::size_t>(m - 1)];
            }
        }
        const double inv = 1.0 / static_cast<double>(study.results.size());
        reported.a1 *= inv;
        reported.a0 *= inv;
        for (Complex& c : reported.negCoeffs) c *= inv;
        retained = study.retainedOrder;
        failedSeeds = study.failedSeeds;
    }

    std::filesystem::create_directories(config.outDir);
    const std::filesystem::path dir(config.outDir);
    writeFileAtomically(dir / "coefficients.csv",
                        coefficientsCsv(config, files.scale, reported, truth));

    const LaurentMap plotted = truncated(reported, retained);
    const std::vector<Complex> reconSamples = sampleMap(plotted, 512);
    std::string curveCsv = commentLine(config, files.scale);
    curveCsv += "t,re,im\n";
    for (int j = 0; j < 512; ++j) {
        const double t = -kPi + kTwoPi * (j + 1) / 512;
        curveCsv += fmt(t) + "," + fmt(reconSamples[static_cast<std::size_t>(j)].real()) + "," +
                    fmt(reconSamples[static_cast<std::size_t>(j)].imag()) + "\n";
    }
    writeFileAtomically(dir / "curve.csv", curveCsv);

    std::optional<std::vector<Complex>> truthSamples;
    if (truth) truthSamples = sampleMap(*truth, 512);
    writeFileAtomically(dir / "recon.svg",
                        svgOverlay(config, files.scale, reconSamples, truthSamples,
                                   config.center));

    json result;
    result["config_hash"] = config.hash;
    result["scale"] = files.scale;
    result["retained_order"] = retained;
    result["noise"] = config.noise;
    result["failed_seeds"] = failedSeeds;
    writeFileAtomically(dir / "result.json", result.dump(2) + "\n");
}

void runSweep(const RunConfig& config) {
    if (!config.sweep) throw ConfigError("sweep requires a \"sweep\" section");
    const std::optional<LaurentMap> truth = config.truthMap();
    if (!truth) throw ConfigError("sweep requires a Laurent cavity for error curves");

    const ParamCurve outerCurve = config.outer.build(config.nodes);
    const ParamCurve cavityCurve = config.cavity.build(config.nodes);
    const ForwardModel model = buildForwardModel(outerCurve, std::optional(cavityCurve));

    std::string csv = commentLine(config, model.scale);
    csv += "param,k,rel_err_pct,retained,status\n";

    auto errRows = [&](double param, const LaurentMap& map, int retained,
                       const std::vector<std::vector<double>>* seedErrors) {
        std::string rows;
        for (int idx = 0; idx < config.order + 2; ++idx) {
            const int k = 1 - idx;
            rows += fmt(param) + "," + std::to_string(k) + ",";
            const Complex t = truth->coeff(k);
            if (seedErrors) {
                const std::vector<double>& errs = (*seedErrors)[static_cast<std::size_t>(idx)];
                if (!errs.empty()) rows += fmt(100.0 * median(errs));
            } else if (std::abs(t) > 0.0) {
                rows += fmt(100.0 * std::abs(map.coeff(k) - t) / std::abs(t));
            }
            rows += ",";
            if (retained >= 0) rows += std::to_string(retained);
            rows += ",ok\n";
        }
        return rows;
    };
    auto failRows = [&](double param) {
        std::string rows;
        for (int idx = 0; idx < config.order + 2; ++idx) {
            rows += fmt(param) + "," + std::to_string(1 - idx) + ",,,failed\n";
        }
        return rows;
    };

    if (config.sweep->kind == SweepSpec::Kind::CenterAbscissa) {
        for (double abscissa : config.sweep->values) {
            try {
                const Complex center{abscissa, config.center.imag()};
                const MeasurementSet set = assembleMeasurementSet(model, config.order, center);
                const ReconstructionResult result = reconstructFromMeasurement(
                    set.outerGram, set.measurement, set.centerScaled, config.variant);
                csv += errRows(abscissa, result.map, -1, nullptr);
            } catch (const Error&) {
                csv += failRows(abscissa);
            }
        }
    } else {
        const MeasurementSet set = assembleMeasurementSet(model, config.order, config.center);
        for (double delta : config.sweep->values) {
            try {
                const NoiseStudy study =
                    runNoiseStudy(set.outerGram, set.measurement, set.centerScaled, delta,
                                  config.seeds, config.variant);
                if (study.results.empty()) {
                    csv += failRows(delta);
                    continue;
                }
                std::vector<std::vector<double>> seedErrors(
                    static_cast<std::size_t>(config.order + 2));
                for (const auto& r : study.results) {
                    for (int idx = 0; idx < config.order + 2; ++idx) {
                        const int k = 1 - idx;
                        const Complex t = truth->coeff(k);
                        if (std::abs(t) > 0.0) {
                            seedErrors[static_cast<std::size_t>(idx)].push_back(
                                std::abs(r.map.coeff(k) - t) / std::abs(t));
                        }
                    }
                }
                csv += errRows(delta, study.results.front().map, study.retainedOrder,
                               &seedErrors);
            } catch (const Error&) {
                csv += failRows(delta);
            }
        }
    }

    std::filesystem::create_directories(config.outDir);
    writeFileAtomically(std::filesystem::path(config.outDir) / "sweep.csv", csv);
}

void runOracleCheck(const RunConfig& config) {
    const std::optional<LaurentMap> truth = config.truthMap();
    if (!truth) throw ConfigError("oracle-check requires a Laurent cavity");

    // Shifted-map moments, inversion with both variants, then shift-back.
    LaurentMap shifted = *truth;
    shifted.a0 -= config.center;
    const OracleMoments oracle = momentsFromMap(shifted, config.order);
    MomentSequences moments;
    for (int m = 1; m <= config.order; ++m) {
        moments.mu.push_back(oracle.muSeq(m));
        moments.nu.push_back(oracle.nuSeq(m));
    }
    const ReconstructionResult corrected = shiftAndRescale(
        invertMoments(moments, CoeffVariant::Corrected), config.center, 1.0);
    const ReconstructionResult literal = shiftAndRescale(
        invertMoments(moments, CoeffVariant::Literal), config.center, 1.0);

    std::string csv = commentLine(config, 1.0);
    csv += "k,true_re,true_im,corrected_re,corrected_im,corrected_abs_err,"
           "literal_re,literal_im,literal_abs_err\n";
    double worstCorrected = 0.0;
    for (int idx = 0; idx < config.order + 2; ++idx) {
        const int k = 1 - idx;
        const Complex t = truth->coeff(k);
        const Complex vc = corrected.map.coeff(k);
        const Complex vl = literal.map.coeff(k);
        worstCorrected = std::max(worstCorrected, std::abs(vc - t));
        csv += std::to_string(k) + "," + fmt(t.real()) + "," + fmt(t.imag()) + "," +
               fmt(vc.real()) + "," + fmt(vc.imag()) + "," + fmt(std::abs(vc - t)) + "," +
               fmt(vl.real()) + "," + fmt(vl.imag()) + "," + fmt(std::abs(vl - t)) + "\n";
    }

    std::filesystem::create_directories(config.outDir);
    writeFileAtomically(std::filesystem::path(config.outDir) / "oracle.csv", csv);
    std::cout << "oracle-check: max |corrected - true| = " << fmt(worstCorrected) << "\n";

    const LaurentMap inv = laurentInversionOracle(*truth, config.order);
    const LaurentMap twice = laurentInversionOracle(inv, truth->order());
    double roundTrip = std::max(std::abs(twice.a1 - truth->a1), std::abs(twice.a0 - truth->a0));
    for (int m = 1; m <= truth->order(); ++m) {
        roundTrip = std::max(roundTrip, std::abs(twice.coeff(-m) - truth->coeff(-m)));
    }
    std::cout << "oracle-check: double inversion residual = " << fmt(roundTrip) << "\n";
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"cavity reconstruction from boundary measurements"};
    app.require_subcommand(1);

    std::string configPath;
    std::string outOverride;
    std::string centerOverride;
    std::string seedsOverride;
    std::string variantOverride;
    std::string measurementDir;
    int orderOverride = -1;
    double noiseOverride = -1.0;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--config", configPath, "configuration file (JSON)")->required();
        cmd->add_option("--order", orderOverride, "polynomial order M");
        cmd->add_option("--center", centerOverride, "polynomial center RE,IM");
        cmd->add_option("--noise", noiseOverride, "relative noise level");
        cmd->add_option("--seeds", seedsOverride, "comma-separated seed list");
        cmd->add_option("--variant", variantOverride, "coefficient variant: literal|corrected");
        cmd->add_option("--out", outOverride, "output directory");
    };

    CLI::App* forward = app.add_subcommand("forward", "assemble the measurement matrix");
    addCommon(forward);
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "recover the cavity from a measurement");
    addCommon(reconstruct);
    reconstruct->add_option("measurement", measurementDir,
                            "directory with R.csv, QGamma.csv, meta.json");
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep with error curves");
    addCommon(sweep);
    CLI::App* oracleCheck =
        app.add_subcommand("oracle-check", "verify the inversion formula without boundary data");
    addCommon(oracleCheck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig config = loadConfig(configPath);
        if (orderOverride >= 0) config.order = orderOverride;
        if (noiseOverride >= 0.0) config.noise = noiseOverride;
        if (!centerOverride.empty()) {
            double re = 0.0, im = 0.0;
            const int got = std::sscanf(centerOverride.c_str(), "%lf,%lf", &re, &im);
            if (got < 1) throw ConfigError("--center expects RE or RE,IM");
            config.center = Complex{re, im};
        }
        if (!seedsOverride.empty()) {
            config.seeds.clear();
            std::istringstream ss(seedsOverride);
            std::string tok;
            try {
                while (std::getline(ss, tok, ',')) {
                    if (!tok.empty()) config.seeds.push_back(std::stoull(tok));
                }
            } catch (const std::exception&) {
                throw ConfigError("--seeds expects a comma-separated list of integers");
            }
            if (config.seeds.empty()) throw ConfigError("--seeds expects a comma-separated list");
        }
        if (!variantOverride.empty()) {
            if (variantOverride == "corrected") config.variant = CoeffVariant::Corrected;
            else if (variantOverride == "literal") config.variant = CoeffVariant::Literal;
            else throw ConfigError("--variant must be literal or corrected");
        }
        if (!outOverride.empty()) config.outDir = outOverride;
        validate(config); // re-check ranges and refresh the hash after overrides

        if (forward->parsed()) runForward(config);
        else if (reconstruct->parsed()) {
            runReconstruct(config, measurementDir.empty() ? config.outDir : measurementDir);
        } else if (sweep->parsed()) runSweep(config);
        else if (oracleCheck->parsed()) runOracleCheck(config);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace cavmap::cli
