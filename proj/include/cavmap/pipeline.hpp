#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cavmap/gpst.hpp"
#include "cavmap/reconstruct.hpp"

namespace cavmap {

/// Geometry-dependent, center-independent forward state. All matrices refer
/// to the rescaled frame (diameter of the outer boundary brought to 0.9).
struct ForwardModel {
    double scale = 1.0;
    std::shared_ptr<SingleLayerOperator> outer;
    Equilibrium outerEq;
    std::shared_ptr<SingleLayerOperator> cavity; // null when no cavity
    std::shared_ptr<CoupledSolver> coupled;      // null when no cavity
};

ForwardModel buildForwardModel(const ParamCurve& outerCurve,
                               const std::optional<ParamCurve>& cavityCurve);

/// Measurement matrix, outer Gram matrix and basis for one polynomial center.
struct MeasurementSet {
    MeasurementMatrix measurement;
    GpstMatrix outerGram;
    HarmonicBasis basis;
    Complex centerScaled{0.0, 0.0};
    double scale = 1.0;
};

/// Builds the shifted basis at scale*center and assembles R and Q_Gamma.
MeasurementSet assembleMeasurementSet(const ForwardModel& model, int order, Complex center);

/// Recovery from (Q_Gamma, R): cavity tensor, moments, explicit inversion,
/// then shift-back and rescale into the original frame.
ReconstructionResult reconstructFromMeasurement(const GpstMatrix& outerGram,
                                                const MeasurementMatrix& measurement,
                                                Complex centerScaled,
                                                CoeffVariant variant = CoeffVariant::Corrected,
                                                double imagTolerance = 1e-6);

struct NoiseStudy {
    std::vector<ReconstructionResult> results;
    std::vector<std::uint64_t> failedSeeds;
    int retainedOrder = 0;
};

/// Per-seed multiplicative noise on R followed by reconstruction; seeds whose
/// recovery degenerates are recorded and skipped. The retained order comes
/// from the across-seed stability criterion.
NoiseStudy runNoiseStudy(const GpstMatrix& outerGram, const MeasurementMatrix& measurement,
                         Complex centerScaled, double delta,
                         const std::vector<std::uint64_t>& seeds,
                         CoeffVariant variant = CoeffVariant::Corrected);

} // namespace cavmap
