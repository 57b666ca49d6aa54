#include "cavmap/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace cavmap {

ForwardModel buildForwardModel(const ParamCurve& outerCurve,
                               const std::optional<ParamCurve>& cavityCurve) {
    ForwardModel model;
    model.scale = 0.9 / outerCurve.diameter();

    const BoundaryGrid outerGrid = makeGrid(outerCurve.scaledBy(model.scale));
    model.outer = std::make_shared<SingleLayerOperator>(assembleSingleLayer(outerGrid));
    model.outerEq = equilibrium(*model.outer);

    if (cavityCurve) {
        const BoundaryGrid cavityGrid = makeGrid(cavityCurve->scaledBy(model.scale));
        model.cavity = std::make_shared<SingleLayerOperator>(assembleSingleLayer(cavityGrid));
        model.coupled = std::make_shared<CoupledSolver>(*model.cavity, *model.outer);
    }
    return model;
}

MeasurementSet assembleMeasurementSet(const ForwardModel& model, int order, Complex center) {
    MeasurementSet set;
    set.scale = model.scale;
    set.centerScaled = model.scale * center;
    set.basis = buildBasis(model.outer->grid(), model.outerEq, order, set.centerScaled);
    set.outerGram = gramMatrix(*model.outer, model.outerEq, set.basis);
    if (model.coupled) {
        set.measurement =
            assembleMeasurement(*model.outer, *model.coupled, set.basis.traces, model.scale);
    } else {
        set.measurement = MeasurementMatrix::zero(order, model.scale);
    }
    return set;
}

ReconstructionResult reconstructFromMeasurement(const GpstMatrix& outerGram,
                                                const MeasurementMatrix& measurement,
                                                Complex centerScaled, CoeffVariant variant,
                                                double imagTolerance) {
    const GpstMatrix cavityGpst = recoveredGpst(outerGram, measurement);
    const MomentSequences moments = extractMoments(cavityGpst, imagTolerance);
    ReconstructionResult result = invertMoments(moments, variant);
    result = shiftAndRescale(std::move(result), centerScaled, measurement.scale);
    return result;
}

NoiseStudy runNoiseStudy(const GpstMatrix& outerGram, const MeasurementMatrix& measurement,
                         Complex centerScaled, double delta,
                         const std::vector<std::uint64_t>& seeds, CoeffVariant variant) {
    NoiseStudy study;
    // Artificial noise leaves mu_1 complex at O(delta); only its positivity
    // is enforced here.
    const double imagTolerance = std::max(1e-6, 10.0 * delta);
    for (std::uint64_t seed : seeds) {
        try {
            const MeasurementMatrix noisy = applyNoise(measurement, delta, seed);
            ReconstructionResult r = reconstructFromMeasurement(outerGram, noisy, centerScaled,
                                                                variant, imagTolerance);
            r.noise = delta;
            study.results.push_back(std::move(r));
        } catch (const Error&) {
            study.failedSeeds.push_back(seed);
        }
    }
    if (study.results.size() >= 2) {
        study.retainedOrder = truncateByStability(study.results);
    } else if (study.results.size() == 1) {
        study.retainedOrder = study.results.front().map.order();
    }
    return study;
}

} // namespace cavmap
