#pragma once

#include <stdexcept>
#include <string>

namespace cavmap {

/// Base class for all cavmap failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid node count or grid parameters (odd N, N too small, ...).
struct DiscretizationError : Error {
    using Error::Error;
};

/// The sampled curve is not a Jordan curve (self-intersection, vanishing
/// derivative, wrong orientation).
struct JordanCurveError : Error {
    using Error::Error;
};

/// Geometric preconditions violated: coincident nodes, touching or
/// intersecting boundaries.
struct GeometryError : Error {
    using Error::Error;
};

/// The single-layer trace operator is (numerically) singular; the geometry
/// must be rescaled away from unit logarithmic capacity.
struct CapacityError : Error {
    using Error::Error;
};

/// Measurement data is inconsistent (singular Gram + measurement system,
/// or extracted leading moment violates positivity).
struct MeasurementError : Error {
    using Error::Error;
};

/// Moment sequences that cannot feed the inversion formula.
struct MomentError : Error {
    using Error::Error;
};

/// A ground-truth oracle failed to converge; the consuming test must be
/// reported, never silently passed.
struct OracleError : Error {
    using Error::Error;
};

/// Argument outside the supported combinatorial range.
struct BoundError : Error {
    using Error::Error;
};

/// Malformed run configuration.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace cavmap
