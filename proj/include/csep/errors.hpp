#pragma once

#include <stdexcept>
#include <string>

namespace csep {

// Walk-on-spheres gave up before reaching the boundary shell.
struct MaxStepsExceeded : std::runtime_error {
    explicit MaxStepsExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver (CG or inverse power) hit its iteration cap.
struct ConvergenceFailure : std::runtime_error {
    explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

// Rasterization produced no interior nodes.
struct EmptyMask : std::runtime_error {
    explicit EmptyMask(const std::string& what) : std::runtime_error(what) {}
};

// Truncation sweep saw eigenvalues increase with the truncation height.
struct MonotonicityViolation : std::runtime_error {
    explicit MonotonicityViolation(const std::string& what) : std::runtime_error(what) {}
};

// Survival curve has fewer than four usable points in the fitting window.
struct WindowTooNarrow : std::runtime_error {
    explicit WindowTooNarrow(const std::string& what) : std::runtime_error(what) {}
};

// An operation that needs uncensored exit times received censored samples.
struct CensoredData : std::runtime_error {
    explicit CensoredData(const std::string& what) : std::runtime_error(what) {}
};

// Variance requested from a distribution that has none (Cauchy).
struct VarianceUndefined : std::runtime_error {
    explicit VarianceUndefined(const std::string& what) : std::runtime_error(what) {}
};

} // namespace csep
