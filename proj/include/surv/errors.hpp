#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace surv {

/// Malformed input data: CSV schema violations, invalid timestamps,
/// datasets that break a documented invariant.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A model fit could not be completed.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Optimizer ran out of iterations. Carries the last iterate and the
/// gradient norm at that point so callers can inspect how close it got.
class ConvergenceError : public FitError {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                     double gradient_norm)
        : FitError(what),
          last_iterate(std::move(last_iterate)),
          gradient_norm(gradient_norm) {}

    std::vector<double> last_iterate;
    double gradient_norm;
};

}  // namespace surv
