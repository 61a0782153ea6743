#pragma once

#include <stdexcept>
#include <string>

namespace dkp_h3 {

/// Raised when a numerical routine cannot reach the accuracy it was asked for.
/// Carries the tolerance that was actually achieved.
class AccuracyLossError : public std::runtime_error {
public:
    AccuracyLossError(const std::string &what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A parameter combination for which a solution family is undefined
/// (e.g. eps^2 == M^2 in the sigma = 0 massive branch).
class DegenerateFamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace dkp_h3
