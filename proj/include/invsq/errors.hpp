#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace invsq {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Invalid call sequence or malformed input (bad grid, bad bracket, bad config).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative solver failed to converge; `detail` carries the last state.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::string detail = {})
        : std::runtime_error(what), detail_(std::move(detail)) {}
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
};

/// The zero-energy exterior solution has a node exactly at the cutoff, so the
/// counterterm diverges. `critical_ratio` is the R/r0 where that happens.
class FlowPoleError : public std::runtime_error {
public:
    FlowPoleError(const std::string& what, double critical_ratio)
        : std::runtime_error(what), critical_ratio_(critical_ratio) {}
    double critical_ratio() const noexcept { return critical_ratio_; }

private:
    double critical_ratio_;
};

/// More than one bound-state root was found by the spectral scan.
class MultiplicityError : public std::runtime_error {
public:
    MultiplicityError(const std::string& what, std::vector<double> roots)
        : std::runtime_error(what), roots_(std::move(roots)) {}
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

} // namespace invsq
