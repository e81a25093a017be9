#pragma once

#include <stdexcept>
#include <string>

namespace peakonlab {

// Thrown when an algorithm fails numerically at runtime (near-singular data,
// convergence failure, overflow guard trips, collision detection, ...).
// Contract violations (bad dimensions, invalid configuration) use
// std::invalid_argument instead, so callers can map the two classes of
// failure onto distinct exit codes.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace peakonlab
