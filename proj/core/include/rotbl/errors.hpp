#pragma once

#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace rotbl {

/// Thrown when a requested time step exceeds the stability bound of an explicit update.
class CflViolation : public std::invalid_argument {
public:
    CflViolation(const std::string& where, double dt, double admissible)
        : std::invalid_argument(fmt::format("{}: dt = {:.6g} violates CFL; admissible dt <= {:.6g}",
                                            where, dt, admissible)),
          admissible_dt(admissible) {}
    double admissible_dt;
};

/// Thrown when a solver produces non-finite values.
class NonFiniteState : public std::runtime_error {
public:
    NonFiniteState(const std::string& where, long step)
        : std::runtime_error(fmt::format("{}: non-finite value detected at step {}", where, step)),
          step_index(step) {}
    long step_index;
};

}  // namespace rotbl
