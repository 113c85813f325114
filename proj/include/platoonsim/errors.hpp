#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace platoonsim {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The desired offsets admit no consistent set of reference positions:
/// some cycle accumulates a nonzero offset sum.
class NotRealizableError : public Error {
public:
    NotRealizableError(int i, int j, double residual, double tol);

    int edge_i;       ///< 0-based endpoints of the worst-violating edge
    int edge_j;
    double residual;  ///< |p_j - p_i - D_ji| on that edge
};

/// Integration produced a non-finite state or control.
class DivergedError : public Error {
public:
    DivergedError(std::size_t step, double time);

    std::size_t step;  ///< first step index at which a non-finite value appeared
    double time;
};

/// A scenario or trajectory file could not be parsed, or failed validation.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& message);

    std::string field;  ///< dotted path of the offending field, e.g. "controller.gain"
};

}  // namespace platoonsim
