#include "platoonsim/errors.hpp"

#include <sstream>

namespace platoonsim {

namespace {

std::string realizability_message(int i, int j, double residual, double tol) {
    std::ostringstream os;
    os << "desired offsets are not realizable: edge (" << (i + 1) << ", " << (j + 1)
       << ") has cycle residual " << residual << " (tolerance " << tol << ")";
    return os.str();
}

std::string diverged_message(std::size_t step, double time) {
    std::ostringstream os;
    os << "integration diverged: non-finite value first appeared at step " << step << " (t = "
       << time << ")";
    return os.str();
}

}  // namespace

NotRealizableError::NotRealizableError(int i, int j, double residual_, double tol)
    : Error(realizability_message(i, j, residual_, tol)), edge_i(i), edge_j(j), residual(residual_) {}

DivergedError::DivergedError(std::size_t step_, double time_)
    : Error(diverged_message(step_, time_)), step(step_), time(time_) {}

ParseError::ParseError(std::string field_, const std::string& message)
    : Error(field_.empty() ? message : field_ + ": " + message), field(std::move(field_)) {}

}  // namespace platoonsim
