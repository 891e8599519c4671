#include "roster/rounding.hpp"

#include <cmath>

namespace roster {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5 + kRoundingEps)); }

int floor_tol(double x) { return static_cast<int>(std::floor(x + kRoundingEps)); }

int ceil_tol(double x) { return static_cast<int>(std::ceil(x - kRoundingEps)); }

}  // namespace roster
