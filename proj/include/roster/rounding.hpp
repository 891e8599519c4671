#pragma once

// Integer rounding of model parameters. Every nearest-integer site (weekend
// caps) and every floor/ceil of a fairness target goes through these so the
// model builder and the validator agree on the boundary values.

namespace roster {

inline constexpr double kRoundingEps = 1e-9;

/// Nearest integer, ties rounded up: 2.5 -> 3, -0.5 -> 0.
int round_half_up(double x);
/// Floor that treats values within kRoundingEps below an integer as that integer.
int floor_tol(double x);
/// Ceiling that treats values within kRoundingEps above an integer as that integer.
int ceil_tol(double x);

}  // namespace roster
