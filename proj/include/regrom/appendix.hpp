#pragma once

#include "regrom/rom_operators.hpp"
#include "regrom/types.hpp"

namespace regrom {

/// Second-order filter through the mixed two-field system
///   w - A ubar = 0,   delta^4 A w + ubar = u
/// on modes 1..N, assembled as one 2N x 2N block system and solved by LU.
/// Eliminating w gives (I + delta^4 A^2) ubar = u.
Vector mixed_form_solve(const Matrix& stiffness, const Vector& u, double delta);
Vector mixed_form_solve(const RomOperators& ops, const Vector& u, double delta);

struct AppendixCheck {
  Index n = 0;
  int samples = 0;
  double max_relative_difference = 0.0;
};

/// Compares the mixed solve with the m = 2 algebraic filter on random
/// inputs for a random SPD stiffness of size n.
AppendixCheck verify_mixed_form(Index n, int samples, double delta, unsigned long long seed);

}  // namespace regrom
