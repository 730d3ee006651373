#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "calor/quasi1d.hpp"
#include "calor/system.hpp"

namespace calor {

// Constants of the variational identity H = C1*(min 2J(w) + C2), kept as
// exact rationals so the bound ordering is provable, not approximate.
struct HConstants {
  Rational c1;  // 1 / (k_b * (T_hot - T_cold)^2 * a_norm)
  Rational c2;  // h_left*t_left^2*area_left + h_right*t_right^2*area_right
  Rational k_b, delta_t, a_norm;
  Rational h_left, t_left, h_right, t_right;
  Rational x1_left, x1_right;
  Rational area_left, area_right;  // total Robin face area per side
  bool degenerate = false;         // delta_t == 0: H is defined as 0
};

struct UpperBound {
  Rational h;                 // H_UB
  CoalescedMap map;           // slice-coalesced dof map used for the solve
  std::vector<Rational> w;    // minimizer, one value per coalesced dof
};

struct LowerBound {
  Rational h;  // H_LB
  // minimizer per parallelepiped member: station values of the 1d chain,
  // empty when the member has no Robin face (its minimizer is zero-mean)
  std::vector<std::vector<Rational>> w;
};

struct BoundResult {
  Rational h_lb, h_ub;
  std::optional<double> h_fe;  // certified FE value, when computed
  double fe_eps = 0;           // FE QoI error estimate accompanying h_fe
};

struct OrderingReport {
  bool ok = true;
  std::string violation;
};

HConstants compute_constants(const PdeTemplate& t, const ProblemClass& pc);

// Slice-uniform upper bound: one dof per connected slice part, component
// conductances k*A_c/L in series, Robin augmentation on the extreme
// stations, solved in exact rational arithmetic.  The identity
// 2J(w*) = -F(w*) is asserted on every solve.
UpperBound compute_upper_bound(const System& s, const SliceSet& slices,
                               const HConstants& c);

// Same solve against a caller-supplied dof quotient; used by the
// space-inclusion tests (coarser quotients may only raise the bound).
UpperBound compute_upper_bound_with_map(const System& s, const CoalescedMap& map,
                                        const HConstants& c);

// Per-parallelepiped lower bound: each member with a Robin face solves an
// independent insulated 1d chain; members with none contribute zero (their
// minimizer is the zero-mean constant).
LowerBound compute_lower_bound(const System& s, const ParallelepipedSet& ppds,
                               const HConstants& c);

// H from a solved temperature trace on the left extreme faces:
// Q = sum over samples of h_left*(t_left - T_mean)*area, H = Q/(k_b*dT*a).
// Samples are (mean temperature, face area) pairs from edge quadrature.
double evaluate_H_from_field(const HConstants& c,
                             const std::vector<std::pair<double, double>>& face_samples);

// Verifies H_LB <= H_UB (1e-12 absolute) and, when an FE value is present,
// H_LB - eps <= H_FE <= H_UB + eps.  Violations are data: they indicate an
// implementation bug, not a user error.
OrderingReport check_ordering(const BoundResult& r);

}  // namespace calor
