#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "calor/fem2d.hpp"
#include "calor/genwall.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace calor;

namespace {

struct Bounds {
  testutil::Built b;
  ProblemClass pc;
  HConstants c;
  SliceSet slices;
  ParallelepipedSet ppds;
  UpperBound ub;
  LowerBound lb;
};

Bounds solve_bounds(const std::string& text) {
  Bounds r{testutil::build(text)};
  r.pc = classify_problem(r.b.tmpl);
  r.c = compute_constants(r.b.tmpl, r.pc);
  r.slices = find_slices(r.b.system);
  r.ppds = find_parallelepipeds(r.b.system);
  r.ub = compute_upper_bound(r.b.system, r.slices, r.c);
  r.lb = compute_lower_bound(r.b.system, r.ppds, r.c);
  return r;
}

int ppd_index(const ParallelepipedSet& ppds, std::set<int> members) {
  for (size_t i = 0; i < ppds.members.size(); ++i) {
    std::set<int> got(ppds.members[i].members.begin(),
                      ppds.members[i].members.end());
    if (got == members) return (int)i;
  }
  REQUIRE(false);
  return -1;
}

Parallelepiped singleton_ppd(const System& s, int ci) {
  const Component& c = s.components[ci];
  Parallelepiped p;
  p.members = {ci};
  p.span = c.span;
  p.cross_coords = c.cross_coords;
  p.cross = c.cross;
  return p;
}

Rational rational_at(const UpperBound& ub, const Rational& station) {
  for (int d = 0; d < ub.map.n_global; ++d)
    if (ub.map.dof_station[d] == station) return ub.w[d];
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("constants of the variational identity are exact") {
  auto b = testutil::build_fixture("wall-3d.txt");
  ProblemClass pc = classify_problem(b.tmpl);
  HConstants c = compute_constants(b.tmpl, pc);

  CHECK(c.k_b == Rational(1, 2));
  CHECK(c.delta_t == Rational(23));
  CHECK(c.a_norm == Rational(1, 10));
  CHECK(c.h_left == Rational(10));
  CHECK(c.t_left == Rational(23));
  CHECK(c.h_right == Rational(100));
  CHECK(c.t_right == Rational(0));
  CHECK(c.x1_left == Rational(0));
  CHECK(c.x1_right == Rational(1, 10));
  CHECK(c.area_left == Rational(1, 100));
  CHECK(c.area_right == Rational(3, 100));
  CHECK_FALSE(c.degenerate);

  CHECK(c.c1 == Rational(20, 529));
  CHECK(c.c2 == Rational(529, 10));
  // the same numbers recomposed from their definitions
  CHECK(c.c1 == 1 / (c.k_b * c.delta_t * c.delta_t * c.a_norm));
  CHECK(c.c2 == c.h_left * c.t_left * c.t_left * c.area_left +
                    c.h_right * c.t_right * c.t_right * c.area_right);
}

TEST_CASE("wall-3d bounds equal the two cut networks") {
  Bounds r = solve_bounds(testutil::fixture("wall-3d.txt"));

  CHECK(r.ub.h == Rational(60, 71));
  CHECK(r.lb.h == Rational(20, 31));
  CHECK(r.lb.h < r.ub.h);

  // Upper route: superconducting sheets at the interior stations collapse
  // the wall to films + brick 1 + the three-brick parallel column.
  double A = 0.01;
  double R_super = 1 / (10 * A) + 0.05 / (0.5 * A) + 0.05 / (0.5 * 3 * A) +
                   1 / (100 * 3 * A);
  double H_super = (23.0 / R_super) / (0.5 * 23.0 * 0.1);
  CHECK(to_double(r.ub.h) == doctest::Approx(H_super).epsilon(1e-12));
  CHECK(to_double(r.ub.h) ==
        doctest::Approx(0.845070422535211).epsilon(1e-12));

  // Lower route: insulating sheets between the channels leave only the
  // two-brick chain carrying heat.
  double R_insul = 1 / (10 * A) + 0.05 / (0.5 * A) + 0.05 / (0.5 * A) +
                   1 / (100 * A);
  double H_insul = (23.0 / R_insul) / (0.5 * 23.0 * 0.1);
  CHECK(to_double(r.lb.h) == doctest::Approx(H_insul).epsilon(1e-12));
  CHECK(to_double(r.lb.h) ==
        doctest::Approx(0.645161290322581).epsilon(1e-12));

  CHECK(check_ordering({r.lb.h, r.ub.h, std::nullopt}).ok);

  SUBCASE("upper minimizer is the slice-uniform temperature chain") {
    REQUIRE(r.ub.map.n_global == 3);
    CHECK(rational_at(r.ub, Rational(0)) == Rational(943, 71));
    CHECK(rational_at(r.ub, Rational(1, 20)) == Rational(253, 71));
    CHECK(rational_at(r.ub, Rational(1, 10)) == Rational(23, 71));
  }

  SUBCASE("lower minimizers solve the member chains") {
    REQUIRE(r.lb.w.size() == r.ppds.members.size());
    int chain = ppd_index(r.ppds, {0, 1});
    CHECK(r.lb.w[chain] ==
          std::vector<Rational>{Rational(483, 31), Rational(253, 31),
                                Rational(23, 31)});
    // single-film members carry nothing: their minimizer sits at T_out
    for (int single : {ppd_index(r.ppds, {2}), ppd_index(r.ppds, {3})}) {
      REQUIRE(r.lb.w[single].size() == 2);
      CHECK(r.lb.w[single][0] == 0);
      CHECK(r.lb.w[single][1] == 0);
    }
  }
}

TEST_CASE("bounds pinch exactly when the field is one-dimensional") {
  SUBCASE("single brick") {
    Bounds r = solve_bounds(testutil::single_brick_statement());
    CHECK(r.ub.h == Rational(20, 21));
    CHECK(r.lb.h == Rational(20, 21));
  }
  SUBCASE("two bricks in series") {
    Bounds r = solve_bounds(testutil::two_brick_chain_statement());
    CHECK(r.ub.h == Rational(20, 31));
    CHECK(r.lb.h == Rational(20, 31));
  }
  SUBCASE("2x2 ladder") {
    Bounds r = solve_bounds(testutil::brick_ladder_statement());
    CHECK(r.ub.h == Rational(40, 31));
    CHECK(r.lb.h == Rational(40, 31));
    // network route: both rows in parallel, a = b = 0.1, k = 0.5
    double R = 1 / (10 * 0.02) + 2 * 0.05 / (0.5 * 0.02) + 1 / (100 * 0.02);
    double H = (23.0 / R) / (0.5 * 23.0 * 0.1);
    CHECK(to_double(r.ub.h) == doctest::Approx(H).epsilon(1e-12));
  }
  SUBCASE("split-slice union") {
    Bounds r = solve_bounds(testutil::split_slice_statement());
    CHECK(r.ub.h == Rational(60, 31));
    CHECK(r.lb.h == Rational(60, 31));
    // three parallel channels of 31 ohms each (per unit cross conductance)
    double R = 1 / (10 * 0.03) + 1 / (3 * 0.5 * 0.01 / 0.1) + 1 / (100 * 0.03);
    double H = (23.0 / R) / (0.5 * 23.0 * 0.1);
    CHECK(to_double(r.ub.h) == doctest::Approx(H).epsilon(1e-12));
  }
}

TEST_CASE("coarser dof quotients can only raise the upper bound") {
  Bounds r = solve_bounds(testutil::fixture("wall-3d.txt"));
  const System& s = r.b.system;

  // finest quotient: the original port dof map
  CoalescedMap ident;
  ident.dof_map = s.dof_map;
  ident.n_global = s.n_global;
  ident.dof_station = s.dof_station;
  ident.from_original.resize(s.n_global);
  std::iota(ident.from_original.begin(), ident.from_original.end(), 0);

  // coarsest quotient: one dof for the whole wall
  CoalescedMap one;
  one.dof_map.assign(s.components.size(), {0, 0});
  one.n_global = 1;
  one.dof_station = {Rational(0)};
  one.from_original.assign(s.n_global, 0);

  UpperBound ub_fine = compute_upper_bound_with_map(s, ident, r.c);
  UpperBound ub_one = compute_upper_bound_with_map(s, one, r.c);

  // strict chain: port space < slice space < constant space
  CHECK(ub_fine.h == Rational(20, 31));
  CHECK(ub_one.h == Rational(60, 31));
  CHECK(ub_fine.h < r.ub.h);
  CHECK(r.ub.h < ub_one.h);

  // merging dofs by station reproduces the slice map here, because every
  // wall-3d slice is a single connected part
  CoalescedMap by_station;
  std::vector<Rational> stations;
  for (const auto& st : s.dof_station)
    if (std::find(stations.begin(), stations.end(), st) == stations.end())
      stations.push_back(st);
  std::sort(stations.begin(), stations.end());
  by_station.n_global = (int)stations.size();
  by_station.dof_station = stations;
  by_station.from_original.resize(s.n_global);
  for (int d = 0; d < s.n_global; ++d)
    by_station.from_original[d] =
        (int)(std::find(stations.begin(), stations.end(), s.dof_station[d]) -
              stations.begin());
  by_station.dof_map.resize(s.components.size());
  for (size_t ci = 0; ci < s.components.size(); ++ci)
    for (int p = 0; p < 2; ++p)
      by_station.dof_map[ci][p] = by_station.from_original[s.dof_map[ci][p]];
  CHECK(compute_upper_bound_with_map(s, by_station, r.c).h == r.ub.h);

  // feeding the solver its own map back is a no-op
  CHECK(compute_upper_bound_with_map(s, r.ub.map, r.c).h == r.ub.h);
}

TEST_CASE("splitting chains can only lower the lower bound") {
  SUBCASE("wall-3d: full split kills every through-path") {
    Bounds r = solve_bounds(testutil::fixture("wall-3d.txt"));
    ParallelepipedSet split;
    for (int ci = 0; ci < (int)r.b.system.components.size(); ++ci)
      split.members.push_back(singleton_ppd(r.b.system, ci));
    LowerBound lb_split = compute_lower_bound(r.b.system, split, r.c);
    CHECK(lb_split.h == 0);
    CHECK(lb_split.h < r.lb.h);
  }
  SUBCASE("split-slice union: splitting one row drops its channel") {
    Bounds r = solve_bounds(testutil::split_slice_statement());
    int row = ppd_index(r.ppds, {0, 1});
    ParallelepipedSet split;
    for (int i = 0; i < (int)r.ppds.members.size(); ++i) {
      if (i == row) {
        split.members.push_back(singleton_ppd(r.b.system, 0));
        split.members.push_back(singleton_ppd(r.b.system, 1));
      } else {
        split.members.push_back(r.ppds.members[i]);
      }
    }
    LowerBound lb_split = compute_lower_bound(r.b.system, split, r.c);
    CHECK(lb_split.h == Rational(40, 31));
    CHECK(lb_split.h < r.lb.h);
  }
}

TEST_CASE("equal reservoirs degenerate to H = 0") {
  std::string text = testutil::two_brick_chain_statement();
  auto pos = text.find("$T_out = 0$");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("$T_out = 0$").size(), "$T_out = 23$");

  Bounds r = solve_bounds(text);
  CHECK(r.c.degenerate);
  CHECK(r.ub.h == 0);
  CHECK(r.lb.h == 0);
  CHECK(check_ordering({r.lb.h, r.ub.h, std::nullopt}).ok);
  CHECK(evaluate_H_from_field(r.c, {{5.0, 0.01}}) == 0.0);
}

TEST_CASE("the field functional hits the reservoir endpoints") {
  auto b = testutil::build_fixture("wall-3d.txt");
  HConstants c = compute_constants(b.tmpl, classify_problem(b.tmpl));

  // the whole left face at T_in passes nothing; at T_out it passes h dT A
  CHECK(evaluate_H_from_field(c, {{23.0, 0.01}}) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(evaluate_H_from_field(c, {{0.0, 0.01}}) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(evaluate_H_from_field(c, {{11.5, 0.005}, {11.5, 0.005}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ordering report flags violations") {
  CHECK(check_ordering({Rational(1, 2), Rational(2, 3), std::nullopt}).ok);

  OrderingReport bad = check_ordering({Rational(1), Rational(1, 2), std::nullopt});
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.violation.empty());

  BoundResult fe_out{Rational(0), Rational(1), 1.2, 0.1};
  CHECK_FALSE(check_ordering(fe_out).ok);
  BoundResult fe_in{Rational(0), Rational(1), 1.05, 0.1};
  CHECK(check_ordering(fe_in).ok);
  BoundResult fe_low{Rational(0), Rational(1), -0.05, 0.1};
  CHECK(check_ordering(fe_low).ok);
}

TEST_CASE("random two-row grids pinch to the network value") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> ncols(2, 6);
  std::uniform_int_distribution<int> digit(1, 9);
  std::uniform_int_distribution<int> film(1, 200);

  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    int n = ncols(rng);
    std::vector<int> wd;
    for (int j = 0; j < n; ++j) wd.push_back(digit(rng));
    int kd = digit(rng), hin = film(rng), hout = film(rng);

    auto dec = [](int tenths) {
      return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
    };
    auto brick = [](int i) { return "brick " + std::to_string(i); };

    // bricks 1..n: bottom row, n+1..2n: top row
    std::string text;
    for (int j = 1; j < n; ++j)
      text += brick(j) + " connects to " + brick(j + 1) + "; " + brick(n + j) +
              " connects to " + brick(n + j + 1) + "; ";
    for (int j = 1; j <= n; ++j)
      text += brick(j) + " also connects to " + brick(n + j) +
              (j == n ? ". " : "; ");
    text += "Brick 1 and " + brick(n + 1) +
            " are in communication with inside air at temperature $T_in$; " +
            brick(n) + " and " + brick(2 * n) +
            " are in communication with outside air at temperature $T_out$."
            " The coordinates are denoted $x_1$, $x_2$, and $x_3$;"
            " $x_1$ corresponds to distance through the wall."
            " Each brick is a parallelepiped of rectangular cross-section of"
            " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$). ";
    int station = 0;
    for (int j = 1; j <= n; ++j) {
      int next = station + wd[j - 1];
      text += "The spatial domain of " + brick(j) + " is $" + dec(station) +
              " < x_1 < " + dec(next) + ", 0 < x_2 < a, 0 < x_3 < b$; the"
              " spatial domain of " + brick(n + j) + " is $" + dec(station) +
              " < x_1 < " + dec(next) + ", 0 < x_2 < a, b < x_3 < 2b$. ";
      station = next;
    }
    text += "Each brick has thermal conductivity $k_b$."
            " Brick 1 and " + brick(n + 1) +
            " are exposed to inside air over the faces at $x_1 = 0$ through"
            " heat transfer coefficient $h_in$; " + brick(n) + " and " +
            brick(2 * n) + " are exposed to outside air over the faces at"
            " $x_1 = " + dec(station) + "$ through heat transfer coefficient"
            " $h_out$. The remainder of the boundary is insulated."
            " We introduce a nondimensional heat transfer rate $H$ given by"
            " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate"
            " into brick 1 over the face at $x_1 = 0$."
            " Develop a lower bound and also an upper bound for $H$."
            " You may use the following parameter values: $T_in = 23$,"
            " $T_out = 0$, $a = 0.1$, $b = 0.1$, $h_in = " +
            std::to_string(hin) + "$, $h_out = " + std::to_string(hout) +
            "$, $L = 1$, and $k_b = 0." + std::to_string(kd) + "$.";

    Bounds r = solve_bounds(text);
    REQUIRE((int)r.b.system.components.size() == 2 * n);

    // exact network: both rows identical, so the field is one-dimensional
    // and the bounds meet at the series-resistance value (the requested
    // rate resolves to the total film inflow across the left extreme)
    Rational A(1, 100), k(kd, 10);
    Rational R = Rational(1, hin) / (2 * A) + Rational(1, hout) / (2 * A);
    for (int j = 0; j < n; ++j) R += Rational(wd[j], 10) / (k * 2 * A);
    Rational Q = Rational(23) / R;
    Rational H = Q / (k * 23 * Rational(1, 10));

    CHECK(r.ub.h == H);
    CHECK(r.lb.h == H);
    CHECK(check_ordering({r.lb.h, r.ub.h, std::nullopt}).ok);

    if (trial % 37 == 0) {
      // the exact field is linear in x_1, so even the initial FE mesh
      // reproduces it and the certified value must land inside the pinch
      fem2d::AdaptOptions opt;
      opt.max_dofs = 20000;
      fem2d::FeSolution fe = fem2d::run_adaptive(r.b.system, r.c, opt);
      CHECK(fe.qoi_value == doctest::Approx(to_double(H)).epsilon(1e-8));
      CHECK(fe.qoi_error_estimate <= 1e-7);
      BoundResult with_fe{r.lb.h, r.ub.h, fe.qoi_value,
                          fe.qoi_error_estimate + 1e-9};
      CHECK(check_ordering(with_fe).ok);
    }
  }
}
