#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "calor/frame.hpp"
#include "calor/pde_template.hpp"
#include "calor/system.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(CALOR_FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) {
  return read_file(fixture_path(name));
}

// Statement -> assembled system, for tests that start mid-pipeline.
struct Built {
  calor::frame::Frame frame;
  calor::PdeTemplate tmpl;
  calor::System system;
};

inline Built build(const std::string& statement_text) {
  Built b;
  b.frame = calor::frame::parse_document(statement_text);
  b.tmpl = calor::assemble_template(b.frame);
  b.system = calor::connect_system(calor::instantiate_components(b.tmpl), b.frame);
  return b;
}

inline Built build_fixture(const std::string& name) { return build(fixture(name)); }

// ---- synthetic brick-union statements ------------------------------------
// All reuse the wall-3d vocabulary (k_b, h_in/h_out, T_in/T_out) so the
// bound-rate machinery resolves the same normalization symbols.

// One brick, films on both ends.  The two decompositions coincide, so the
// bounds must pinch the exact value.
inline std::string single_brick_statement() {
  return "Brick 1 is in communication with inside air at temperature $T_in$;"
         " brick 1 is also in communication with outside air at temperature"
         " $T_out$. The coordinates are denoted $x_1$, $x_2$, and $x_3$;"
         " $x_1$ corresponds to distance through the wall."
         " Brick 1 is a parallelepiped of rectangular cross-section of"
         " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$)."
         " The spatial domain of brick 1 is $0 < x_1 < L, 0 < x_2 < a,"
         " 0 < x_3 < b$. Brick 1 has thermal conductivity $k_b$."
         " Brick 1 is exposed to inside air over the face at $x_1 = 0$ through"
         " heat transfer coefficient $h_in$; brick 1 is exposed to outside air"
         " over the face at $x_1 = L$ through heat transfer coefficient"
         " $h_out$. The remainder of the boundary is insulated."
         " We introduce a nondimensional heat transfer rate $H$ given by"
         " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate"
         " into brick 1 over the face at $x_1 = 0$."
         " Develop a lower bound and also an upper bound for $H$."
         " You may use the following parameter values: $T_in = 23$,"
         " $T_out = 0$, $a = 0.1$, $b = 0.1$, $L = 0.05$, $h_in = 10$,"
         " $h_out = 100$, and $k_b = 0.5$.";
}

// Two bricks in series: the slice set is the dof set, so coalescing is the
// identity and both bounds are the exact 1d value.
inline std::string two_brick_chain_statement() {
  return "Brick 1 connects to brick 2. Brick 1 is in communication with"
         " inside air at temperature $T_in$; brick 2 is in communication with"
         " outside air at temperature $T_out$."
         " The coordinates are denoted $x_1$, $x_2$, and $x_3$;"
         " $x_1$ corresponds to distance through the wall."
         " Each brick is a parallelepiped of rectangular cross-section of"
         " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$)."
         " The spatial domain of brick 1 is $0 < x_1 < L, 0 < x_2 < a,"
         " 0 < x_3 < b$; the spatial domain of brick 2 is $L < x_1 < 2L,"
         " 0 < x_2 < a, 0 < x_3 < b$."
         " Each brick has thermal conductivity $k_b$."
         " Brick 1 is exposed to inside air over the face at $x_1 = 0$ through"
         " heat transfer coefficient $h_in$; brick 2 is exposed to outside air"
         " over the face at $x_1 = 2L$ through heat transfer coefficient"
         " $h_out$. The remainder of the boundary is insulated."
         " We introduce a nondimensional heat transfer rate $H$ given by"
         " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate"
         " into brick 1 over the face at $x_1 = 0$."
         " Develop a lower bound and also an upper bound for $H$."
         " You may use the following parameter values: $T_in = 23$,"
         " $T_out = 0$, $a = 0.1$, $b = 0.1$, $L = 0.05$, $h_in = 10$,"
         " $h_out = 100$, and $k_b = 0.5$.";
}

// 2x2 grid: two stacked rows of two bricks each, films on the left and right
// columns, row-to-row contact on the transverse faces.
inline std::string brick_ladder_statement() {
  return "Brick 1 connects to brick 2; brick 3 connects to brick 4;"
         " brick 1 also connects to brick 3; brick 2 also connects to"
         " brick 4. Brick 1 and brick 3 are in communication with inside air"
         " at temperature $T_in$; brick 2 and brick 4 are in communication"
         " with outside air at temperature $T_out$."
         " The coordinates are denoted $x_1$, $x_2$, and $x_3$;"
         " $x_1$ corresponds to distance through the wall."
         " Each brick is a parallelepiped of rectangular cross-section of"
         " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$)."
         " The spatial domain of brick 1 is $0 < x_1 < L, 0 < x_2 < a,"
         " 0 < x_3 < b$; the spatial domain of brick 2 is $L < x_1 < 2L,"
         " 0 < x_2 < a, 0 < x_3 < b$; the spatial domain of brick 3 is"
         " $0 < x_1 < L, 0 < x_2 < a, b < x_3 < 2b$; the spatial domain of"
         " brick 4 is $L < x_1 < 2L, 0 < x_2 < a, b < x_3 < 2b$."
         " Each brick has thermal conductivity $k_b$."
         " Brick 1 and brick 3 are exposed to inside air over the faces at"
         " $x_1 = 0$ through heat transfer coefficient $h_in$; brick 2 and"
         " brick 4 are exposed to outside air over the faces at $x_1 = 2L$"
         " through heat transfer coefficient $h_out$."
         " The remainder of the boundary is insulated."
         " We introduce a nondimensional heat transfer rate $H$ given by"
         " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate"
         " into brick 1 over the face at $x_1 = 0$."
         " Develop a lower bound and also an upper bound for $H$."
         " You may use the following parameter values: $T_in = 23$,"
         " $T_out = 0$, $a = 0.1$, $b = 0.1$, $L = 0.05$, $h_in = 10$,"
         " $h_out = 100$, and $k_b = 0.5$.";
}

// H-shaped union of five bricks: two short bars bridged by a full-length
// brick.  The interior station cuts the domain in two disconnected face
// groups, which exercises the connected-part split.
inline std::string split_slice_statement() {
  return "Brick 1 connects to brick 2; brick 4 connects to brick 5;"
         " brick 1 also connects to brick 3; brick 2 also connects to"
         " brick 3; brick 3 also connects to brick 4; brick 3 also connects"
         " to brick 5. Brick 1, brick 3, and brick 4 are in communication"
         " with inside air at temperature $T_in$; brick 2, brick 3, and"
         " brick 5 are in communication with outside air at temperature"
         " $T_out$."
         " The coordinates are denoted $x_1$, $x_2$, and $x_3$;"
         " $x_1$ corresponds to distance through the wall."
         " Each brick is a parallelepiped of rectangular cross-section of"
         " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$)."
         " The spatial domain of brick 1 is $0 < x_1 < L, 0 < x_2 < a,"
         " 0 < x_3 < b$; the spatial domain of brick 2 is $L < x_1 < 2L,"
         " 0 < x_2 < a, 0 < x_3 < b$; the spatial domain of brick 3 is"
         " $0 < x_1 < 2L, 0 < x_2 < a, b < x_3 < 2b$; the spatial domain of"
         " brick 4 is $0 < x_1 < L, 0 < x_2 < a, 2b < x_3 < 3b$; the spatial"
         " domain of brick 5 is $L < x_1 < 2L, 0 < x_2 < a, 2b < x_3 < 3b$."
         " Each brick has thermal conductivity $k_b$."
         " Brick 1, brick 3, and brick 4 are exposed to inside air over the"
         " faces at $x_1 = 0$ through heat transfer coefficient $h_in$;"
         " brick 2, brick 3, and brick 5 are exposed to outside air over the"
         " faces at $x_1 = 2L$ through heat transfer coefficient $h_out$."
         " The remainder of the boundary is insulated."
         " We introduce a nondimensional heat transfer rate $H$ given by"
         " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate"
         " into brick 1 over the face at $x_1 = 0$."
         " Develop a lower bound and also an upper bound for $H$."
         " You may use the following parameter values: $T_in = 23$,"
         " $T_out = 0$, $a = 0.1$, $b = 0.1$, $L = 0.05$, $h_in = 10$,"
         " $h_out = 100$, and $k_b = 0.5$.";
}

}  // namespace testutil
