#pragma once

#include <string>
#include <vector>

#include "spinbell/lattice.hpp"

namespace spinbell {

/// A role-annotated lattice layout with display labels "1", "2", "a", "b" for
/// the role sites and "3", "4", ... for hidden sites in row-major order.
struct Geometry {
  std::string name;
  LatticeSpec lattice;  // couplings set to 1, fields to 0, beta to 1
};

struct GridCell {
  int row = 0;
  int col = 0;
  bool operator==(const GridCell&) const = default;
};

/// Builds a nearest-neighbour layout from occupied grid cells. Site indices
/// follow the order of `cells`; mirror_map reflects columns (c -> cols-1-c).
Geometry grid_geometry(std::string name, int cols, const std::vector<GridCell>& cells, GridCell outcome1,
                       GridCell setting_a);

/// Full 2x5 grid laid out as
///     1 3 4 5 2
///     6 a 7 b 8
Geometry fig1_geometry();

/// Full 2x5 grid with the roles on the outer columns:
///     1 3 4 5 2
///     a 6 7 8 b
Geometry outer_column_geometry();

/// Connected, mirror-symmetric 10-site subsets of the 2x5 and 3x4 square
/// grids, with mirrored role placements in the left half that are Bell-local
/// and separated by the hidden set. Deterministic order; fig1_geometry() is first.
std::vector<Geometry> default_geometry_family();

/// Uniform couplings and fields applied to a geometry.
LatticeSpec with_uniform(const Geometry& g, double field, double coupling, double beta = 1.0);

/// Fields keyed by display label; unknown labels are an input error.
void set_fields_by_label(LatticeSpec& spec, const std::vector<std::pair<std::string, double>>& fields);

/// Second published parameter set: h = 1.9 on sites 1, 2, 6, 8; 0.4 on 3, 4, 5, a, b;
/// h_7 is a free parameter; uniform coupling 2.0.
LatticeSpec second_parameter_set(const Geometry& g, double h7, double coupling = 2.0, double beta = 1.0);

/// Named specs bundled with the CLI: "fig1-default", "fig1-point2",
/// "fig1-outer-column", "j0-control", "broken-cut-12", "broken-cut-1b",
/// "broken-cut-a2", "broken-cut-ab", "chain4", "pair2".
LatticeSpec named_spec(const std::string& name);
std::vector<std::string> named_spec_names();

/// Open chain 0-1-...-(n-1), couplings J, fields h. For n >= 4 the roles are
/// outcome1=0, setting_a=1, setting_b=n-2, outcome2=n-1.
LatticeSpec chain_spec(std::size_t n, double coupling, double field, double beta = 1.0);

}  // namespace spinbell
