#include "spinbell/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include "spinbell/error.hpp"

namespace spinbell {
namespace {

std::string cell_name(GridCell c) { return "r" + std::to_string(c.row) + "c" + std::to_string(c.col); }

bool connected(const std::vector<GridCell>& cells) {
  if (cells.empty()) return false;
  std::vector<char> seen(cells.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < cells.size(); ++v) {
      if (seen[v]) continue;
      const int d = std::abs(cells[u].row - cells[v].row) + std::abs(cells[u].col - cells[v].col);
      if (d != 1) continue;
      seen[v] = 1;
      ++reached;
      stack.push_back(v);
    }
  }
  return reached == cells.size();
}

void add_family(std::vector<Geometry>& out, int rows, int cols, std::size_t n_sites) {
  // Mirror orbits of the column reflection, in row-major order of their first cell.
  std::vector<std::vector<GridCell>> orbits;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int m = cols - 1 - c;
      if (m < c) continue;
      if (m == c)
        orbits.push_back({{r, c}});
      else
        orbits.push_back({{r, c}, {r, m}});
    }
  const std::size_t k = orbits.size();
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<GridCell> cells;
    for (std::size_t o = 0; o < k; ++o)
      if (mask & (1u << o)) cells.insert(cells.end(), orbits[o].begin(), orbits[o].end());
    if (cells.size() != n_sites) continue;
    std::sort(cells.begin(), cells.end(),
              [](GridCell a, GridCell b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    if (!connected(cells)) continue;

    std::vector<GridCell> missing;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (std::find(cells.begin(), cells.end(), GridCell{r, c}) == cells.end()) missing.push_back({r, c});
    std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
    if (missing.empty()) {
      shape += ":full";
    } else {
      shape += ":minus";
      for (auto c : missing) shape += "-" + cell_name(c);
    }

    std::vector<GridCell> left;
    for (auto c : cells)
      if (2 * c.col < cols - 1) left.push_back(c);
    for (auto o1 : left)
      for (auto sa : left) {
        if (o1 == sa) continue;
        Geometry g = grid_geometry(shape + ":1=" + cell_name(o1) + ":a=" + cell_name(sa), cols, cells, o1, sa);
        const auto rep = validate_spec(g.lattice);
        if (rep.ok() && rep.bell_local && rep.hidden_separates) out.push_back(std::move(g));
      }
  }
}

}  // namespace

Geometry grid_geometry(std::string name, int cols, const std::vector<GridCell>& cells, GridCell outcome1,
                       GridCell setting_a) {
  const std::size_t n = cells.size();
  auto index_of = [&](GridCell c) -> std::optional<Site> {
    auto it = std::find(cells.begin(), cells.end(), c);
    if (it == cells.end()) return std::nullopt;
    return static_cast<Site>(it - cells.begin());
  };
  auto mirror = [cols](GridCell c) { return GridCell{c.row, cols - 1 - c.col}; };

  Geometry g;
  g.name = std::move(name);
  LatticeSpec& spec = g.lattice;
  spec.n_sites = n;
  spec.fields.assign(n, 0.0);
  spec.beta = 1.0;
  for (Site s = 0; s < n; ++s) {
    for (GridCell nb : {GridCell{cells[s].row, cells[s].col + 1}, GridCell{cells[s].row + 1, cells[s].col}})
      if (auto t = index_of(nb)) spec.edges.push_back({s, *t, 1.0});
  }
  spec.mirror_map.resize(n);
  for (Site s = 0; s < n; ++s) {
    auto m = index_of(mirror(cells[s]));
    if (!m) throw_input("grid geometry '" + g.name + "' is not mirror symmetric");
    spec.mirror_map[s] = *m;
  }
  auto o1 = index_of(outcome1);
  auto sa = index_of(setting_a);
  auto o2 = index_of(mirror(outcome1));
  auto sb = index_of(mirror(setting_a));
  if (!o1 || !sa || !o2 || !sb) throw_input("role cell missing from grid geometry '" + g.name + "'");
  spec.roles.outcome1 = *o1;
  spec.roles.setting_a = *sa;
  spec.roles.outcome2 = *o2;
  spec.roles.setting_b = *sb;
  spec.labels.assign(n, "");
  spec.labels[*o1] = "1";
  spec.labels[*o2] = "2";
  spec.labels[*sa] = "a";
  spec.labels[*sb] = "b";
  int next = 3;
  for (Site s = 0; s < n; ++s) {
    if (!spec.labels[s].empty()) continue;
    spec.roles.hidden.push_back(s);
    spec.labels[s] = std::to_string(next++);
  }
  return g;
}

namespace {

std::vector<GridCell> full_grid(int rows, int cols) {
  std::vector<GridCell> cells;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) cells.push_back({r, c});
  return cells;
}

}  // namespace

Geometry fig1_geometry() {
  return grid_geometry("2x5:full:1=r0c0:a=r1c1", 5, full_grid(2, 5), {0, 0}, {1, 1});
}

Geometry outer_column_geometry() {
  return grid_geometry("2x5:full:1=r0c0:a=r1c0", 5, full_grid(2, 5), {0, 0}, {1, 0});
}

std::vector<Geometry> default_geometry_family() {
  std::vector<Geometry> family;
  add_family(family, 2, 5, 10);
  add_family(family, 3, 4, 10);
  const std::string lead = fig1_geometry().name;
  std::stable_partition(family.begin(), family.end(), [&](const Geometry& g) { return g.name == lead; });
  return family;
}

LatticeSpec with_uniform(const Geometry& g, double field, double coupling, double beta) {
  LatticeSpec spec = g.lattice;
  std::fill(spec.fields.begin(), spec.fields.end(), field);
  for (auto& e : spec.edges) e.coupling = coupling;
  spec.beta = beta;
  return spec;
}

void set_fields_by_label(LatticeSpec& spec, const std::vector<std::pair<std::string, double>>& fields) {
  for (const auto& [label, value] : fields) {
    auto it = std::find(spec.labels.begin(), spec.labels.end(), label);
    if (it == spec.labels.end()) throw_input("no site labelled '" + label + "'");
    spec.fields[static_cast<std::size_t>(it - spec.labels.begin())] = value;
  }
}

LatticeSpec second_parameter_set(const Geometry& g, double h7, double coupling, double beta) {
  LatticeSpec spec = with_uniform(g, 0.0, coupling, beta);
  set_fields_by_label(spec, {{"1", 1.9}, {"2", 1.9}, {"6", 1.9}, {"8", 1.9},
                             {"3", 0.4}, {"4", 0.4}, {"5", 0.4}, {"a", 0.4}, {"b", 0.4},
                             {"7", h7}});
  return spec;
}

LatticeSpec chain_spec(std::size_t n, double coupling, double field, double beta) {
  LatticeSpec spec;
  spec.n_sites = n;
  spec.fields.assign(n, field);
  spec.beta = beta;
  for (Site s = 0; s + 1 < n; ++s) spec.edges.push_back({s, s + 1, coupling});
  if (n >= 4) {
    spec.roles.setting_a = 0;
    spec.roles.outcome1 = 1;
    spec.roles.outcome2 = n - 2;
    spec.roles.setting_b = n - 1;
    for (Site s = 2; s + 2 < n; ++s) spec.roles.hidden.push_back(s);
    spec.mirror_map.resize(n);
    for (Site s = 0; s < n; ++s) spec.mirror_map[s] = n - 1 - s;
  }
  return spec;
}

namespace {

LatticeSpec with_extra_edge(LatticeSpec spec, const std::string& a, const std::string& b, double coupling) {
  auto i = spec.find_site(a);
  auto j = spec.find_site(b);
  if (!i || !j) throw_input("unknown site label");
  spec.edges.push_back({*i, *j, coupling});
  return spec;
}

}  // namespace

LatticeSpec named_spec(const std::string& name) {
  const Geometry fig1 = fig1_geometry();
  if (name == "fig1-default") return with_uniform(fig1, 1.0, 1.4);
  if (name == "fig1-point2") return second_parameter_set(fig1, 0.8);
  if (name == "fig1-outer-column") return with_uniform(outer_column_geometry(), 1.0, 1.4);
  if (name == "j0-control") return with_uniform(fig1, 1.0, 0.0);
  if (name == "broken-cut-12") return with_extra_edge(with_uniform(fig1, 1.0, 1.4), "1", "2", 1.4);
  if (name == "broken-cut-1b") return with_extra_edge(with_uniform(fig1, 1.0, 1.4), "1", "b", 1.4);
  if (name == "broken-cut-a2") return with_extra_edge(with_uniform(fig1, 1.0, 1.4), "a", "2", 1.4);
  if (name == "broken-cut-ab") return with_extra_edge(with_uniform(fig1, 1.0, 1.4), "a", "b", 1.4);
  if (name == "chain4") return chain_spec(4, 1.0, 0.0);
  if (name == "pair2") return chain_spec(2, 1.0, 0.0);
  throw_input("unknown named spec '" + name + "'");
}

std::vector<std::string> named_spec_names() {
  return {"fig1-default",  "fig1-point2",   "fig1-outer-column", "j0-control", "broken-cut-12",
          "broken-cut-1b", "broken-cut-a2", "broken-cut-ab",     "chain4",
          "pair2"};
}

}  // namespace spinbell
