#include "spinbell/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "spinbell/error.hpp"

namespace spinbell {

std::string LatticeSpec::label(Site s) const {
  if (s < labels.size() && !labels[s].empty()) return labels[s];
  return std::to_string(s);
}

std::optional<Site> LatticeSpec::find_site(const std::string& token) const {
  for (Site s = 0; s < labels.size(); ++s)
    if (labels[s] == token) return s;
  Site value = 0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) return std::nullopt;
  if (value >= n_sites) return std::nullopt;
  return value;
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  os << (ok() ? "valid" : "invalid");
  os << "; bell_local=" << (bell_local ? "yes" : "no");
  os << "; hidden_separates=" << (hidden_separates ? "yes" : "no");
  if (mirror_checked) os << "; mirror_symmetric=" << (mirror_symmetric ? "yes" : "no");
  for (const auto& e : errors) os << "\n  error: " << e;
  return os.str();
}

bool separates(const LatticeSpec& spec, std::span<const Site> cut, std::span<const Site> from,
               std::span<const Site> to) {
  const std::size_t n = spec.n_sites;
  std::vector<char> blocked(n, 0), target(n, 0), seen(n, 0);
  for (Site s : cut)
    if (s < n) blocked[s] = 1;
  for (Site s : to)
    if (s < n) target[s] = 1;
  std::vector<std::vector<Site>> adj(n);
  for (const auto& e : spec.edges) {
    if (e.coupling == 0.0 || e.i >= n || e.j >= n) continue;
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<Site> stack;
  for (Site s : from) {
    if (s >= n || blocked[s]) continue;
    if (target[s]) return false;
    seen[s] = 1;
    stack.push_back(s);
  }
  while (!stack.empty()) {
    const Site u = stack.back();
    stack.pop_back();
    for (Site v : adj[u]) {
      if (blocked[v] || seen[v]) continue;
      if (target[v]) return false;
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  return true;
}

namespace {

bool mirror_symmetric(const LatticeSpec& spec) {
  const auto& m = spec.mirror_map;
  const std::size_t n = spec.n_sites;
  for (Site s = 0; s < n; ++s) {
    if (m[m[s]] != s) return false;
    if (spec.fields[s] != spec.fields[m[s]]) return false;
  }
  const auto& r = spec.roles;
  if (m[r.outcome1] != r.outcome2 || m[r.setting_a] != r.setting_b) return false;
  std::vector<std::pair<std::pair<Site, Site>, double>> weighted;
  for (const auto& e : spec.edges) weighted.push_back({std::pair<Site, Site>(std::minmax(e.i, e.j)), e.coupling});
  std::sort(weighted.begin(), weighted.end());
  for (const auto& e : spec.edges) {
    const std::pair<Site, Site> key = std::minmax(m[e.i], m[e.j]);
    auto it = std::lower_bound(weighted.begin(), weighted.end(), std::make_pair(key, -HUGE_VAL));
    if (it == weighted.end() || it->first != key || it->second != e.coupling) return false;
  }
  return true;
}

}  // namespace

ValidationReport validate_spec(const LatticeSpec& spec, std::size_t cap, bool check_roles) {
  ValidationReport rep;
  const std::size_t n = spec.n_sites;
  auto err = [&](const std::string& s) { rep.errors.push_back(s); };

  if (n == 0) err("n_sites must be positive");
  if (n > cap) err("n_sites = " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap));
  if (spec.fields.size() != n)
    err("fields has " + std::to_string(spec.fields.size()) + " entries, expected " + std::to_string(n));
  for (std::size_t i = 0; i < spec.fields.size(); ++i)
    if (!std::isfinite(spec.fields[i])) err("field h_" + std::to_string(i) + " is not finite");
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta)) err("beta must be a positive finite number");
  if (!spec.labels.empty() && spec.labels.size() != n) err("labels must have one entry per site");

  std::set<std::pair<Site, Site>> seen;
  for (std::size_t k = 0; k < spec.edges.size(); ++k) {
    const auto& e = spec.edges[k];
    const std::string tag = "edge #" + std::to_string(k);
    if (e.i >= n || e.j >= n) {
      err(tag + " has an endpoint outside [0, N)");
      continue;
    }
    if (e.i == e.j) err(tag + " is a self-loop");
    if (!std::isfinite(e.coupling)) err(tag + " has a non-finite coupling");
    if (!seen.insert(std::minmax(e.i, e.j)).second) err(tag + " duplicates an earlier edge");
  }

  if (!check_roles) return rep;

  const auto& r = spec.roles;
  std::vector<int> count(n, 0);
  bool roles_in_range = true;
  auto mark = [&](Site s, const char* what) {
    if (s >= n) {
      err(std::string(what) + " site " + std::to_string(s) + " is outside [0, N)");
      roles_in_range = false;
      return;
    }
    ++count[s];
  };
  mark(r.outcome1, "outcome1");
  mark(r.outcome2, "outcome2");
  mark(r.setting_a, "settingA");
  mark(r.setting_b, "settingB");
  for (Site h : r.hidden) mark(h, "hidden");
  for (Site s = 0; s < n; ++s) {
    if (count[s] == 0) err("site " + std::to_string(s) + " has no role");
    if (count[s] > 1) err("site " + std::to_string(s) + " is assigned more than one role");
  }

  if (!spec.mirror_map.empty()) {
    if (spec.mirror_map.size() != n) {
      err("mirror_map must have one entry per site");
    } else if (std::any_of(spec.mirror_map.begin(), spec.mirror_map.end(), [n](Site s) { return s >= n; })) {
      err("mirror_map entry outside [0, N)");
    }
  }

  if (roles_in_range && rep.errors.empty()) {
    const Site left[] = {r.outcome1, r.setting_a};
    const Site right[] = {r.outcome2, r.setting_b};
    rep.bell_local = true;
    for (const auto& e : spec.edges) {
      if (e.coupling == 0.0) continue;
      const bool il = e.i == left[0] || e.i == left[1];
      const bool ir = e.i == right[0] || e.i == right[1];
      const bool jl = e.j == left[0] || e.j == left[1];
      const bool jr = e.j == right[0] || e.j == right[1];
      if ((il && jr) || (ir && jl)) rep.bell_local = false;
    }
    rep.hidden_separates = separates(spec, r.hidden, left, right);
    if (!spec.mirror_map.empty()) {
      rep.mirror_checked = true;
      rep.mirror_symmetric = mirror_symmetric(spec);
    }
  }
  return rep;
}

void require_valid(const LatticeSpec& spec, std::size_t cap, bool check_roles) {
  const auto rep = validate_spec(spec, cap, check_roles);
  if (rep.ok()) return;
  // A spec that is structurally fine but too large is a resource problem.
  const auto structural = validate_spec(spec, static_cast<std::size_t>(-1), check_roles);
  if (structural.ok()) throw_cap(rep.errors.front());
  std::string msg = "invalid lattice spec:";
  for (const auto& e : rep.errors) msg += "\n  " + e;
  throw_input(msg);
}

SpinConfiguration::SpinConfiguration(std::uint64_t index, std::size_t n_sites)
    : index_(index), n_sites_(n_sites) {
  if (n_sites > 63) throw_input("spin configurations support at most 63 sites");
  if (index >> n_sites) throw_input("configuration index out of range");
}

SpinConfiguration SpinConfiguration::from_values(std::span<const int> values) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 1)
      idx |= std::uint64_t{1} << i;
    else if (values[i] != -1)
      throw_input("spin values must be +1 or -1");
  }
  return {idx, values.size()};
}

std::vector<int> SpinConfiguration::values() const {
  std::vector<int> v(n_sites_);
  for (std::size_t i = 0; i < n_sites_; ++i) v[i] = spin(i);
  return v;
}

SpinConfiguration SpinConfiguration::flipped() const {
  const std::uint64_t mask = n_sites_ == 0 ? 0 : (~std::uint64_t{0} >> (64 - n_sites_));
  return {index_ ^ mask, n_sites_};
}

double energy(const LatticeSpec& spec, std::uint64_t index) {
  double coupling_sum = 0.0;
  for (const auto& e : spec.edges) coupling_sum += e.coupling * spin_of(index, e.i) * spin_of(index, e.j);
  double field_sum = 0.0;
  for (Site s = 0; s < spec.n_sites; ++s) field_sum += spec.fields[s] * spin_of(index, s);
  return -coupling_sum - field_sum;
}

double energy(const LatticeSpec& spec, const SpinConfiguration& config) {
  if (config.size() != spec.n_sites) throw_input("configuration length does not match n_sites");
  return energy(spec, config.index());
}

ConfigurationRange enumerate(const LatticeSpec& spec, std::size_t cap) {
  if (spec.n_sites > cap)
    throw_cap("n_sites = " + std::to_string(spec.n_sites) + " exceeds enumeration cap " + std::to_string(cap));
  return ConfigurationRange(spec.n_sites);
}

std::vector<std::vector<std::pair<Site, double>>> neighbour_lists(const LatticeSpec& spec) {
  std::vector<std::vector<std::pair<Site, double>>> adj(spec.n_sites);
  for (const auto& e : spec.edges) {
    adj[e.i].emplace_back(e.j, e.coupling);
    adj[e.j].emplace_back(e.i, e.coupling);
  }
  return adj;
}

}  // namespace spinbell
