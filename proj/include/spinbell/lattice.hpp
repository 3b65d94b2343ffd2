#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spinbell {

inline constexpr std::size_t kDefaultEnumerationCap = 24;

using Site = std::size_t;

struct Edge {
  Site i = 0;
  Site j = 0;
  double coupling = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Which sites play outcome, setting and hidden-variable roles in the
/// correlation experiment. Left group = {outcome1, setting_a}, right group =
/// {outcome2, setting_b}.
struct RoleAssignment {
  Site outcome1 = 0;
  Site outcome2 = 0;
  Site setting_a = 0;
  Site setting_b = 0;
  std::vector<Site> hidden;

  bool operator==(const RoleAssignment&) const = default;
};

struct LatticeSpec {
  std::size_t n_sites = 0;
  std::vector<Edge> edges;
  std::vector<double> fields;
  double beta = 1.0;
  RoleAssignment roles;
  /// Optional left/right involution used for the symmetry check; empty if absent.
  std::vector<Site> mirror_map;
  /// Optional display labels (e.g. "a", "b", "1".."8"); empty if absent.
  std::vector<std::string> labels;

  bool operator==(const LatticeSpec&) const = default;

  std::string label(Site s) const;
  /// Resolves a label first, then a plain decimal index.
  std::optional<Site> find_site(const std::string& token) const;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool bell_local = false;
  bool hidden_separates = false;
  bool mirror_checked = false;
  bool mirror_symmetric = false;

  bool ok() const { return errors.empty(); }
  std::string describe() const;
};

/// Structural checks plus the locality/Markov-cut and mirror-symmetry flags.
/// Cap violations are listed as errors here; require_valid() maps them to
/// ErrorKind::resource_cap.
/// With check_roles = false only the physical model (sites, edges, fields,
/// beta) is checked, which is all the distribution engines need.
ValidationReport validate_spec(const LatticeSpec& spec, std::size_t cap = kDefaultEnumerationCap,
                               bool check_roles = true);

/// Throws Error(input) for structural problems, Error(resource_cap) when only
/// the site count is over `cap`.
void require_valid(const LatticeSpec& spec, std::size_t cap = kDefaultEnumerationCap, bool check_roles = true);

/// True when every path from `from` to `to` passes through `cut`. Edges with
/// zero coupling are ignored.
bool separates(const LatticeSpec& spec, std::span<const Site> cut, std::span<const Site> from,
               std::span<const Site> to);

/// One assignment of +/-1 to every site; bit i of the index is set iff site i is +1.
class SpinConfiguration {
 public:
  SpinConfiguration(std::uint64_t index, std::size_t n_sites);
  static SpinConfiguration from_values(std::span<const int> values);

  std::uint64_t index() const { return index_; }
  std::size_t size() const { return n_sites_; }
  int spin(Site s) const { return ((index_ >> s) & 1u) ? 1 : -1; }
  std::vector<int> values() const;
  SpinConfiguration flipped() const;

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::uint64_t index_;
  std::size_t n_sites_;
};

inline int spin_of(std::uint64_t index, Site s) { return ((index >> s) & 1u) ? 1 : -1; }

double energy(const LatticeSpec& spec, const SpinConfiguration& config);
double energy(const LatticeSpec& spec, std::uint64_t index);

/// Ascending-index range over all 2^N configurations.
class ConfigurationRange {
 public:
  class iterator {
   public:
    using value_type = SpinConfiguration;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(std::uint64_t idx, std::size_t n) : idx_(idx), n_(n) {}
    SpinConfiguration operator*() const { return {idx_, n_}; }
    iterator& operator++() {
      ++idx_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++idx_;
      return t;
    }
    bool operator==(const iterator& o) const { return idx_ == o.idx_; }

   private:
    std::uint64_t idx_ = 0;
    std::size_t n_ = 0;
  };

  explicit ConfigurationRange(std::size_t n_sites) : n_(n_sites) {}
  iterator begin() const { return {0, n_}; }
  iterator end() const { return {std::uint64_t{1} << n_, n_}; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }

 private:
  std::size_t n_;
};

ConfigurationRange enumerate(const LatticeSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// Per-site neighbour lists (site, coupling) built from the edge list.
std::vector<std::vector<std::pair<Site, double>>> neighbour_lists(const LatticeSpec& spec);

}  // namespace spinbell
