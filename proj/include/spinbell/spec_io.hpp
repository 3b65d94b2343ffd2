#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "spinbell/lattice.hpp"
#include "spinbell/quantum.hpp"

namespace spinbell {

/// Contents of a lattice spec file: the classical lattice plus an optional
/// quantum block.
struct SpecDocument {
  LatticeSpec lattice;
  std::optional<QuantumParams> quantum;

  bool operator==(const SpecDocument&) const = default;
};

/// JSON document:
///   { "n_sites": N, "labels": [...], "edges": [[i, j, J], ...], "fields": [...],
///     "beta": b, "roles": {"outcome1": i, "outcome2": i, "settingA": i,
///     "settingB": i, "hidden": [...]}, "mirror_map": [...],
///     "quantum": {"J": J, "h": h, "beta": b} }
/// Site references may be indices or labels. Reals may be numbers or decimal
/// strings. Parse errors carry "line L, column C".
SpecDocument parse_spec(const std::string& text);
SpecDocument load_spec(const std::string& path);

/// Reals are written in shortest round-trip form, so parse(dump(x)) == x.
std::string dump_spec(const SpecDocument& doc);
void save_spec(const SpecDocument& doc, const std::string& path);

SpecDocument named_document(const std::string& name);

}  // namespace spinbell
