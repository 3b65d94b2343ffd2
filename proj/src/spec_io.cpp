#include "spinbell/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"

namespace spinbell {
namespace {

using nlohmann::json;

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double as_real(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw_input(what + " must be a real number");
}

// Site references are resolved against labels after they are known.
Site as_site(const json& v, const LatticeSpec& spec, const std::string& what) {
  if (v.is_number_unsigned()) {
    const auto s = v.get<std::uint64_t>();
    if (s >= spec.n_sites) throw_input(what + " = " + std::to_string(s) + " is outside [0, N)");
    return static_cast<Site>(s);
  }
  if (v.is_string()) {
    const auto& label = v.get_ref<const std::string&>();
    for (Site s = 0; s < spec.labels.size(); ++s)
      if (spec.labels[s] == label) return s;
    throw_input(what + " refers to unknown label '" + label + "'");
  }
  throw_input(what + " must be a site index or label");
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw_input(std::string("missing required field '") + key + "'");
  return *it;
}

SpecDocument from_json(const json& j) {
  if (!j.is_object()) throw_input("spec document must be a JSON object");
  SpecDocument doc;
  LatticeSpec& spec = doc.lattice;

  const json& n = require(j, "n_sites");
  if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0) throw_input("n_sites must be a positive integer");
  spec.n_sites = n.get<std::size_t>();

  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array()) throw_input("labels must be an array of strings");
    for (const auto& l : *it) {
      if (!l.is_string()) throw_input("labels must be an array of strings");
      spec.labels.push_back(l.get<std::string>());
    }
  }

  const json& edges = require(j, "edges");
  if (!edges.is_array()) throw_input("edges must be an array of [i, j, J] triples");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::string tag = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 3) throw_input(tag + " must be an [i, j, J] triple");
    spec.edges.push_back({as_site(e[0], spec, tag), as_site(e[1], spec, tag), as_real(e[2], tag + " coupling")});
  }

  const json& fields = require(j, "fields");
  if (!fields.is_array()) throw_input("fields must be an array of reals");
  for (std::size_t k = 0; k < fields.size(); ++k)
    spec.fields.push_back(as_real(fields[k], "fields[" + std::to_string(k) + "]"));

  if (auto it = j.find("beta"); it != j.end()) spec.beta = as_real(*it, "beta");

  if (auto it = j.find("roles"); it != j.end()) {
    const json& roles = *it;
    if (!roles.is_object()) throw_input("roles must be an object");
    spec.roles.outcome1 = as_site(require(roles, "outcome1"), spec, "roles.outcome1");
    spec.roles.outcome2 = as_site(require(roles, "outcome2"), spec, "roles.outcome2");
    spec.roles.setting_a = as_site(require(roles, "settingA"), spec, "roles.settingA");
    spec.roles.setting_b = as_site(require(roles, "settingB"), spec, "roles.settingB");
    const json& hidden = require(roles, "hidden");
    if (!hidden.is_array()) throw_input("roles.hidden must be an array");
    for (const auto& h : hidden) spec.roles.hidden.push_back(as_site(h, spec, "roles.hidden"));
  }

  if (auto it = j.find("mirror_map"); it != j.end()) {
    if (!it->is_array()) throw_input("mirror_map must be an array");
    for (const auto& m : *it) spec.mirror_map.push_back(as_site(m, spec, "mirror_map"));
  }

  if (auto it = j.find("quantum"); it != j.end()) {
    if (!it->is_object()) throw_input("quantum must be an object");
    QuantumParams q;
    if (auto f = it->find("J"); f != it->end()) q.coupling = as_real(*f, "quantum.J");
    if (auto f = it->find("h"); f != it->end()) q.transverse = as_real(*f, "quantum.h");
    if (auto f = it->find("beta"); f != it->end()) q.beta = as_real(*f, "quantum.beta");
    doc.quantum = q;
  }
  return doc;
}

}  // namespace

SpecDocument parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_input("parse error at " + location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw_input(std::string("malformed spec: ") + e.what());
  }
}

SpecDocument load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot read spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spec(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string dump_spec(const SpecDocument& doc) {
  const LatticeSpec& spec = doc.lattice;
  // Hand-formatted so edge triples stay on one line each.
  auto real = [](double v) { return json(v).dump(); };
  std::ostringstream os;
  os << "{\n  \"n_sites\": " << spec.n_sites << ",\n";
  if (!spec.labels.empty()) os << "  \"labels\": " << json(spec.labels).dump() << ",\n";
  os << "  \"edges\": [";
  for (std::size_t k = 0; k < spec.edges.size(); ++k) {
    const auto& e = spec.edges[k];
    os << (k ? ",\n    " : "\n    ") << "[" << e.i << ", " << e.j << ", " << real(e.coupling) << "]";
  }
  os << (spec.edges.empty() ? "],\n" : "\n  ],\n");
  os << "  \"fields\": [";
  for (std::size_t k = 0; k < spec.fields.size(); ++k) os << (k ? ", " : "") << real(spec.fields[k]);
  os << "],\n";
  os << "  \"beta\": " << real(spec.beta);
  const auto& r = spec.roles;
  // Unset roles (all zero) are never valid, so omitting them loses nothing.
  if (!(r == RoleAssignment{}))
    os << ",\n  \"roles\": {\"outcome1\": " << r.outcome1 << ", \"outcome2\": " << r.outcome2
       << ", \"settingA\": " << r.setting_a << ", \"settingB\": " << r.setting_b
       << ", \"hidden\": " << json(r.hidden).dump() << "}";
  if (!spec.mirror_map.empty()) os << ",\n  \"mirror_map\": " << json(spec.mirror_map).dump();
  if (doc.quantum) {
    os << ",\n  \"quantum\": {\"J\": " << real(doc.quantum->coupling) << ", \"h\": " << real(doc.quantum->transverse)
       << ", \"beta\": " << real(doc.quantum->beta) << "}";
  }
  os << "\n}\n";
  return os.str();
}

void save_spec(const SpecDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_input("cannot write spec file '" + path + "'");
  out << dump_spec(doc);
  if (!out) throw_input("failed writing spec file '" + path + "'");
}

SpecDocument named_document(const std::string& name) {
  SpecDocument doc;
  doc.lattice = named_spec(name);
  if (name == "chain4") doc.quantum = QuantumParams{1.0, 0.5, 1.0};
  return doc;
}

}  // namespace spinbell
