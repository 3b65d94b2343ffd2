#include "spinbell/quantum.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "spinbell/error.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {
namespace {

void check_model(const QuantumModel& model, std::size_t cap) {
  const auto& lat = model.lattice;
  if (lat.n_sites == 0) throw_input("quantum model needs at least one site");
  if (lat.n_sites > cap)
    throw_cap("n_sites = " + std::to_string(lat.n_sites) + " exceeds quantum cap " + std::to_string(cap));
  for (const auto& e : lat.edges)
    if (e.i >= lat.n_sites || e.j >= lat.n_sites || e.i == e.j) throw_input("malformed edge in quantum model");
  const auto& p = model.params;
  if (!std::isfinite(p.coupling) || !std::isfinite(p.transverse)) throw_input("quantum couplings must be finite");
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) throw_input("quantum beta must be a positive finite number");
}

}  // namespace

Eigen::MatrixXd build_hamiltonian(const QuantumModel& model, std::size_t cap) {
  check_model(model, cap);
  const std::size_t n = model.lattice.n_sites;
  const auto dim = static_cast<Eigen::Index>(model.dimension());
  const double j = model.params.coupling;
  const double off = -model.params.transverse * j;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  // Column-major storage: fill column by column.
  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t b, std::size_t e) {
    for (std::size_t col = b; col < e; ++col) {
      const auto c = static_cast<Eigen::Index>(col);
      double diag = 0.0;
      for (const auto& edge : model.lattice.edges) diag -= j * spin_of(col, edge.i) * spin_of(col, edge.j);
      h(c, c) = diag;
      for (Site s = 0; s < n; ++s) h(static_cast<Eigen::Index>(col ^ (std::size_t{1} << s)), c) = off;
    }
  });
  return h;
}

QuantumSpectrum diagonalize(const QuantumModel& model, std::size_t cap) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_hamiltonian(model, cap));
  if (solver.info() != Eigen::Success) throw_numerical("symmetric eigendecomposition did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DistributionTable thermal_z_distribution(const QuantumSpectrum& spectrum, std::size_t n_sites, double beta) {
  const auto& ev = spectrum.eigenvalues;
  const double e0 = ev.minCoeff();
  const Eigen::VectorXd w = (-beta * (ev.array() - e0)).exp().matrix();
  const double z_scaled = w.sum();
  const Eigen::VectorXd diag = spectrum.eigenvectors.array().square().matrix() * w;
  std::vector<double> probs(static_cast<std::size_t>(diag.size()));
  for (Eigen::Index i = 0; i < diag.size(); ++i) probs[static_cast<std::size_t>(i)] = diag(i) / z_scaled;
  // Renormalise away the rounding in the eigenvector norms.
  const double total = pairwise_sum(probs);
  for (double& p : probs) p /= total;
  return DistributionTable(n_sites, std::move(probs), -beta * e0 + std::log(z_scaled),
                           DistributionSource::quantum_thermal_diagonal);
}

DistributionTable ground_z_distribution(const QuantumSpectrum& spectrum, std::size_t n_sites) {
  const auto& ev = spectrum.eigenvalues;
  const double e0 = ev(0);
  const double tol = 1e-10 * std::max(1.0, std::abs(e0));
  Eigen::Index degeneracy = 0;
  while (degeneracy < ev.size() && ev(degeneracy) - e0 <= tol) ++degeneracy;
  const Eigen::VectorXd diag =
      spectrum.eigenvectors.leftCols(degeneracy).array().square().rowwise().sum().matrix() / double(degeneracy);
  std::vector<double> probs(static_cast<std::size_t>(diag.size()));
  for (Eigen::Index i = 0; i < diag.size(); ++i) probs[static_cast<std::size_t>(i)] = diag(i);
  for (double p : probs)
    if (!(p > 0.0))
      throw_numerical("ground-state z distribution has zero-weight configurations; use the thermal state");
  const double total = pairwise_sum(probs);
  for (double& p : probs) p /= total;
  return DistributionTable(n_sites, std::move(probs), 0.0, DistributionSource::quantum_ground_diagonal);
}

DistributionTable z_distribution(const QuantumModel& model, QuantumState state, std::size_t cap) {
  const auto spectrum = diagonalize(model, cap);
  if (state == QuantumState::ground) return ground_z_distribution(spectrum, model.lattice.n_sites);
  return thermal_z_distribution(spectrum, model.lattice.n_sites, model.params.beta);
}

DistributionTable thermal_z_distribution(const QuantumModel& model, std::size_t cap) {
  return z_distribution(model, QuantumState::thermal, cap);
}

}  // namespace spinbell
