#include "collapse/lindblad_fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace collapse::fock {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

std::size_t checked_dimension(std::size_t modes, std::size_t n_max) {
  std::size_t dim = 1;
  for (std::size_t m = 0; m < modes; ++m) {
    dim *= n_max + 1;
    require(dim <= kMaxDimension, "Fock dimension (n_max+1)^K exceeds 4096");
  }
  return dim;
}

double induced_norm_bound(const SparseMatrix& A) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(A.cols());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      col[it.col()] += std::abs(it.value());
      row[it.row()] += std::abs(it.value());
    }
  }
  return std::sqrt(col.maxCoeff() * row.maxCoeff());
}

void apply_phases(DenseMatrix& rho, const Eigen::VectorXd& energies, double scale, double dt) {
  const Eigen::Index d = rho.rows();
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index a = 0; a < d; ++a) {
      const double phase = -scale * (energies[a] - energies[b]) * dt;
      rho(a, b) *= Complex(std::cos(phase), std::sin(phase));
    }
  }
}

DensityState finish(DenseMatrix rho, bool check) {
  if (check) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const double tr = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (herm > 1e-10 || tr > 1e-8) {
      throw std::runtime_error("evolution left the state space: |rho - rho^dag| = " + std::to_string(herm) +
                               ", |tr rho - 1| = " + std::to_string(tr));
    }
  }
  DensityState s;
  s.rho = 0.5 * (rho + rho.adjoint());
  return s;
}

}  // namespace

void ModeGrid::validate() const {
  require(!momenta.empty(), "mode grid is empty");
  require(momenta.size() <= kMaxModes, "at most 6 modes");
  require(M >= 0.0 && std::isfinite(M), "M must be >= 0");
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  for (std::size_t i = 0; i < momenta.size(); ++i) {
    require(momenta[i].allFinite(), "mode momenta must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      require((momenta[i] - momenta[j]).norm() > 0.0, "mode momenta must be distinct");
    }
  }
}

double ModeGrid::omega(std::size_t m) const { return std::sqrt(momenta.at(m).squaredNorm() + M * M); }

FockModel::FockModel(ModeGrid grid, const units::CollapseParams& params, std::size_t n_max)
    : grid_(std::move(grid)), params_(params), n_max_(n_max) {
  grid_.validate();
  params_.validate();
  require(n_max_ >= 1, "n_max must be >= 1");
  dim_ = checked_dimension(grid_.size(), n_max_);
  const double a = params_.a;
  c0_ = params_.lambda_rate * params_.lambda_bar_n * params_.lambda_bar_n * std::pow(a * a / kPi, 1.5) *
        std::pow(2.0 * kPi / grid_.L, 3);

  const std::size_t K = grid_.size();
  energies_.resize(static_cast<Eigen::Index>(dim_));
  number_.resize(static_cast<Eigen::Index>(dim_));
  for (std::size_t idx = 0; idx < dim_; ++idx) {
    const auto occ = occupations(idx);
    double e = 0.0, n = 0.0;
    for (std::size_t m = 0; m < K; ++m) {
      e += grid_.omega(m) * static_cast<double>(occ[m]);
      n += static_cast<double>(occ[m]);
    }
    energies_[static_cast<Eigen::Index>(idx)] = e;
    number_[static_cast<Eigen::Index>(idx)] = n;
  }

  // Group ordered pairs by momentum transfer.
  double scale = 0.0;
  for (const auto& k : grid_.momenta) scale = std::max(scale, k.norm());
  const double same = 1e-12 * std::max(scale, 1e-300);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      const Vec3 q = grid_.momenta[i] - grid_.momenta[j];
      auto it = std::find_if(transfers_.begin(), transfers_.end(),
                             [&](const Transfer& t) { return (t.q - q).norm() <= same; });
      if (it == transfers_.end()) {
        Transfer t;
        t.q = q;
        t.weight = std::exp(-q.squaredNorm() * a * a);
        transfers_.push_back(t);
        it = transfers_.end() - 1;
      }
      it->pairs.emplace_back(i, j);
    }
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  gain_ = SparseMatrix(d, d);
  for (auto& t : transfers_) {
    t.op = SparseMatrix(d, d);
    for (const auto& [i, j] : t.pairs) t.op += std::sqrt(grid_.omega(i) * grid_.omega(j)) * hop(i, j);
    t.op.makeCompressed();
    gain_ += t.weight * SparseMatrix(t.op.adjoint() * t.op);
  }
  gain_.makeCompressed();
}

double FockModel::kernel(std::size_t m, std::size_t n) const {
  const double q2 = (grid_.momenta.at(m) - grid_.momenta.at(n)).squaredNorm();
  return std::sqrt(grid_.omega(m) * grid_.omega(n)) * std::exp(-q2 * params_.a * params_.a);
}

std::vector<std::size_t> FockModel::occupations(std::size_t index) const {
  require(index < dim_, "basis index out of range");
  std::vector<std::size_t> occ(grid_.size());
  for (auto& n : occ) {
    n = index % (n_max_ + 1);
    index /= n_max_ + 1;
  }
  return occ;
}

std::size_t FockModel::index_of(const std::vector<std::size_t>& occ) const {
  require(occ.size() == grid_.size(), "occupation vector has the wrong length");
  std::size_t idx = 0;
  for (std::size_t m = occ.size(); m-- > 0;) {
    require(occ[m] <= n_max_, "occupation exceeds n_max");
    idx = idx * (n_max_ + 1) + occ[m];
  }
  return idx;
}

SparseMatrix FockModel::hop(std::size_t i, std::size_t j) const {
  require(i < grid_.size() && j < grid_.size(), "mode index out of range");
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t idx = 0; idx < dim_; ++idx) {
    auto occ = occupations(idx);
    if (i == j) {
      if (occ[i] > 0) trip.emplace_back(idx, idx, static_cast<double>(occ[i]));
      continue;
    }
    if (occ[j] == 0 || occ[i] == n_max_) continue;
    const double amp = std::sqrt(static_cast<double>(occ[j]) * static_cast<double>(occ[i] + 1));
    --occ[j];
    ++occ[i];
    trip.emplace_back(index_of(occ), idx, amp);
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  SparseMatrix out(d, d);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

DenseMatrix FockModel::apply_hamiltonian(const DenseMatrix& rho) const {
  DenseMatrix out(rho.rows(), rho.cols());
  for (Eigen::Index b = 0; b < rho.cols(); ++b) {
    for (Eigen::Index a = 0; a < rho.rows(); ++a) {
      out(a, b) = Complex(0.0, -hamiltonian_scale * (energies_[a] - energies_[b])) * rho(a, b);
    }
  }
  return out;
}

DenseMatrix FockModel::apply_dissipator(const DenseMatrix& rho) const {
  DenseMatrix out = -0.5 * (gain_ * rho + rho * gain_);
  for (const auto& t : transfers_) {
    if (t.weight == 0.0 || t.op.nonZeros() == 0) continue;
    const DenseMatrix left = t.op * rho;
    out.noalias() += t.weight * (left * t.op.adjoint());
  }
  return c0_ * out;
}

DenseMatrix FockModel::apply(const DenseMatrix& rho) const { return apply_hamiltonian(rho) + apply_dissipator(rho); }

double FockModel::dissipator_norm_bound() const {
  double s = 0.0;
  for (const auto& t : transfers_) s += t.weight * std::pow(induced_norm_bound(t.op), 2);
  return 2.0 * c0_ * s;
}

double FockModel::hamiltonian_norm_bound() const {
  return hamiltonian_scale * (energies_.maxCoeff() - energies_.minCoeff());
}

Eigen::MatrixXcd build_generator(const FockModel& model) {
  const auto d = static_cast<Eigen::Index>(model.dimension());
  require(d <= 32, "dense superoperator limited to D <= 32");
  // vec(A X B) = (B^T kron A) vec(X), column-stacked.
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  auto kron = [d](const Eigen::MatrixXcd& B, const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd out(d * d, d * d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) out.block(r * d, c * d, d, d) = B(r, c) * A;
    return out;
  };
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  H.diagonal() = model.hamiltonian_scale * model.energies().cast<Complex>();
  Eigen::MatrixXcd L = Complex(0.0, -1.0) * (kron(I, H) - kron(H.transpose(), I));
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : model.transfers()) {
    const Eigen::MatrixXcd A = Eigen::MatrixXcd(t.op);
    L += model.c0() * t.weight * kron(A.conjugate(), A);
    G += t.weight * A.adjoint() * A;
  }
  L -= 0.5 * model.c0() * (kron(I, G) + kron(G.transpose(), I));
  return L;
}

DensityState vacuum(const FockModel& model) {
  return number_state(model, std::vector<std::size_t>(model.modes(), 0));
}

DensityState number_state(const FockModel& model, const std::vector<std::size_t>& occ) {
  const auto d = static_cast<Eigen::Index>(model.dimension());
  DensityState s;
  s.rho = DenseMatrix::Zero(d, d);
  const auto i = static_cast<Eigen::Index>(model.index_of(occ));
  s.rho(i, i) = 1.0;
  return s;
}

DensityState pure_state(const FockModel& model, const Eigen::VectorXcd& amplitudes) {
  require(amplitudes.size() == static_cast<Eigen::Index>(model.dimension()), "amplitude vector has the wrong length");
  const double n = amplitudes.norm();
  require(n > 0.0, "amplitude vector is zero");
  const Eigen::VectorXcd psi = amplitudes / n;
  return {psi * psi.adjoint()};
}

DensityState thermal_state(const FockModel& model, double beta_cm) {
  require(beta_cm > 0.0, "beta must be positive");
  const std::size_t K = model.modes();
  std::vector<std::vector<double>> p(K, std::vector<double>(model.n_max() + 1));
  for (std::size_t m = 0; m < K; ++m) {
    const double x = std::exp(-beta_cm * model.grid().omega(m));
    double z = 0.0, w = 1.0;
    for (auto& v : p[m]) {
      v = w;
      z += w;
      w *= x;
    }
    for (auto& v : p[m]) v /= z;
  }
  const auto d = static_cast<Eigen::Index>(model.dimension());
  DensityState s;
  s.rho = DenseMatrix::Zero(d, d);
  for (Eigen::Index idx = 0; idx < d; ++idx) {
    const auto occ = model.occupations(static_cast<std::size_t>(idx));
    double prob = 1.0;
    for (std::size_t m = 0; m < K; ++m) prob *= p[m][occ[m]];
    s.rho(idx, idx) = prob;
  }
  return s;
}

DensityState coherent_state(const FockModel& model, const std::vector<Complex>& alphas) {
  require(alphas.size() == model.modes(), "one amplitude per mode");
  const std::size_t K = model.modes();
  std::vector<std::vector<Complex>> c(K, std::vector<Complex>(model.n_max() + 1));
  for (std::size_t m = 0; m < K; ++m) {
    Complex v = std::exp(-0.5 * std::norm(alphas[m]));
    for (std::size_t n = 0; n <= model.n_max(); ++n) {
      c[m][n] = v;
      v *= alphas[m] / std::sqrt(static_cast<double>(n + 1));
    }
  }
  const auto d = static_cast<Eigen::Index>(model.dimension());
  Eigen::VectorXcd psi(d);
  for (Eigen::Index idx = 0; idx < d; ++idx) {
    const auto occ = model.occupations(static_cast<std::size_t>(idx));
    Complex amp = 1.0;
    for (std::size_t m = 0; m < K; ++m) amp *= c[m][occ[m]];
    psi[idx] = amp;
  }
  return pure_state(model, psi);
}

StateCheck check_state(const DensityState& s, bool with_spectrum) {
  StateCheck c;
  c.hermiticity = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(s.rho.trace() - Complex(1.0, 0.0));
  if (with_spectrum) {
    const DenseMatrix h = 0.5 * (s.rho + s.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
  }
  return c;
}

Observables observables(const DensityState& s, const FockModel& model,
                        const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs) {
  Observables o;
  o.trace = s.rho.trace();
  const std::size_t K = model.modes();
  o.occupancy.assign(K, 0.0);
  std::vector<double> top(K, 0.0);
  for (std::size_t idx = 0; idx < model.dimension(); ++idx) {
    const double p = s.rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real();
    const auto occ = model.occupations(idx);
    for (std::size_t m = 0; m < K; ++m) {
      o.occupancy[m] += p * static_cast<double>(occ[m]);
      if (occ[m] == model.n_max()) top[m] += p;
    }
  }
  for (std::size_t m = 0; m < K; ++m) {
    o.number += o.occupancy[m];
    o.energy += model.grid().omega(m) * o.occupancy[m];
  }
  o.top_layer = *std::max_element(top.begin(), top.end());
  for (const auto& [a, b] : coherence_pairs) {
    require(a < model.dimension() && b < model.dimension(), "coherence index out of range");
    o.coherences.push_back(std::abs(s.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
  }
  return o;
}

namespace {

std::size_t pick_steps(const FockModel& model, double t, const EvolveOptions& options) {
  if (options.steps > 0) return options.steps;
  require(options.max_step_norm > 0.0, "max_step_norm must be positive");
  const double n = std::ceil(model.dissipator_norm_bound() * t / options.max_step_norm);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

DenseMatrix strang(DenseMatrix rho, const FockModel& model, double t, std::size_t steps) {
  const double dt = t / static_cast<double>(steps);
  const bool unitary = model.hamiltonian_scale != 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    if (unitary) apply_phases(rho, model.energies(), model.hamiltonian_scale, 0.5 * dt);
    const DenseMatrix k1 = model.apply_dissipator(rho);
    const DenseMatrix k2 = model.apply_dissipator(rho + 0.5 * dt * k1);
    const DenseMatrix k3 = model.apply_dissipator(rho + 0.5 * dt * k2);
    const DenseMatrix k4 = model.apply_dissipator(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (unitary) apply_phases(rho, model.energies(), model.hamiltonian_scale, 0.5 * dt);
  }
  return rho;
}

}  // namespace

DensityState evolve(const DensityState& state, const FockModel& model, double t, const EvolveOptions& options) {
  require(t >= 0.0 && std::isfinite(t), "t must be >= 0");
  const auto d = static_cast<Eigen::Index>(model.dimension());
  require(state.rho.rows() == d && state.rho.cols() == d, "state dimension does not match the model");
  if (t == 0.0) return state;
  return finish(strang(state.rho, model, t, pick_steps(model, t, options)), options.check);
}

DensityState evolve_exact(const DensityState& state, const FockModel& model, double t) {
  const auto d = static_cast<Eigen::Index>(model.dimension());
  require(state.rho.rows() == d, "state dimension does not match the model");
  const Eigen::MatrixXcd prop = (build_generator(model) * t).exp();
  const Eigen::VectorXcd v = prop * Eigen::Map<const Eigen::VectorXcd>(state.rho.data(), d * d);
  return finish(Eigen::Map<const DenseMatrix>(v.data(), d, d), true);
}

std::vector<TimeSample> evolve_series(const DensityState& state, const FockModel& model, double t,
                                      std::size_t samples,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs,
                                      const EvolveOptions& options) {
  require(samples >= 1, "need at least one sample interval");
  const double dt = t / static_cast<double>(samples);
  std::vector<TimeSample> out;
  out.push_back({0.0, observables(state, model, coherence_pairs)});
  DensityState s = state;
  for (std::size_t i = 1; i <= samples; ++i) {
    s = evolve(s, model, dt, options);
    out.push_back({dt * static_cast<double>(i), observables(s, model, coherence_pairs)});
  }
  return out;
}

std::vector<double> first_order_number_rates(const FockModel& model, const std::vector<double>& occupancy) {
  require(occupancy.size() == model.modes(), "one occupancy per mode");
  const std::size_t K = model.modes();
  const double a = model.params().a;
  std::vector<double> rate(K, 0.0);
  for (std::size_t s = 0; s < K; ++s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      if (j == s) continue;
      const double q2 = (model.grid().momenta[s] - model.grid().momenta[j]).squaredNorm();
      acc += std::exp(-q2 * a * a) * model.grid().omega(j) * (occupancy[j] - occupancy[s]);
    }
    rate[s] = model.c0() * model.grid().omega(s) * acc;
  }
  return rate;
}

double first_order_energy_rate(const FockModel& model, const std::vector<double>& occupancy) {
  const auto r = first_order_number_rates(model, occupancy);
  double e = 0.0;
  for (std::size_t s = 0; s < r.size(); ++s) e += model.grid().omega(s) * r[s];
  return e;
}

}  // namespace collapse::fock
