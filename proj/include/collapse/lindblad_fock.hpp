#pragma once

// Direct integration of the collapse master equation for a handful of
// box-normalized field modes, truncated in Fock space. Used as an oracle for
// trace and number conservation and for first-order rates.

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "collapse/units.hpp"

namespace collapse::fock {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr std::size_t kMaxModes = 6;
inline constexpr std::size_t kMaxDimension = 4096;

struct ModeGrid {
  std::vector<Vec3> momenta;  // cm^-1
  double M = 0.0;             // cm^-1
  double L = 1.0;             // box side, cm

  /// Throws std::domain_error for 0 or more than 6 modes, repeated momenta,
  /// M < 0 or L <= 0.
  void validate() const;
  [[nodiscard]] std::size_t size() const { return momenta.size(); }
  [[nodiscard]] double omega(std::size_t m) const;
};

/// Momentum transfer shared by a set of mode pairs, with its jump operator
/// sum_{(i,j)} sqrt(w_i w_j) a_i^dag a_j and kernel weight e^{-q^2 a^2}.
struct Transfer {
  Vec3 q;
  double weight = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i, j): k_i - k_j = q
  SparseMatrix op;
};

class FockModel {
 public:
  /// Throws std::domain_error if the grid is invalid or (n_max + 1)^K > 4096.
  FockModel(ModeGrid grid, const units::CollapseParams& params, std::size_t n_max = 3);

  [[nodiscard]] const ModeGrid& grid() const { return grid_; }
  [[nodiscard]] const units::CollapseParams& params() const { return params_; }
  [[nodiscard]] std::size_t n_max() const { return n_max_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  [[nodiscard]] std::size_t modes() const { return grid_.size(); }
  /// (lambda / M_N^2) (a^2/pi)^{3/2} (2 pi / L)^3, in s^-1 cm^2.
  [[nodiscard]] double c0() const { return c0_; }
  /// sqrt(w_m w_n) e^{-(k_m - k_n)^2 a^2}.
  [[nodiscard]] double kernel(std::size_t m, std::size_t n) const;
  [[nodiscard]] const std::vector<Transfer>& transfers() const { return transfers_; }

  /// Angular frequency in s^-1 per cm^-1 of mode energy used by the
  /// Hamiltonian part. Defaults to c; a smaller value rescales the free
  /// evolution so that it can be resolved alongside the dissipator.
  double hamiltonian_scale = units::kSpeedOfLight;

  /// Occupations of basis state `index`; mode 0 is the fastest-varying digit.
  [[nodiscard]] std::vector<std::size_t> occupations(std::size_t index) const;
  /// Throws std::domain_error if any occupation exceeds n_max.
  [[nodiscard]] std::size_t index_of(const std::vector<std::size_t>& occupations) const;
  /// Diagonal of sum_m w_m n_m in cm^-1.
  [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
  [[nodiscard]] const Eigen::VectorXd& total_number() const { return number_; }
  /// Truncated a_i^dag a_j.
  [[nodiscard]] SparseMatrix hop(std::size_t i, std::size_t j) const;

  /// -i [H, rho] with H in s^-1.
  [[nodiscard]] DenseMatrix apply_hamiltonian(const DenseMatrix& rho) const;
  /// c0 sum_q w_q (A_q rho A_q^dag - {A_q^dag A_q, rho}/2), s^-1.
  [[nodiscard]] DenseMatrix apply_dissipator(const DenseMatrix& rho) const;
  /// Full generator.
  [[nodiscard]] DenseMatrix apply(const DenseMatrix& rho) const;

  /// Upper bound on the induced 1-norm of the dissipator and on the
  /// spread of Hamiltonian frequencies, both in s^-1.
  [[nodiscard]] double dissipator_norm_bound() const;
  [[nodiscard]] double hamiltonian_norm_bound() const;

 private:
  ModeGrid grid_;
  units::CollapseParams params_;
  std::size_t n_max_;
  std::size_t dim_;
  double c0_;
  std::vector<Transfer> transfers_;
  SparseMatrix gain_;  // sum_q w_q A_q^dag A_q
  Eigen::VectorXd energies_;
  Eigen::VectorXd number_;
};

/// Builds the dense D^2 x D^2 superoperator (column-stacked vec). Throws
/// std::domain_error for D > 32.
Eigen::MatrixXcd build_generator(const FockModel& model);

struct DensityState {
  DenseMatrix rho;
  [[nodiscard]] Complex trace() const { return rho.trace(); }
};

DensityState vacuum(const FockModel& model);
DensityState number_state(const FockModel& model, const std::vector<std::size_t>& occupations);
/// |psi><psi| for the normalized amplitude vector.
DensityState pure_state(const FockModel& model, const Eigen::VectorXcd& amplitudes);
/// Product of per-mode Boltzmann distributions in the truncated space,
/// renormalized.
DensityState thermal_state(const FockModel& model, double beta_cm);
/// Product of truncated coherent states with the given complex amplitudes.
DensityState coherent_state(const FockModel& model, const std::vector<Complex>& alphas);

struct StateCheck {
  double hermiticity = 0.0;      // max |rho - rho^dag|
  double trace_error = 0.0;      // |tr rho - 1|
  double min_eigenvalue = 0.0;
  [[nodiscard]] bool ok(double tol = 1e-8) const {
    return hermiticity <= 1e-12 && trace_error <= tol && min_eigenvalue >= -tol;
  }
};
StateCheck check_state(const DensityState& s, bool with_spectrum = true);

struct Observables {
  Complex trace;
  double number = 0.0;  // <N>
  double energy = 0.0;  // <sum w_m n_m>, cm^-1
  std::vector<double> occupancy;
  std::vector<double> coherences;  // |rho_ab| for the requested pairs
  double top_layer = 0.0;          // max_m P(n_m = n_max)
  [[nodiscard]] bool truncation_ok() const { return top_layer < 1e-6; }
};
Observables observables(const DensityState& s, const FockModel& model,
                        const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs = {});

struct EvolveOptions {
  /// 0 picks the smallest count with ||D|| dt <= max_step_norm.
  std::size_t steps = 0;
  double max_step_norm = 0.1;
  /// Verify Hermiticity and trace at the end; throws on violation.
  bool check = true;
};

/// Strang splitting: exact phases of the diagonal Hamiltonian around a
/// fourth-order Runge-Kutta step of the dissipator. Time in seconds.
DensityState evolve(const DensityState& state, const FockModel& model, double t,
                    const EvolveOptions& options = {});
/// exp(L t) on the vectorized state; D <= 32 only.
DensityState evolve_exact(const DensityState& state, const FockModel& model, double t);

struct TimeSample {
  double t = 0.0;
  Observables obs;
};
/// Observables at `samples + 1` equally spaced times on [0, t].
std::vector<TimeSample> evolve_series(const DensityState& state, const FockModel& model, double t,
                                      std::size_t samples,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs = {},
                                      const EvolveOptions& options = {});

/// Initial rate of <n_s> for a state without inter-mode coherence:
/// c0 w_s sum_j e^{-(k_s-k_j)^2 a^2} w_j (n_j - n_s). Uses the supplied
/// occupancies and ignores truncation.
std::vector<double> first_order_number_rates(const FockModel& model, const std::vector<double>& occupancy);
/// sum_s w_s d<n_s>/dt with the rates above, cm^-1 s^-1.
double first_order_energy_rate(const FockModel& model, const std::vector<double>& occupancy);

}  // namespace collapse::fock
