#pragma once

// Exact verification on a small quantized system: a handful of three-level
// atoms coupled to one resonant field mode.  Builds the interaction operator
// on the truncated product space, constructs the zero-eigenvalue collective
// states, evaluates the quasi-bosonic commutator, and runs the adiabatic
// light <-> matter transfer by direct Schrodinger evolution.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "polsim/medium.hpp"
#include "polsim/polariton.hpp"

namespace polsim {

// Basis convention: atoms-major lexicographic.  Atom levels are digits
// 0 = excited (a), 1 = lower ground (b), 2 = storage ground (c); atom 0 is
// the most significant digit, the photon number of the single mode is the
// least significant place:
//   index = (sum_j level_j 3^(n_atoms-1-j)) * (n_max+1) + photons.
struct SystemSpec {
  int n_atoms = 2;          // three-level atoms, 1..8
  int n_max = 1;            // photon truncation of the mode, 0..4
  double g = 1.0;           // single-atom coupling
  ControlSchedule schedule; // control field for evolve_transfer

  void validate() const;
  std::size_t dimension() const;  // 3^n_atoms * (n_max + 1)
  double g_collective() const;    // g * sqrt(n_atoms)
  MediumParams as_medium() const; // adapter for omega_at / mixing_angle
};

struct QuantumRegister {
  std::vector<cplx> amp;

  std::size_t size() const { return amp.size(); }
  double norm() const;
  void normalize();
};

// V = -( g a sum_j |a><b|_j + Omega sum_j |a><c|_j + h.c. ), hbar = 1.
// Real symmetric; stored sparse (at most 2 n_atoms couplings per basis
// state), with a dense export for inspection at small dimensions.
class InteractionOperator {
 public:
  InteractionOperator(const SystemSpec& spec, double omega);

  std::size_t dimension() const { return dim_; }
  double omega() const { return omega_; }

  // out = V in (with the stored Omega, or an explicit one)
  void apply(const cplx* in, cplx* out) const { apply(in, out, omega_); }
  void apply(const cplx* in, cplx* out, double omega) const;

  Eigen::MatrixXcd dense() const;  // throws domain_overflow above dim 4096

  // max_i sum_j |V_ij|, an easy upper bound on the spectral radius
  double gershgorin_bound(double omega) const;

 private:
  std::size_t dim_ = 0;
  double omega_ = 0.0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_g_;  // coefficient of g-part (photon exchange)
  std::vector<double> val_w_;  // coefficient of the control part
};

InteractionOperator build_interaction(const SystemSpec& spec, double omega);

// Control amplitude whose mixing angle equals theta: g_collective / tan(theta).
// theta = 0 maps to an effectively infinite control (1e30 * g_collective).
double control_for_angle(const SystemSpec& spec, double theta);

// n collective excitations on top of |0, b..b>: (1/sqrt(n!)) (P+)^n |0,b..b>
// with P+ = cos(theta) a+ - sin(theta) (1/sqrt(N)) sum_j |c><b|_j, then
// normalized (the bare power falls slightly short of unit norm for n >= 2 at
// finite atom number).  Carries no excited-state amplitude by construction.
QuantumRegister dark_state(const SystemSpec& spec, double theta, int n);

// || V(omega) dark_state(theta, n) ||; zero (to rounding) when theta matches
// mixing_angle(omega), legitimately nonzero otherwise.
double dark_residual(const SystemSpec& spec, double theta, int n, double omega);

// <psi| [P, P+] |psi> evaluated as ||P+ psi||^2 - ||P psi||^2.
// Defaults to psi = |0, b..b>.  Faithful only while psi has no weight on the
// top photon level (the truncated a+ annihilates it); needs n_max >= 1.
double commutator_expectation(const SystemSpec& spec, double theta);
double commutator_expectation(const SystemSpec& spec, double theta,
                              const QuantumRegister& psi);

struct TransferSample {
  double t = 0.0;
  double fidelity = 0.0;  // overlap^2 with the tracked collective target
};

struct TransferResult {
  QuantumRegister final_state;
  std::vector<TransferSample> trace;
  double norm_drift = 0.0;        // | ||psi|| - 1 | at the end
  double excitation_drift = 0.0;  // max deviation of <photons + flipped atoms>
  std::size_t steps = 0;          // substeps actually taken
};

// Integrates i dpsi/dt = V(Omega(t)) psi from t0 to t1 with a fourth-order
// commutator-free exponential scheme (two Krylov exponentials per substep).
// The trace samples the overlap with the instantaneous collective target:
// psi0 is decomposed over the zero-eigenvalue states at t0 and the same
// coefficients are carried along theta(t).  trace_points also sets the
// minimum substep count; accuracy drives the actual number higher as needed.
TransferResult evolve_transfer(const SystemSpec& spec, const QuantumRegister& psi0,
                               double t0, double t1, int trace_points);

}  // namespace polsim
