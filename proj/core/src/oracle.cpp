#include "polsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "detail/msg.hpp"
#include "polsim/errors.hpp"

namespace polsim {

namespace {

constexpr int level_a = 0;  // excited
constexpr int level_b = 1;  // lower ground
constexpr int level_c = 2;  // storage ground

struct Basis {
  int n_atoms;
  int n_ph;  // n_max + 1
  std::vector<std::size_t> place;  // place[j] = 3^(n_atoms-1-j) * n_ph

  explicit Basis(const SystemSpec& spec) : n_atoms(spec.n_atoms), n_ph(spec.n_max + 1) {
    place.resize(n_atoms);
    std::size_t p = n_ph;
    for (int j = n_atoms - 1; j >= 0; --j) {
      place[j] = p;
      p *= 3;
    }
  }

  int photons(std::size_t i) const { return int(i % n_ph); }
  int level(std::size_t i, int j) const { return int((i / place[j]) % 3); }
  std::size_t vacuum() const {
    std::size_t i = 0;
    for (int j = 0; j < n_atoms; ++j) i += std::size_t(level_b) * place[j];
    return i;
  }
};

// P+ = cos(theta) a+ - sin(theta)/sqrt(N) sum_j |c><b|_j
std::vector<cplx> apply_creation(const SystemSpec& spec, double theta,
                                 const std::vector<cplx>& in) {
  const Basis b(spec);
  const std::size_t dim = spec.dimension();
  const double ct = std::cos(theta);
  const double sn = std::sin(theta) / std::sqrt(double(spec.n_atoms));
  std::vector<cplx> out(dim, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx amp = in[i];
    if (amp == cplx{0.0, 0.0}) continue;
    const int p = b.photons(i);
    if (p + 1 < b.n_ph) out[i + 1] += ct * std::sqrt(double(p + 1)) * amp;
    for (int j = 0; j < spec.n_atoms; ++j)
      if (b.level(i, j) == level_b) out[i + b.place[j]] -= sn * amp;
  }
  return out;
}

std::vector<cplx> apply_annihilation(const SystemSpec& spec, double theta,
                                     const std::vector<cplx>& in) {
  const Basis b(spec);
  const std::size_t dim = spec.dimension();
  const double ct = std::cos(theta);
  const double sn = std::sin(theta) / std::sqrt(double(spec.n_atoms));
  std::vector<cplx> out(dim, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < dim; ++i) {
    const cplx amp = in[i];
    if (amp == cplx{0.0, 0.0}) continue;
    const int p = b.photons(i);
    if (p >= 1) out[i - 1] += ct * std::sqrt(double(p)) * amp;
    for (int j = 0; j < spec.n_atoms; ++j)
      if (b.level(i, j) == level_c) out[i - b.place[j]] -= sn * amp;
  }
  return out;
}

double norm_of(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// exp(-i dt V(w)) v by a Lanczos Krylov projection with full
// reorthogonalization; V is real symmetric so the recurrence coefficients
// are real and the projected matrix is tridiagonal.
void krylov_exp(const InteractionOperator& op, double w, double dt,
                std::vector<cplx>& v) {
  constexpr int m_max = 48;
  const std::size_t dim = v.size();
  const double beta0 = norm_of(v);
  if (beta0 < 1e-300) return;
  const double tol = 1e-13;

  std::vector<std::vector<cplx>> basis;
  basis.reserve(m_max + 1);
  {
    std::vector<cplx> v0(v);
    for (auto& a : v0) a /= beta0;
    basis.push_back(std::move(v0));
  }
  std::vector<double> alpha, beta;  // diagonal, subdiagonal
  std::vector<cplx> work(dim);

  Eigen::VectorXcd y;
  int m = 0;
  for (;;) {
    op.apply(basis[m].data(), work.data(), w);
    cplx a = dot(basis[m], work);
    for (std::size_t i = 0; i < dim; ++i) work[i] -= a * basis[m][i];
    if (m > 0)
      for (std::size_t i = 0; i < dim; ++i) work[i] -= beta[m - 1] * basis[m - 1][i];
    // full reorthogonalization keeps the projected problem honest
    for (int k = 0; k <= m; ++k) {
      const cplx c = dot(basis[k], work);
      for (std::size_t i = 0; i < dim; ++i) work[i] -= c * basis[k][i];
      if (k == m) a += c;
    }
    alpha.push_back(a.real());
    const double b = norm_of(work);
    ++m;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      t(k, k) = alpha[k];
      if (k > 0) t(k, k - 1) = t(k - 1, k) = beta[k - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(m);
    for (int k = 0; k < m; ++k)
      phases(k) = std::exp(cplx{0.0, -dt * es.eigenvalues()(k)});
    y = es.eigenvectors().cast<cplx>() *
        (phases.array() * es.eigenvectors().row(0).transpose().cast<cplx>().array())
            .matrix();

    const double err = b * std::abs(y(m - 1)) * std::abs(dt);
    if (err < tol || b < 1e-14 || m == m_max) {
      if (m == m_max && err >= tol)
        throw numerical_error(detail::msgf(
            "krylov_exp: no convergence at m=%d (error %.2e); step too large", m, err));
      break;
    }
    beta.push_back(b);
    for (auto& x : work) x /= b;
    basis.push_back(std::move(work));
    work.assign(dim, cplx{0.0, 0.0});
  }

  std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
  for (int k = 0; k < m; ++k) {
    const cplx c = beta0 * cplx(y(k));
    for (std::size_t i = 0; i < dim; ++i) v[i] += c * basis[k][i];
  }
}

}  // namespace

void SystemSpec::validate() const {
  if (n_atoms < 1 || n_atoms > 8)
    throw domain_overflow(detail::msgf("system: atom count %d outside 1..8", n_atoms));
  if (n_max < 0 || n_max > 4)
    throw domain_overflow(detail::msgf("system: photon truncation %d outside 0..4", n_max));
  if (!(g > 0.0) || !std::isfinite(g))
    throw config_error(detail::msgf("system: coupling must be positive, got %g", g));
  schedule.validate();
}

std::size_t SystemSpec::dimension() const {
  std::size_t d = n_max + 1;
  for (int j = 0; j < n_atoms; ++j) d *= 3;
  return d;
}

double SystemSpec::g_collective() const { return g * std::sqrt(double(n_atoms)); }

MediumParams SystemSpec::as_medium() const {
  MediumParams m;
  m.g_root_n = g_collective();
  m.gamma_ab = 0.0;
  m.gamma_bc = 0.0;
  m.c = 1.0;
  return m;
}

double QuantumRegister::norm() const { return norm_of(amp); }

void QuantumRegister::normalize() {
  const double n = norm();
  if (n < 1e-300) throw numerical_error("cannot normalize a zero register");
  for (auto& a : amp) a /= n;
}

InteractionOperator::InteractionOperator(const SystemSpec& spec, double omega) {
  spec.validate();
  if (!(omega >= 0.0))
    throw config_error(detail::msgf("interaction: omega must be non-negative, got %g", omega));
  omega_ = omega;
  dim_ = spec.dimension();
  const Basis b(spec);
  const double g = spec.g;

  row_ptr_.reserve(dim_ + 1);
  row_ptr_.push_back(0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const int p = b.photons(i);
    for (int j = 0; j < spec.n_atoms; ++j) {
      switch (b.level(i, j)) {
        case level_a:
          if (p + 1 < b.n_ph) {  // a -> b emitting one photon
            col_.push_back(std::uint32_t(i + b.place[j] + 1));
            val_g_.push_back(-g * std::sqrt(double(p + 1)));
            val_w_.push_back(0.0);
          }
          col_.push_back(std::uint32_t(i + 2 * b.place[j]));  // a -> c under the control
          val_g_.push_back(0.0);
          val_w_.push_back(-1.0);
          break;
        case level_b:
          if (p >= 1) {  // b -> a absorbing one photon
            col_.push_back(std::uint32_t(i - b.place[j] - 1));
            val_g_.push_back(-g * std::sqrt(double(p)));
            val_w_.push_back(0.0);
          }
          break;
        case level_c:  // c -> a under the control
          col_.push_back(std::uint32_t(i - 2 * b.place[j]));
          val_g_.push_back(0.0);
          val_w_.push_back(-1.0);
          break;
      }
    }
    row_ptr_.push_back(col_.size());
  }
}

void InteractionOperator::apply(const cplx* in, cplx* out, double omega) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += (val_g_[k] + omega * val_w_[k]) * in[col_[k]];
    out[i] = acc;
  }
}

Eigen::MatrixXcd InteractionOperator::dense() const {
  if (dim_ > 4096)
    throw domain_overflow(detail::msgf(
        "interaction: dense export refused at dimension %zu (use apply)", dim_));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(dim_), Eigen::Index(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      m(Eigen::Index(i), Eigen::Index(col_[k])) += val_g_[k] + omega_ * val_w_[k];
  return m;
}

double InteractionOperator::gershgorin_bound(double omega) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      row += std::abs(val_g_[k]) + omega * std::abs(val_w_[k]);
    worst = std::max(worst, row);
  }
  return worst;
}

InteractionOperator build_interaction(const SystemSpec& spec, double omega) {
  return InteractionOperator(spec, omega);
}

double control_for_angle(const SystemSpec& spec, double theta) {
  if (!(theta >= 0.0 && theta <= 1.5707963267948968))
    throw config_error(detail::msgf("control_for_angle: theta %g outside [0, pi/2]", theta));
  const double s = std::sin(theta);
  if (s < 1e-15) return 1e30 * spec.g_collective();
  return spec.g_collective() * std::max(std::cos(theta), 0.0) / s;
}

QuantumRegister dark_state(const SystemSpec& spec, double theta, int n) {
  spec.validate();
  if (n < 0 || n > spec.n_max || n > spec.n_atoms)
    throw config_error(detail::msgf(
        "dark_state: %d excitations exceed the truncation (n_max=%d, atoms=%d)",
        n, spec.n_max, spec.n_atoms));
  const Basis b(spec);
  QuantumRegister reg;
  reg.amp.assign(spec.dimension(), cplx{0.0, 0.0});
  reg.amp[b.vacuum()] = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    reg.amp = apply_creation(spec, theta, reg.amp);
    fact *= double(k);
  }
  const double scale = 1.0 / std::sqrt(fact);
  for (auto& a : reg.amp) a *= scale;
  reg.normalize();  // the bare power is slightly subnormal for n >= 2
  return reg;
}

double dark_residual(const SystemSpec& spec, double theta, int n, double omega) {
  const QuantumRegister d = dark_state(spec, theta, n);
  const InteractionOperator v(spec, omega);
  std::vector<cplx> out(d.size());
  v.apply(d.amp.data(), out.data());
  return norm_of(out);
}

double commutator_expectation(const SystemSpec& spec, double theta) {
  spec.validate();
  const Basis b(spec);
  QuantumRegister ground;
  ground.amp.assign(spec.dimension(), cplx{0.0, 0.0});
  ground.amp[b.vacuum()] = 1.0;
  return commutator_expectation(spec, theta, ground);
}

double commutator_expectation(const SystemSpec& spec, double theta,
                              const QuantumRegister& psi) {
  spec.validate();
  if (psi.size() != spec.dimension())
    throw config_error("commutator_expectation: register size mismatch");
  const auto up = apply_creation(spec, theta, psi.amp);
  const auto down = apply_annihilation(spec, theta, psi.amp);
  double s = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) s += std::norm(up[i]) - std::norm(down[i]);
  return s;
}

TransferResult evolve_transfer(const SystemSpec& spec, const QuantumRegister& psi0,
                               double t0, double t1, int trace_points) {
  spec.validate();
  if (psi0.size() != spec.dimension())
    throw config_error("evolve_transfer: register size mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw config_error("evolve_transfer: initial register is not normalized");
  if (!(t1 > t0)) throw config_error("evolve_transfer: need t1 > t0");
  if (trace_points < 1) throw config_error("evolve_transfer: need trace_points >= 1");

  const MediumParams med = spec.as_medium();
  const InteractionOperator op(spec, 0.0);

  // decompose the input over the zero-eigenvalue manifold at t0; those
  // coefficients, carried along theta(t), define the mapped target
  const int n_dark = std::min(spec.n_atoms, spec.n_max);
  const double theta0 = mixing_angle(omega_at(spec.schedule, med, t0), med);
  std::vector<cplx> coef(n_dark + 1);
  std::vector<QuantumRegister> dark0(n_dark + 1);
  double coef_norm2 = 0.0;
  for (int n = 0; n <= n_dark; ++n) {
    dark0[n] = dark_state(spec, theta0, n);
    coef[n] = dot(dark0[n].amp, psi0.amp);
    coef_norm2 += std::norm(coef[n]);
  }

  auto fidelity_at = [&](double t, const std::vector<cplx>& psi) {
    if (coef_norm2 < 1e-300) return 0.0;
    const double th = mixing_angle(omega_at(spec.schedule, med, t), med);
    cplx overlap{0.0, 0.0};
    for (int n = 0; n <= n_dark; ++n) {
      const QuantumRegister d = dark_state(spec, th, n);
      overlap += std::conj(coef[n]) * dot(d.amp, psi);
    }
    return std::norm(overlap) / coef_norm2;
  };

  // excitation diagonal: photons plus atoms outside |b>
  const Basis b(spec);
  std::vector<double> exc(spec.dimension());
  for (std::size_t i = 0; i < exc.size(); ++i) {
    double e = b.photons(i);
    for (int j = 0; j < spec.n_atoms; ++j)
      if (b.level(i, j) != level_b) e += 1.0;
    exc[i] = e;
  }
  auto excitation_of = [&](const std::vector<cplx>& psi) {
    double e = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) e += exc[i] * std::norm(psi[i]);
    return e;
  };

  // substep size from the largest control over the window
  double w_max = 0.0;
  for (int k = 0; k <= 256; ++k)
    w_max = std::max(w_max, omega_at(spec.schedule, med, t0 + (t1 - t0) * k / 256.0));
  const double h_target = 0.2 / std::max(op.gershgorin_bound(w_max), 1e-12);

  constexpr double rt3 = 1.7320508075688772;
  const double c1 = 0.5 - rt3 / 6.0, c2 = 0.5 + rt3 / 6.0;
  const double a1 = (3.0 - 2.0 * rt3) / 12.0, a2 = (3.0 + 2.0 * rt3) / 12.0;

  std::vector<cplx> psi = psi0.amp;
  TransferResult res;
  res.trace.push_back({t0, fidelity_at(t0, psi)});
  const double e0 = excitation_of(psi);

  const double span = (t1 - t0) / trace_points;
  std::size_t total = 0;
  for (int seg = 0; seg < trace_points; ++seg) {
    const double ta0 = t0 + seg * span;
    const std::size_t nsub = std::size_t(std::max(1.0, std::ceil(span / h_target)));
    total += nsub;
    if (total > 2'000'000)
      throw numerical_error("evolve_transfer: substep budget exhausted (control too strong?)");
    const double h = span / double(nsub);
    for (std::size_t k = 0; k < nsub; ++k) {
      const double ta = ta0 + k * h;
      const double w1 = omega_at(spec.schedule, med, ta + c1 * h);
      const double w2 = omega_at(spec.schedule, med, ta + c2 * h);
      krylov_exp(op, 2.0 * (a2 * w1 + a1 * w2), 0.5 * h, psi);
      krylov_exp(op, 2.0 * (a1 * w1 + a2 * w2), 0.5 * h, psi);
    }
    const double t = t0 + (seg + 1) * span;
    res.trace.push_back({t, fidelity_at(t, psi)});
    res.excitation_drift = std::max(res.excitation_drift, std::abs(excitation_of(psi) - e0));
  }

  res.norm_drift = std::abs(norm_of(psi) - 1.0);
  if (res.norm_drift > 1e-8)
    throw numerical_error(detail::msgf(
        "evolve_transfer: norm drift %.2e exceeds 1e-8, integration failed", res.norm_drift));
  res.final_state.amp = std::move(psi);
  res.steps = total;
  return res;
}

}  // namespace polsim
