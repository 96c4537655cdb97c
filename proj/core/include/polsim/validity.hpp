#pragma once

// Quantitative checks on the slowly-varying-control approximation: the
// leading correction to the spin coherence, the distance and figure-of-merit
// bounds set by excited-state decay, the storage-time limit from ground-state
// decoherence, and the field/matter intensity-ratio identity.

#include <vector>

#include "polsim/medium.hpp"
#include "polsim/polariton.hpp"

namespace polsim {

// Leading correction to the spin coherence S beyond S = -tan(theta) E,
//
//   C(z) = (1/W) (d/dt + gamma_ab) (1/W) d/dt [ g_root_n E / W ],   W = Omega(t)
//
// evaluated at the middle snapshot of three equally spaced ones (centered
// second-order differences in time).  For a retarded schedule the control is
// evaluated at t - z/c per grid point.
std::vector<cplx> first_correction(const FieldState& prev, const FieldState& mid,
                                   const FieldState& next,
                                   const ControlSchedule& schedule,
                                   const MediumParams& medium);

// Propagation distance over which decay-induced attenuation stays small for
// a pulse of length l_p: (g_root_n^2 / gamma_ab) l_p^2 / c.
// Infinity when gamma_ab = 0.
double z_max(const MediumParams& medium, double l_p);

enum class AdiabaticityBand { poor, marginal, good };

struct AdiabaticityFigure {
  double value = 0.0;
  AdiabaticityBand band = AdiabaticityBand::poor;
};

// g_root_n^2 l_p / (c gamma_ab), the loss figure of merit for trapping a
// pulse of length l_p.  Band thresholds (poor < 10 <= marginal <= 100 < good)
// are reporting conventions of this code, not derived quantities.
AdiabaticityFigure adiabaticity_figure(const MediumParams& medium, double l_p);

// Hard storage-time scale 1 / (gamma_bc n_e) for n_e stored excitations.
// Infinity when gamma_bc = 0.  Reports quote 0.1x this scale as usable.
double storage_bound(const MediumParams& medium, int n_e);

// Excitation-count proxy for a semiclassical state: integral of |S|^2 over z,
// rounded up.
int excitation_count(const FieldState& state);

// max over the pulse support of | (g_root_n/Omega)^2 |E|^2 - |S|^2 |,
// normalized by max |S|^2.  Zero for an exactly adiabatic state.
double intensity_ratio_residual(const FieldState& state, double omega,
                                const MediumParams& medium);

}  // namespace polsim
