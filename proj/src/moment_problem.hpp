// Copyright 2026 The beamctl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Finite moment problem whose minimum-norm solution is the control f''.

#include <vector>

#include "control_signal.hpp"
#include "modal_dynamics.hpp"
#include "spectrum.hpp"

namespace beamctl {

/// gamma1/gamma2: modal targets -v0(T), -v0_t(T). zeta1/zeta2: required
/// moments of f'' against the mode's two kernels (e^{l+ tau}, e^{l- tau};
/// or e^{l tau}, tau e^{l tau} at critical damping). Index n-1 is mode n;
/// inactive modes (zero trace) hold zeros.
struct MomentRHS {
  std::vector<Complex> gamma1;
  std::vector<Complex> gamma2;
  std::vector<Complex> zeta1;
  std::vector<Complex> zeta2;
};

MomentRHS moment_rhs(const FreeEvolution& free, const Real& horizon,
                     const BoundaryTraceExpansion& traces);

/// lambda_m^+ and lambda_n^- coincide; the plus-branch kernel was dropped.
struct CollisionRecord {
  int plus_mode = 0;
  int minus_mode = 0;
  Complex lambda;
  double defect = 0;  // |zeta_m^+ - zeta_n^-|, filled by assemble()
};

struct KernelSet {
  std::vector<KernelDescriptor> kernels;
  std::vector<CollisionRecord> collisions;
};

/// [1, s, then per active mode its two kernels], collided kernels removed.
KernelSet constraint_kernels(const BeamConfig& config);

struct MomentSystem {
  Boundary boundary = Boundary::Dirichlet;
  Rational rho{1};
  Real horizon{1};
  int n_modes = 0;
  std::vector<KernelDescriptor> kernels;
  std::vector<Complex> rhs;
  std::vector<CollisionRecord> collisions;
  MomentRHS moments;
  Real data_norm{0};

  /// All-real form: conjugate pairs become (Re, Im) kernels with (Re, Im)
  /// targets; the Gram matrix of this form is real symmetric.
  std::vector<RealKernel> real_kernels() const;
  std::vector<Real> real_targets() const;
};

/// Throws UncontrollableMode or ResonanceDefect.
MomentSystem assemble(const BeamConfig& config, const ModalState& state0);

struct AdmissibilityResult {
  bool pass = true;
  // integral_0^pi u0 dx and integral_0^pi u1 dx (= sqrt(pi) * phi_0 coefficient)
  Real value_residual{0};
  Real velocity_residual{0};
};

AdmissibilityResult neumann_admissibility(const ModalState& state0);

}  // namespace beamctl
