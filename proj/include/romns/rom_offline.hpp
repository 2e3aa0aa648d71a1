#pragma once

#include <cstddef>
#include <string>

#include "romns/lifting.hpp"
#include "romns/linalg.hpp"
#include "romns/operators.hpp"

namespace romns {

/// Reduced right-hand side that is affine-quadratic in two coefficient
/// vectors a (evolved) and c (prescribed boundary coefficients):
///   constant + A_a a + A_c c + Q_aa (a (x) a) + Q_ac (a (x) c) + Q_cc (c (x) c).
/// Kronecker index i * n + j stands for x_i y_j.
struct QuadraticModel {
  Vector constant;
  DenseMatrix a_a;   // R x R_a
  DenseMatrix a_c;   // R x R_c
  RowMatrix q_aa;  // R x R_a^2
  RowMatrix q_ac;  // R x R_a R_c, both orderings of the mixed term
  RowMatrix q_cc;  // R x R_c^2

  Index rows() const { return constant.size(); }
  Index dim_a() const { return a_a.cols(); }
  Index dim_c() const { return a_c.cols(); }

  Vector eval(const Vector& a, const Vector& c) const;
  /// Number of stored tensor entries.
  std::size_t tensor_entries() const;
};

/// Extended-state image [vel; bc] of a coefficient vector.
struct TrialMap {
  DenseMatrix vel;  // N_V x R, or empty when the velocity block is zero
  DenseMatrix bc;   // N_bc x R, or empty when the trace block is zero
  Index cols = 0;
};

/// Projects F^CD(E_a a + E_c c) onto `test` (T^T F) exactly, by contracting
/// the face-wise convection form against the trial maps.
QuadraticModel project_fcd(const OperatorSet& ops, const DenseMatrix& test, const TrialMap& ea,
                           const TrialMap& ec);

/// Thread count for offline assembly, from ROMNS_THREADS (default: hardware).
unsigned offline_threads();

struct RomOperators {
  QuadraticModel model;
  DenseMatrix phi_hom;  // N_V x R_hom
  DenseMatrix f_inhom;  // N_V x R_bc
  DenseMatrix phi_bc;   // N_bc x R_bc
  double orthogonality = 0.0;  // max |Phi_hom^T Omega F_inhom| / max column Omega-norm of F_inhom

  Index r_hom() const { return phi_hom.cols(); }
  Index r_bc() const { return phi_bc.cols(); }

  Vector rhs(const Vector& a_hom, const Vector& a_bc) const { return model.eval(a_hom, a_bc); }
  Vector reconstruct(const Vector& a_hom, const Vector& a_bc) const {
    return phi_hom * a_hom + f_inhom * a_bc;
  }
};

/// Tolerance on the relative Omega-orthogonality of Phi_hom and F_inhom.
inline constexpr double kOrthogonalityTolerance = 1e-9;

/// Relative Omega-orthogonality defect of two bases (0 if either is empty).
double orthogonality_defect(const Vector& omega, const DenseMatrix& phi_hom,
                            const DenseMatrix& f_inhom);

RomOperators build_rom_operators(const OperatorSet& ops, const DenseMatrix& phi_hom,
                                 const LiftingOperator& lifting);

struct TheoremChecks {
  double orthonormality = 0.0;       // ||Phi^T Omega Phi - I||_max
  double span_defect = 0.0;          // (a) relative distance of F_inhom from Im(Phi)
  double mass_solvability = 0.0;     // (b) relative residual of M Phi a = F_M Phi_bc
  Index rank_m_phi = 0;              // (c)
  Index rank_reduced_divergence = 0; // (d)
  double homogeneous_gradient = 0.0; // ||Phi_hom^T G Psi||_max / ||G Psi||_max
  bool satisfied = false;

  std::string describe() const;
};

struct VpRomOperators {
  QuadraticModel model;  // Phi^T F^CD in (a, a_bc)
  DenseMatrix phi;       // [Phi_hom Phi_inhom]
  DenseMatrix phi_inhom;
  DenseMatrix psi;       // M Phi_inhom
  DenseMatrix d_r;       // Psi^T M Phi, R_p x R_V
  DenseMatrix g_r;       // Phi^T G Psi = -d_r^T
  DenseMatrix l_r;       // d_r g_r
  DenseMatrix mass_bc;   // Psi^T F_M Phi_bc, R_p x R_bc
  DenseLu l_r_lu{DenseMatrix::Identity(1, 1)};
  double l_r_condition = 0.0;
  Index r_hom = 0;
  TheoremChecks checks;

  Index r_v() const { return phi.cols(); }
  Index r_p() const { return psi.cols(); }
  Index r_inhom() const { return phi_inhom.cols(); }
  Index r_bc() const { return mass_bc.cols(); }
};

/// L_r condition estimates above this are rejected.
inline constexpr double kMaxReducedPoissonCondition = 1e12;

VpRomOperators build_vp_rom(const OperatorSet& ops, const DenseMatrix& phi_hom,
                            const LiftingOperator& lifting);

}  // namespace romns
