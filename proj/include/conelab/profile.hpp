#ifndef CONELAB_PROFILE_HPP
#define CONELAB_PROFILE_HPP

#include <memory>
#include <string>
#include <vector>

#include "conelab/certificate.hpp"
#include "conelab/ode.hpp"

namespace conelab {

/// Decay exponent of the graph profile over the 2m-dimensional symmetric
/// cone: gamma = (mt - 1/2) - sqrt((mt - 1/2)^2 - 2*mt) with mt = m/(1+eta).
/// Exact value 2 at (m=3, eta=0). Throws std::domain_error when the
/// discriminant is negative ("eta too large for real exponent").
double gamma_exponent(int m, double eta);

struct ProfileParams {
  int m = 3;          // half the cone dimension parameter; m >= 3
  double eta = 0.0;   // >= 0; perturbed functional exponent is m/(1+eta)
  double r_max = 1e3;
  double tol = 1e-10;

  void validate() const;  // throws on violated invariants
};

/// Radial graph profile over the cone: the y-independent solution of the
/// symmetric minimal surface equation with value 1 and slope 0 at the axis,
/// integrated as an ODE from a series seed near the regular singular origin.
///
/// Evaluation uses the integrator's quartic dense output for (phi, phi');
/// phi'' is recovered from the ODE itself (exact given phi, phi'), while the
/// residual certificate differentiates the dense polynomial so it measures
/// the integrator error honestly instead of an identity.
class ProfileSolution {
 public:
  struct Point {
    double phi = 0, dphi = 0, ddphi = 0;
  };

  ProfileParams params;
  double tau = 1.0;  // geometric rescaling factor: this object is tau*phi(r/tau)

  const std::vector<double>& nodes() const { return nodes_; }
  /// Node radii of this (possibly rescaled) profile: tau * base nodes.
  std::vector<double> scaled_nodes() const;

  Point eval(double r) const;          // phi'' from the ODE
  Point eval_interpolant(double r) const;  // phi'' from the dense polynomial
  double operator()(double r) const { return eval(r).phi; }

  double r_seed() const { return r_seed_; }
  double max_radius() const { return params.r_max * tau; }

  /// ODE residual (1+eta) phi''/(1+phi'^2) + (m/r) phi' - m/phi using the
  /// interpolant second derivative, at radius r of the *base* profile.
  double residual(double r) const;

  double kappa_fit = 0.0;
  double gamma_fit = 0.0;

  friend ProfileSolution solve_profile(const ProfileParams&);
  friend ProfileSolution rescale_profile(const ProfileSolution&, double);

 private:
  std::shared_ptr<const DormandPrince::Solution> ode_;
  std::vector<double> nodes_;  // base (tau=1) node radii including the seed range
  double r_seed_ = 1e-4;
  double c2_ = 0, c4_ = 0;  // series phi = 1 + c2 r^2 + c4 r^4 near 0
};

ProfileSolution solve_profile(const ProfileParams& params);

/// Log-log least squares of (phi - r) ~ kappa * r^(-gamma) over the window.
/// Throws if fewer than 10 nodes fall inside the window.
void fit_asymptotics(ProfileSolution& sol, double window_lo, double window_hi,
                     double& kappa, double& gamma_fit);

/// tau*phi(r/tau); shares the base interpolant, composes exactly.
ProfileSolution rescale_profile(const ProfileSolution& sol, double tau);

/// Node-wise inequality suite: convexity, r < phi < 1+r, 0 < phi' < 1,
/// 0 < phi - r phi' < 1 and its monotone decrease.
CertificateReport check_profile_properties(const ProfileSolution& sol);

/// For an eta>0 profile: M(phi~) + eta phi~''/(1+phi~'^2) = 0 within C*tol,
/// and the strict supersolution chain M(phi~) < -(eta/2) phi~'' < 0.
CertificateReport supersolution_identity_check(const ProfileSolution& sol_tilde);

/// phi_{eps^alpha} <= phi~_eps on r in [0,1], sampled densely.
CertificateReport ordering_check(double eps, double alpha, const ProfileSolution& sol,
                                 const ProfileSolution& sol_tilde, int n_samples = 10000);

}  // namespace conelab

#endif
