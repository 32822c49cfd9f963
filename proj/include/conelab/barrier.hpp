#ifndef CONELAB_BARRIER_HPP
#define CONELAB_BARRIER_HPP

#include "conelab/certificate.hpp"
#include "conelab/gap.hpp"
#include "conelab/profile.hpp"

namespace conelab {

/// Scalar field jet at a point of the (r, y) half-plane.
struct SmePoint {
  double v = 0, v_r = 0, v_y = 0, v_rr = 0, v_ry = 0, v_yy = 0;
};

/// Two-dimensional symmetric minimal surface operator
///   M(v) = [(1+v_y^2) v_rr + (1+v_r^2) v_yy - 2 v_r v_y v_ry] / (1+|Dv|^2)
///          + m (v_r / r - 1 / v).
/// At r = 0 the symmetric limit m v_rr replaces (m/r) v_r; this requires
/// v_r(0, y) = 0, which is asserted.
double sme_residual_2d(int m, double r, const SmePoint& p);

struct BarrierParams {
  double beta = 0.0;
  double eta = 0.0;
  double eps = 0.0;
  double b0 = 0.0;     // computed profile constant, see compute_b0
  double sigma = 0.1;  // gradient bound used by the continuation conditions
  double alpha = 1.1;

  void validate() const;
  /// Default policy: beta = min(2^-7, 0.9 * eta / (36 b0 + 16)).
  static double auto_beta(double eta, double b0);
};

/// sup over nodes of (phi~ - t phi~') / ((1+t^2) phi~''), the least constant
/// making the intercept bound hold on the sampled grid.
double compute_b0(const ProfileSolution& profile_tilde, int n_nodes = 100000);

/// Supersolution family v_s(r,y) = psi_s(y) * phi~(r / psi_s(y)) with the
/// exponential-weight modulation psi_s.
class BarrierEvaluator {
 public:
  BarrierEvaluator(BarrierParams params, const GapFunction* h,
                   const ProfileSolution* profile_tilde);

  const BarrierParams& params() const { return params_; }
  const GapFunction& gap() const { return *h_; }
  const ProfileSolution& profile_tilde() const { return *tilde_; }

  struct PsiJet {
    double psi = 0, psi_p = 0, psi_pp = 0;
  };
  PsiJet psi_jet(double s, double y) const;
  double psi(double s, double y) const { return psi_jet(s, y).psi; }

  /// Full jet of v_s at (r, y), by the chain rule through psi and phi~.
  SmePoint v_jet(double s, double r, double y) const;
  double v(double s, double r, double y) const { return v_jet(s, r, y).v; }

  /// Domain width h(y) + sqrt(eps).
  double width(double y) const;

 private:
  BarrierParams params_;
  const GapFunction* h_;
  const ProfileSolution* tilde_;
};

/// Negativity of M(v_s), the quantitative bound
/// M(v_s) <= -(eta/4) psi^-1 phi~''(r/psi), and the psi-ingredient bounds,
/// on an (n_sigma x n_y) grid over the domain r <= h(y) + sqrt(eps).
CertificateReport certify_supersolution(const BarrierEvaluator& ev, double s,
                                        int n_sigma, int n_y);

/// v_eps - r <= eps + beta exp(-(h+sqrt(eps))^(-1/2)) node-wise.
CertificateReport barrier_gap_check(const BarrierEvaluator& ev, int n_sigma, int n_y);

/// The four scalar calculus facts the barrier chain consumes.
CertificateReport proof_constants_check();

}  // namespace conelab

#endif
