#ifndef CONELAB_GAP_HPP
#define CONELAB_GAP_HPP

#include <string>
#include <vector>

#include "conelab/certificate.hpp"

namespace conelab {

/// Prescribed singular set inside one period cell [-R, R]: a finite union of
/// disjoint closed intervals (points as degenerate intervals), extended
/// 2R-periodically.
struct SingularSetSpec {
  double R = 4.0;
  std::vector<std::pair<double, double>> intervals;  // sorted, disjoint, in [-R, R]

  void validate() const;
  /// Wrap y into the fundamental cell [-R, R).
  double wrap(double y) const;
  bool contains(double y) const;  // y in the periodized set (exact interval test)
};

/// Smooth 2R-periodic gap function: h = 0 exactly on K, h > 0 off K, built on
/// each complementary arc (a,b) as c * w((y-a)/(b-a))^2 with the flat bump
/// w(t) = exp(-1/t - 1/(1-t)). Squaring the bump keeps sqrt(h) smooth.
/// Amplitudes c are chosen per arc so the sampled C1 seminorm of sqrt(h) and
/// C2 seminorm of h fit inside the beta budget.
class GapFunction {
 public:
  static constexpr int k_max = 4;  // highest derivative exposed

  struct Arc {
    double a = 0, len = 0, c = 0;
  };

  SingularSetSpec spec;
  double beta = 0.0;
  bool identically_zero = false;  // complement empty: h == 0 with a warning flag

  /// k-th derivative of h at y, k <= k_max (k=0 is the value).
  double eval(double y, int k = 0) const;
  double operator()(double y) const { return eval(y, 0); }
  /// d/dy sqrt(h); 0 on K by flatness.
  double sqrt_h_prime(double y) const;

  double max_h() const;
  /// Sampled seminorms over one period: sup |(sqrt h)'| and sup |h''|.
  void seminorms(int n_samples, double& s1, double& s2) const;

  const std::vector<Arc>& arcs() const { return arcs_; }

  /// Testing hook: force a single amplitude on every arc (fault injection).
  void override_amplitudes(double c);

  friend GapFunction build_h(const SingularSetSpec&, double);
  friend GapFunction periodize_cutoff(const GapFunction&, double);

 private:
  std::vector<Arc> arcs_;
  bool cutoff_applied = false;
  double cutoff_R = 0.0;

  // value/derivatives of the arc bump at wrapped y (no cutoff factor)
  void raw_derivs(double y, double out[k_max + 1]) const;
};

/// Build the gap function for K with smallness budget beta in (0, 2^-7].
GapFunction build_h(const SingularSetSpec& spec, double beta);

/// 2R-periodic extension of zeta_R^2 * h restricted to [-R, R], where
/// zeta(y) = 1 for |y| < 1/2 and 0 for |y| >= 7/8.
GapFunction periodize_cutoff(const GapFunction& h_raw, double R);

/// Smallness certificate: sqrt(eps) + sup|(sqrt h)'| + sup|h''| <= beta on a
/// sampling grid. The sqrt(eps) term is reported as its own check since it is
/// independent of the gap construction.
CertificateReport check_h_smallness(const GapFunction& h, double eps, double beta,
                                    int n_samples = 100000);

/// Two-sided comparison of h + sqrt(eps) between nearby points and the
/// induced exponential-weight bound.
CertificateReport comparison_check(const GapFunction& h, double eps,
                                   int n_samples = 10000);

}  // namespace conelab

#endif
