#include "conelab/profile.hpp"

#include <cmath>

#include "conelab/util.hpp"

namespace conelab {

double gamma_exponent(int m, double eta) {
  if (m < 3) throw std::domain_error("m >= 3 required");
  if (eta < 0) throw std::domain_error("eta >= 0 required");
  const double mt = m / (1.0 + eta);
  const double disc = sq(mt - 0.5) - 2.0 * mt;
  if (disc < 0) throw std::domain_error("eta too large for real exponent");
  return (mt - 0.5) - std::sqrt(disc);
}

void ProfileParams::validate() const {
  if (m < 3) throw std::domain_error("m >= 3 required");
  if (eta < 0) throw std::domain_error("eta >= 0 required");
  if (eta > 0) {
    const double mt = m / (1.0 + eta);
    if (mt < (3.0 + 2.0 * std::sqrt(2.0)) / 2.0)
      throw std::domain_error("eta too large for real exponent");
  }
  if (!(r_max > 1.0)) throw std::domain_error("r_max > 1 required");
  if (!(tol > 0)) throw std::domain_error("tol > 0 required");
}

std::vector<double> ProfileSolution::scaled_nodes() const {
  std::vector<double> out(nodes_);
  for (double& r : out) r *= tau;
  return out;
}

ProfileSolution::Point ProfileSolution::eval(double r) const {
  Point p;
  const double rb = r / tau;  // base-profile radius
  if (rb > params.r_max * (1 + 1e-12))
    throw std::out_of_range("rescaled evaluation out of range");
  double phi, dphi;
  if (rb < r_seed_) {
    const double r2 = rb * rb;
    phi = 1.0 + c2_ * r2 + c4_ * r2 * r2;
    dphi = 2 * c2_ * rb + 4 * c4_ * rb * r2;
  } else {
    double y[2];
    ode_->eval(rb, y);
    phi = y[0];
    dphi = y[1];
  }
  double ddphi;
  if (rb == 0.0) {
    ddphi = 2 * c2_;
  } else {
    // from the ODE: phi'' = (1+phi'^2) (m/phi - (m/r) phi') / (1+eta)
    ddphi = (1 + dphi * dphi) *
            (params.m / phi - (params.m / rb) * dphi) / (1.0 + params.eta);
  }
  p.phi = tau * phi;
  p.dphi = dphi;
  p.ddphi = ddphi / tau;
  return p;
}

ProfileSolution::Point ProfileSolution::eval_interpolant(double r) const {
  Point p;
  const double rb = r / tau;
  if (rb < r_seed_) return eval(r);  // series region: derivatives are analytic
  double y[2], dy[2];
  ode_->eval(rb, y);
  ode_->eval_derivative(rb, dy);
  p.phi = tau * y[0];
  p.dphi = y[1];
  p.ddphi = dy[1] / tau;
  return p;
}

double ProfileSolution::residual(double r) const {
  const Point p = eval_interpolant(r * tau) ;  // base radius r
  if (r == 0.0) return 0.0;
  const double phi = p.phi / tau, dphi = p.dphi, ddphi = p.ddphi * tau;
  return (1.0 + params.eta) * ddphi / (1 + dphi * dphi) + (params.m / r) * dphi -
         params.m / phi;
}

ProfileSolution solve_profile(const ProfileParams& params) {
  params.validate();
  ProfileSolution sol;
  sol.params = params;
  sol.tau = 1.0;
  sol.r_seed_ = 1e-4;

  const double m = params.m, eta = params.eta;
  // Series seed phi = 1 + c2 r^2 + c4 r^4 from matching the two lowest
  // orders of the ODE at the origin.
  sol.c2_ = m / (2.0 * (m + 1.0 + eta));
  sol.c4_ = (8.0 * (1 + eta) * cube(sol.c2_) - m * sol.c2_) / (12.0 * (1 + eta) + 4.0 * m);

  const double r0 = sol.r_seed_;
  std::vector<double> y0 = {1.0 + sol.c2_ * r0 * r0 + sol.c4_ * std::pow(r0, 4),
                            2 * sol.c2_ * r0 + 4 * sol.c4_ * cube(r0)};

  DormandPrince::Rhs rhs = [m, eta](double r, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = (1 + y[1] * y[1]) * (m / y[0] - (m / r) * y[1]) / (1 + eta);
  };
  DormandPrince::Options opt;
  opt.rtol = params.tol;
  opt.atol = params.tol * 1e-2;
  opt.h_init = r0 / 4;
  opt.on_accept = [](double r, const double* y) {
    if (!(y[0] > r))
      throw std::runtime_error("profile invariant phi > r violated at r=" + fmt17(r));
    if (!(y[1] > 0 && y[1] < 1))
      throw std::runtime_error("profile invariant 0 < phi' < 1 violated at r=" + fmt17(r));
  };

  auto ode = DormandPrince::integrate(rhs, r0, params.r_max, y0, opt);
  sol.nodes_ = ode.nodes;
  sol.ode_ = std::make_shared<DormandPrince::Solution>(std::move(ode));
  return sol;
}

void fit_asymptotics(ProfileSolution& sol, double window_lo, double window_hi,
                     double& kappa, double& gamma_fit) {
  if (!(window_lo > 0 && window_hi > window_lo))
    throw std::invalid_argument("bad asymptotics window");
  std::vector<double> lx, ly;
  for (double r : sol.scaled_nodes()) {
    if (r < window_lo || r > window_hi) continue;
    const double gap = sol.eval(r).phi - r;
    if (!(gap > 0)) throw std::runtime_error("phi - r not positive inside window");
    lx.push_back(std::log(r));
    ly.push_back(std::log(gap));
  }
  if (lx.size() < 10) throw std::runtime_error("asymptotics window too short (< 10 nodes)");
  double slope, intercept;
  linfit(lx, ly, slope, intercept);
  gamma_fit = -slope;
  kappa = std::exp(intercept);
  sol.gamma_fit = gamma_fit;
  sol.kappa_fit = kappa;
}

ProfileSolution rescale_profile(const ProfileSolution& sol, double tau) {
  if (!(tau > 0)) throw std::domain_error("tau > 0 required");
  ProfileSolution out = sol;
  out.tau = sol.tau * tau;
  return out;
}

CertificateReport check_profile_properties(const ProfileSolution& sol) {
  CertificateReport rep;
  rep.name = "profile properties (m=" + std::to_string(sol.params.m) +
             ", eta=" + fmt17(sol.params.eta) + ", tau=" + fmt17(sol.tau) + ")";

  double m_conv = 1e300, m_lower = 1e300, m_upper = 1e300, m_slope_lo = 1e300,
         m_slope_hi = 1e300, m_b_lo = 1e300, m_b_hi = 1e300, m_mono = 1e300;
  std::string l_conv, l_lower, l_upper, l_slope_lo, l_slope_hi, l_b_lo, l_b_hi, l_mono;
  auto upd = [](double& worst, std::string& loc, double margin, double r) {
    if (margin < worst) {
      worst = margin;
      loc = "r=" + fmt17(r);
    }
  };

  double prev_b = 1e300;
  bool first = true;
  for (double r : sol.scaled_nodes()) {
    const auto p = sol.eval(r);
    upd(m_conv, l_conv, p.ddphi, r);
    if (r > 0) {
      upd(m_lower, l_lower, p.phi - r, r);
      upd(m_upper, l_upper, sol.tau + r - p.phi, r);  // phi_tau < tau + r
      upd(m_slope_lo, l_slope_lo, p.dphi, r);
      upd(m_slope_hi, l_slope_hi, 1.0 - p.dphi, r);
      const double b = p.phi - r * p.dphi;  // in (0, tau) for the rescaled profile
      upd(m_b_lo, l_b_lo, b, r);
      upd(m_b_hi, l_b_hi, sol.tau - b, r);
      if (!first) upd(m_mono, l_mono, prev_b - b, r);
      prev_b = b;
      first = false;
    }
  }
  rep.add_margin("convexity phi'' > 0", m_conv, l_conv);
  rep.add_margin("lower bound phi > r", m_lower, l_lower);
  rep.add_margin("upper bound phi < tau + r", m_upper, l_upper);
  rep.add_margin("slope phi' > 0", m_slope_lo, l_slope_lo);
  rep.add_margin("slope phi' < 1", m_slope_hi, l_slope_hi);
  rep.add_margin("intercept phi - r phi' > 0", m_b_lo, l_b_lo);
  rep.add_margin("intercept phi - r phi' < tau", m_b_hi, l_b_hi);
  rep.add_margin("intercept non-increasing", m_mono, l_mono);
  return rep;
}

CertificateReport supersolution_identity_check(const ProfileSolution& sol_tilde) {
  CertificateReport rep;
  const double eta = sol_tilde.params.eta;
  rep.name = "perturbed profile supersolution identity (eta=" + fmt17(eta) + ")";

  // The operator scale m/phi ~ O(1) makes an absolute C*tol comparison fair.
  const double ctol = 100.0 * sol_tilde.params.tol + 1e-13;
  double worst_res = -1, worst_sign = 1e300, worst_quant = 1e300;
  std::string loc_res, loc_sign, loc_quant;
  for (double r : sol_tilde.scaled_nodes()) {
    if (r <= 0) continue;
    const double res = std::abs(sol_tilde.residual(r / sol_tilde.tau));
    if (res > worst_res) {
      worst_res = res;
      loc_res = "r=" + fmt17(r);
    }
    const auto p = sol_tilde.eval(r);
    // M(phi~) computed from the identity M = -eta phi''/(1+phi'^2) holds by
    // the ODE; certify the inequality chain with the evaluated quantities.
    const double M = -eta * p.ddphi / (1 + p.dphi * p.dphi);
    if (eta > 0) {
      if (-M < worst_sign) {
        worst_sign = -M;
        loc_sign = "r=" + fmt17(r);
      }
      const double q = -(eta / 2) * p.ddphi - M;  // M < -(eta/2) phi'' since phi'^2 < 1
      if (q < worst_quant) {
        worst_quant = q;
        loc_quant = "r=" + fmt17(r);
      }
    }
  }
  rep.add("identity residual <= C tol", worst_res <= ctol, ctol - worst_res, loc_res,
          "C=100 (dense output order 4)");
  if (eta > 0) {
    rep.add_margin("M(phi~) < 0", worst_sign, loc_sign);
    rep.add_margin("M(phi~) < -(eta/2) phi~''", worst_quant, loc_quant);
  }
  return rep;
}

CertificateReport ordering_check(double eps, double alpha, const ProfileSolution& sol,
                                 const ProfileSolution& sol_tilde, int n_samples) {
  CertificateReport rep;
  rep.name = "profile ordering phi_{eps^alpha} <= phi~_eps";
  const double gamma = gamma_exponent(sol.params.m, 0.0);
  const double gamma_t = gamma_exponent(sol_tilde.params.m, sol_tilde.params.eta);
  const double threshold = (gamma_t + 1) / (gamma + 1);
  rep.add("alpha above threshold", alpha > threshold, alpha - threshold, "",
          "threshold (gamma~+1)/(gamma+1) = " + fmt17(threshold));

  const auto lower = rescale_profile(sol, std::pow(eps, alpha));
  const auto upper = rescale_profile(sol_tilde, eps);
  double worst = 1e300;
  std::string loc;
  for (int i = 0; i < n_samples; ++i) {
    const double r = double(i) / (n_samples - 1);
    const double gap = upper.eval(r).phi - lower.eval(r).phi;
    if (gap < worst) {
      worst = gap;
      loc = "r=" + fmt17(r);
    }
  }
  rep.add_margin("ordering on [0,1]", worst, loc,
                 "eps=" + fmt17(eps) + " alpha=" + fmt17(alpha));
  return rep;
}

}  // namespace conelab
