#include "conelab/barrier.hpp"

#include <cmath>

#include "conelab/util.hpp"

namespace conelab {

double sme_residual_2d(int m, double r, const SmePoint& p) {
  if (!(p.v > 0)) throw std::domain_error("sme_residual_2d: v must be positive");
  const double D = 1 + p.v_r * p.v_r + p.v_y * p.v_y;
  const double second =
      ((1 + p.v_y * p.v_y) * p.v_rr + (1 + p.v_r * p.v_r) * p.v_yy -
       2 * p.v_r * p.v_y * p.v_ry) /
      D;
  double radial;
  if (r == 0.0) {
    if (std::abs(p.v_r) > 1e-8)
      throw std::domain_error("sme_residual_2d: v_r(0,y) != 0");
    radial = m * p.v_rr;  // symmetric limit of (m/r) v_r
  } else {
    radial = m * p.v_r / r;
  }
  return second + radial - m / p.v;
}

void BarrierParams::validate() const {
  if (!(eta > 0)) throw std::domain_error("eta > 0 required");
  if (!(beta > 0 && beta <= std::pow(2.0, -7)))
    throw std::domain_error("beta must lie in (0, 2^-7]");
  if (!(eps > 0 && eps <= 0.25)) throw std::domain_error("eps must lie in (0, 1/4]");
  if (!(b0 > 0)) throw std::domain_error("b0 > 0 required");
  if (!(beta < eta / (36 * b0 + 16)))
    throw std::domain_error("beta >= eta/(36 b0 + 16): supersolution margin lost");
}

double BarrierParams::auto_beta(double eta, double b0) {
  return std::min(std::pow(2.0, -7), 0.9 * eta / (36 * b0 + 16));
}

double compute_b0(const ProfileSolution& profile_tilde, int n_nodes) {
  if (!(profile_tilde.params.eta > 0))
    throw std::domain_error("compute_b0 needs the eta > 0 profile");
  double b0 = 0;
  const double r_max = profile_tilde.max_radius();
  for (int i = 0; i < n_nodes; ++i) {
    const double t = r_max * double(i) / (n_nodes - 1);
    const auto p = profile_tilde.eval(t);
    if (!(p.ddphi > 0))
      throw std::runtime_error("compute_b0: phi~'' <= 0 at t=" + fmt17(t));
    b0 = std::max(b0, (p.phi - t * p.dphi) / ((1 + t * t) * p.ddphi));
  }
  return b0;
}

BarrierEvaluator::BarrierEvaluator(BarrierParams params, const GapFunction* h,
                                   const ProfileSolution* profile_tilde)
    : params_(params), h_(h), tilde_(profile_tilde) {
  params_.validate();
  if (!(tilde_->params.eta > 0))
    throw std::domain_error("barrier requires the perturbed (eta > 0) profile");
}

BarrierEvaluator::PsiJet BarrierEvaluator::psi_jet(double s, double y) const {
  if (!(s >= params_.eps)) throw std::domain_error("psi requires s >= eps");
  const double beta = params_.beta;
  const double h0 = (*h_)(y), h1 = h_->eval(y, 1), h2 = h_->eval(y, 2);
  const double w = h0 + std::sqrt(s);
  const double E = std::exp(-1.0 / std::sqrt(w));
  PsiJet j;
  j.psi = (s < 1 ? s : std::sqrt(s)) + beta * E;
  j.psi_p = beta * E * 0.5 * std::pow(w, -1.5) * h1;
  j.psi_pp = beta * E *
             ((0.25 * std::pow(w, -3.0) - 0.75 * std::pow(w, -2.5)) * h1 * h1 +
              0.5 * std::pow(w, -1.5) * h2);
  return j;
}

SmePoint BarrierEvaluator::v_jet(double s, double r, double y) const {
  const PsiJet j = psi_jet(s, y);
  const double t = r / j.psi;
  const auto p = tilde_->eval(t);
  SmePoint q;
  q.v = j.psi * p.phi;
  q.v_r = p.dphi;
  q.v_rr = p.ddphi / j.psi;
  const double b = p.phi - t * p.dphi;
  q.v_y = j.psi_p * b;
  q.v_ry = -(t * j.psi_p / j.psi) * p.ddphi;
  q.v_yy = (t * t * j.psi_p * j.psi_p / j.psi) * p.ddphi + j.psi_pp * b;
  return q;
}

double BarrierEvaluator::width(double y) const {
  return (*h_)(y) + std::sqrt(params_.eps);
}

CertificateReport certify_supersolution(const BarrierEvaluator& ev, double s,
                                        int n_sigma, int n_y) {
  CertificateReport rep;
  rep.name = "supersolution certification (s=" + fmt17(s) + ")";
  const auto& par = ev.params();
  rep.add_margin("beta below eta/(36 b0 + 16)",
                 par.eta / (36 * par.b0 + 16) - par.beta, "",
                 "b0=" + fmt17(par.b0));

  const double R = ev.gap().spec.R;
  double w_sign = 1e300, w_quant = 1e300, w_psipp = 1e300, w_r2 = 1e300, w_r1 = 1e300;
  std::string l_sign, l_quant, l_psipp, l_r2, l_r1;
  auto upd = [](double& worst, std::string& loc, double m, double r, double y) {
    if (m < worst) {
      worst = m;
      loc = "r=" + fmt17(r) + " y=" + fmt17(y);
    }
  };
  for (int jy = 0; jy < n_y; ++jy) {
    const double y = -R + 2 * R * double(jy) / n_y;
    const double width = ev.width(y);
    const auto pj = ev.psi_jet(s, y);
    for (int is = 0; is < n_sigma; ++is) {
      const double r = width * double(is) / (n_sigma - 1);
      const auto q = ev.v_jet(s, r, y);
      const double M = sme_residual_2d(ev.profile_tilde().params.m, r, q);
      upd(w_sign, l_sign, -M, r, y);
      const double phidd = ev.profile_tilde().eval(r / pj.psi).ddphi;
      upd(w_quant, l_quant, -(par.eta / 4) * phidd / pj.psi - M, r, y);
      upd(w_psipp, l_psipp, 4 * par.beta - pj.psi * std::abs(pj.psi_pp), r, y);
      upd(w_r2, l_r2, 8 * par.beta - r * r * std::abs(pj.psi_pp) / pj.psi, r, y);
      upd(w_r1, l_r1, par.beta - r * std::abs(pj.psi_p) / pj.psi, r, y);
    }
  }
  rep.add_margin("M(v_s) < 0", w_sign, l_sign);
  rep.add_margin("M(v_s) <= -(eta/4) psi^-1 phi~''", w_quant, l_quant);
  rep.add_margin("psi |psi''| <= 4 beta", w_psipp, l_psipp);
  rep.add_margin("r^2 |psi''| / psi <= 8 beta", w_r2, l_r2);
  rep.add_margin("r |psi'| / psi <= beta", w_r1, l_r1);

  // Monotonicity of s -> v_s on a subsampled grid.
  double w_mono = 1e300;
  std::string l_mono;
  for (double sl : {2 * par.eps, 1.0, 2.0}) {
    if (sl <= par.eps) continue;
    for (int jy = 0; jy < 64; ++jy) {
      const double y = -R + 2 * R * double(jy) / 64;
      const double width = ev.width(y);
      for (int is = 0; is < 64; ++is) {
        const double r = width * double(is) / 63;
        upd(w_mono, l_mono, ev.v(sl, r, y) - ev.v(par.eps, r, y), r, y);
      }
    }
  }
  rep.add_margin("v_s >= v_eps for s in {2eps, 1, 2}", w_mono, l_mono);
  return rep;
}

CertificateReport barrier_gap_check(const BarrierEvaluator& ev, int n_sigma, int n_y) {
  CertificateReport rep;
  rep.name = "barrier gap bound";
  const auto& par = ev.params();
  const double R = ev.gap().spec.R;
  double worst = 1e300;
  std::string loc;
  for (int jy = 0; jy < n_y; ++jy) {
    const double y = -R + 2 * R * double(jy) / n_y;
    const double width = ev.width(y);
    const double bound =
        par.eps + par.beta * std::exp(-1.0 / std::sqrt((ev.gap())(y) + std::sqrt(par.eps)));
    for (int is = 0; is < n_sigma; ++is) {
      const double r = width * double(is) / (n_sigma - 1);
      const double gap = ev.v(par.eps, r, y) - r;
      const double m = bound - gap;
      if (m < worst) {
        worst = m;
        loc = "r=" + fmt17(r) + " y=" + fmt17(y);
      }
    }
  }
  rep.add_margin("v_eps - r <= eps + beta exp(-(h+sqrt(eps))^-1/2)", worst, loc);
  return rep;
}

CertificateReport proof_constants_check() {
  CertificateReport rep;
  rep.name = "barrier calculus constants";
  auto scan_max = [](int k) {
    double best = 0;
    for (int i = 0; i <= 400000; ++i) {
      const double x = 1e-2 * std::exp(std::log(1e4) * double(i) / 400000);
      best = std::max(best, std::pow(x, k) * std::exp(-x));
    }
    return best;
  };
  auto scan_min_x2e = []() {
    double best = 1e300;
    for (int i = 0; i <= 400000; ++i) {
      const double x = 1e-2 * std::exp(std::log(1e4) * double(i) / 400000);
      best = std::min(best, x * x * std::exp(1 / x));
    }
    return best;
  };
  const double m6 = scan_max(6), m5 = scan_max(5), m3 = scan_max(3), mn = scan_min_x2e();
  const double e = std::exp(1.0);
  rep.add("scan matches (k/e)^k at argmax",
          std::abs(m6 - std::pow(6 / e, 6)) < 1e-6 && std::abs(m5 - std::pow(5 / e, 5)) < 1e-6 &&
              std::abs(m3 - std::pow(3 / e, 3)) < 1e-8 && std::abs(mn - e * e / 4) < 1e-8,
          0.0, "", "max x^k e^-x at x=k; min x^2 e^{1/x} at x=1/2");
  rep.add_margin("max x^6 e^-x < 125", 125 - m6, "", fmt17(m6));
  rep.add_margin("max x^5 e^-x < 22", 22 - m5, "", fmt17(m5));
  rep.add_margin("max x^3 e^-x < 2", 2 - m3, "", fmt17(m3));
  rep.add_margin("min x^2 e^{1/x} > 1", mn - 1, "", fmt17(mn));
  return rep;
}

}  // namespace conelab
