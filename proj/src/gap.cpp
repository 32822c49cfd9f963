#include "conelab/gap.hpp"

#include <algorithm>
#include <cmath>

#include "conelab/util.hpp"

namespace conelab {

namespace {

/// Value plus first four derivatives; enough arithmetic to assemble the
/// flat-bump and cutoff algebra without hand-expanding Leibniz chains.
struct D4 {
  double d[5] = {0, 0, 0, 0, 0};

  static D4 constant(double v) {
    D4 x;
    x.d[0] = v;
    return x;
  }
};

D4 operator+(const D4& a, const D4& b) {
  D4 r;
  for (int i = 0; i < 5; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}
D4 operator-(const D4& a, const D4& b) {
  D4 r;
  for (int i = 0; i < 5; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}
D4 operator*(const D4& a, const D4& b) {
  static constexpr int binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  D4 r;
  for (int k = 0; k < 5; ++k) {
    double s = 0;
    for (int j = 0; j <= k; ++j) s += binom[k][j] * a.d[j] * b.d[k - j];
    r.d[k] = s;
  }
  return r;
}
D4 operator/(const D4& a, const D4& b) {
  D4 q;
  q.d[0] = a.d[0] / b.d[0];
  q.d[1] = (a.d[1] - q.d[0] * b.d[1]) / b.d[0];
  q.d[2] = (a.d[2] - q.d[0] * b.d[2] - 2 * q.d[1] * b.d[1]) / b.d[0];
  q.d[3] = (a.d[3] - q.d[0] * b.d[3] - 3 * q.d[1] * b.d[2] - 3 * q.d[2] * b.d[1]) / b.d[0];
  q.d[4] = (a.d[4] - q.d[0] * b.d[4] - 4 * q.d[1] * b.d[3] - 6 * q.d[2] * b.d[2] -
            4 * q.d[3] * b.d[1]) /
           b.d[0];
  return q;
}
D4 exp(const D4& g) {
  D4 r;
  const double e = std::exp(g.d[0]);
  const double g1 = g.d[1], g2 = g.d[2], g3 = g.d[3], g4 = g.d[4];
  r.d[0] = e;
  r.d[1] = e * g1;
  r.d[2] = e * (g2 + g1 * g1);
  r.d[3] = e * (g3 + 3 * g1 * g2 + g1 * g1 * g1);
  r.d[4] = e * (g4 + 4 * g1 * g3 + 3 * g2 * g2 + 6 * g1 * g1 * g2 + g1 * g1 * g1 * g1);
  return r;
}
/// Rescale the abscissa: f(s*t + const) -> derivative k picks up s^k.
D4 scale_abscissa(const D4& a, double s) {
  D4 r = a;
  double p = 1;
  for (int i = 1; i < 5; ++i) {
    p *= s;
    r.d[i] *= p;
  }
  return r;
}

constexpr double kTcut = 1e-6;  // below this the flat bump underflows anyway

/// exp(-1/t - 1/(1-t)) on (0,1), identically 0 at the ends (all derivatives).
D4 flat_bump(double t) {
  if (t <= kTcut || t >= 1 - kTcut) return D4();
  D4 g;
  const double u = 1 / t, v = 1 / (1 - t);
  g.d[0] = -u - v;
  g.d[1] = u * u - v * v;
  g.d[2] = -2 * u * u * u - 2 * v * v * v;
  g.d[3] = 6 * u * u * u * u - 6 * v * v * v * v;
  g.d[4] = -24 * std::pow(u, 5) - 24 * std::pow(v, 5);
  return exp(g);
}

/// exp(-1/t) for t>0, 0 for t<=0.
D4 half_bump(double t) {
  if (t <= kTcut) return D4();
  D4 r;
  const double x = 1 / t;
  const double e = std::exp(-x);
  r.d[0] = e;
  r.d[1] = e * x * x;
  r.d[2] = e * (x * x * x * x - 2 * x * x * x);
  r.d[3] = e * (std::pow(x, 6) - 6 * std::pow(x, 5) + 6 * std::pow(x, 4));
  r.d[4] = e * (std::pow(x, 8) - 12 * std::pow(x, 7) + 36 * std::pow(x, 6) - 24 * std::pow(x, 5));
  return r;
}

/// Smooth step: 0 for t<=0, 1 for t>=1.
D4 smooth_step(double t) {
  if (t <= kTcut) return D4();
  if (t >= 1 - kTcut) return D4::constant(1.0);
  const D4 n = half_bump(t);
  D4 nm = half_bump(1 - t);  // derivatives flip sign alternately
  for (int i = 1; i < 5; i += 2) nm.d[i] = -nm.d[i];
  return n / (n + nm);
}

/// Cutoff zeta(x): 1 for |x| <= 1/2, 0 for |x| >= 7/8, even and smooth.
D4 cutoff_zeta(double x) {
  const double ax = std::abs(x);
  if (ax <= 0.5) return D4::constant(1.0);
  if (ax >= 0.875) return D4();
  D4 s = smooth_step((ax - 0.5) / 0.375);
  s = scale_abscissa(s, 1.0 / 0.375);
  D4 z = D4::constant(1.0) - s;
  if (x < 0)  // mirror: odd derivatives change sign
    for (int i = 1; i < 5; i += 2) z.d[i] = -z.d[i];
  return z;
}

}  // namespace

void SingularSetSpec::validate() const {
  if (!(R > 1)) throw std::domain_error("R > 1 required");
  if (intervals.empty()) throw std::domain_error("singular set must be non-empty");
  double prev_end = -R - 1;
  for (const auto& [a, b] : intervals) {
    if (!(a <= b)) throw std::domain_error("interval with a > b");
    if (a < -R || b > R) throw std::domain_error("interval outside the period cell");
    if (!(a > prev_end)) throw std::domain_error("intervals must be sorted and disjoint");
    prev_end = b;
  }
}

double SingularSetSpec::wrap(double y) const {
  const double period = 2 * R;
  double w = y - period * std::floor((y + R) / period);
  if (w >= R) w -= period;  // guard the floating edge
  return w;
}

bool SingularSetSpec::contains(double y) const {
  const double w = wrap(y);
  for (const auto& [a, b] : intervals) {
    if (w >= a && w <= b) return true;
    // the wrap seam: an interval touching -R also claims y == R side
    if (a == -R && w == R) return true;
  }
  return false;
}

GapFunction build_h(const SingularSetSpec& spec, double beta) {
  spec.validate();
  if (!(beta > 0 && beta <= std::pow(2.0, -7)))
    throw std::domain_error("beta must lie in (0, 2^-7]");

  GapFunction h;
  h.spec = spec;
  h.beta = beta;

  // Complementary arcs on the period circle.
  const auto& iv = spec.intervals;
  const double period = 2 * spec.R;
  for (size_t i = 0; i < iv.size(); ++i) {
    const double a = iv[i].second;
    const double b = (i + 1 < iv.size()) ? iv[i + 1].first : iv[0].first + period;
    const double len = b - a;
    if (len <= 0) continue;
    h.arcs_.push_back({a, len, 0.0});
  }
  if (h.arcs_.empty()) {
    h.identically_zero = true;  // K covers the whole cell
    return h;
  }

  // Shape maxima of the bump, sampled once (the bump is fixed).
  constexpr int kShape = 4001;
  double max_w = 0, max_wp = 0, max_W2 = 0;
  for (int i = 1; i < kShape - 1; ++i) {
    const double t = double(i) / (kShape - 1);
    const D4 w = flat_bump(t);
    const D4 W = w * w;
    max_w = std::max(max_w, std::abs(w.d[0]));
    max_wp = std::max(max_wp, std::abs(w.d[1]));
    max_W2 = std::max(max_W2, std::abs(W.d[2]));
  }

  // Per-arc amplitude: sqrt(c)*max|w'|/len <= theta*beta (C1 of sqrt h) and
  // c*max|W''|/len^2 <= theta*beta (C2 of h), plus the h <= 1/2 range cap.
  const double theta = 0.45;
  for (auto& arc : h.arcs_) {
    const double c1 = sq(theta * beta * arc.len / max_wp);
    const double c2 = theta * beta * sq(arc.len) / max_W2;
    const double c3 = 0.5 / sq(max_w);
    arc.c = std::min({c1, c2, c3});
  }
  return h;
}

void GapFunction::override_amplitudes(double c) {
  for (auto& arc : arcs_) arc.c = c;
}

void GapFunction::raw_derivs(double y, double out[k_max + 1]) const {
  for (int k = 0; k <= k_max; ++k) out[k] = 0;
  if (identically_zero) return;
  const double w = spec.wrap(y);
  for (const auto& arc : arcs_) {
    // arcs may extend past +R (wrap-around arc): test both sheets
    for (double cand : {w, w + 2 * spec.R}) {
      if (cand > arc.a && cand < arc.a + arc.len) {
        const double t = (cand - arc.a) / arc.len;
        D4 bump = flat_bump(t);
        D4 W = bump * bump;
        W = scale_abscissa(W, 1.0 / arc.len);
        for (int k = 0; k <= k_max; ++k) out[k] = arc.c * W.d[k];
        return;
      }
    }
  }
}

double GapFunction::eval(double y, int k) const {
  if (k < 0 || k > k_max) throw std::invalid_argument("derivative order out of range");
  double raw[k_max + 1];
  raw_derivs(y, raw);
  if (!cutoff_applied) return raw[k];

  const double w = spec.wrap(y);
  D4 z = cutoff_zeta(w / cutoff_R);
  z = scale_abscissa(z, 1.0 / cutoff_R);
  D4 hr;
  for (int i = 0; i <= k_max; ++i) hr.d[i] = raw[i];
  return ((z * z) * hr).d[k];
}

double GapFunction::sqrt_h_prime(double y) const {
  if (identically_zero) return 0.0;
  const double w = spec.wrap(y);
  for (const auto& arc : arcs_) {
    for (double cand : {w, w + 2 * spec.R}) {
      if (cand > arc.a && cand < arc.a + arc.len) {
        const double t = (cand - arc.a) / arc.len;
        const D4 bump = flat_bump(t);
        double v = std::sqrt(arc.c) * bump.d[0];
        double dv = std::sqrt(arc.c) * bump.d[1] / arc.len;
        if (!cutoff_applied) return dv;
        D4 z = cutoff_zeta(w / cutoff_R);
        // sqrt(zeta^2 h) = zeta * sqrt(h_raw)
        return (z.d[1] / cutoff_R) * v + z.d[0] * dv;
      }
    }
  }
  return 0.0;
}

double GapFunction::max_h() const {
  double best = 0;
  constexpr int n = 20001;
  for (int i = 0; i < n; ++i) {
    const double y = -spec.R + 2 * spec.R * double(i) / n;
    best = std::max(best, eval(y));
  }
  return best;
}

void GapFunction::seminorms(int n_samples, double& s1, double& s2) const {
  s1 = s2 = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double y = -spec.R + 2 * spec.R * double(i) / n_samples;
    s1 = std::max(s1, std::abs(sqrt_h_prime(y)));
    s2 = std::max(s2, std::abs(eval(y, 2)));
  }
}

GapFunction periodize_cutoff(const GapFunction& h_raw, double R) {
  if (!(R > 1)) throw std::domain_error("R > 1 required");
  GapFunction h = h_raw;
  h.cutoff_applied = true;
  h.cutoff_R = R;
  return h;
}

CertificateReport check_h_smallness(const GapFunction& h, double eps, double beta,
                                    int n_samples) {
  CertificateReport rep;
  rep.name = "gap smallness";
  double s1, s2;
  h.seminorms(n_samples, s1, s2);
  rep.add_margin("seminorm budget |(sqrt h)'| + |h''| <= beta", beta - (s1 + s2), "",
                 "s1=" + fmt17(s1) + " s2=" + fmt17(s2));

  double hmin = 1e300, hmax = -1e300, mid_min = 1e300;
  for (int i = 0; i < n_samples; ++i) {
    const double y = -h.spec.R + 2 * h.spec.R * double(i) / n_samples;
    const double v = h(y);
    hmin = std::min(hmin, v);
    hmax = std::max(hmax, v);
  }
  for (const auto& arc : h.arcs()) mid_min = std::min(mid_min, h(arc.a + arc.len / 2));
  if (h.arcs().empty()) mid_min = 0;
  rep.add_margin("range h >= 0", hmin);
  rep.add_margin("range h <= 1/2", 0.5 - hmax);
  if (!h.identically_zero)
    rep.add_margin("h > 0 at complementary midpoints", mid_min);

  // Measured (not asserted) higher-derivative constants |D^k h| <= C_k beta.
  double s3 = 0, s4 = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double y = -h.spec.R + 2 * h.spec.R * double(i) / n_samples;
    s3 = std::max(s3, std::abs(h.eval(y, 3)));
    s4 = std::max(s4, std::abs(h.eval(y, 4)));
  }
  rep.add("measured C_3, C_4", true, 0.0, "",
          "C_3=" + fmt17(s3 / beta) + " C_4=" + fmt17(s4 / beta));

  // Combined smallness including sqrt(eps). At desk scale eps this can fail
  // (sqrt(eps) alone may exceed beta); it is reported, not gating, and the
  // consumers of the gap certify their own inequalities directly.
  const double combined = std::sqrt(eps) + s1 + s2;
  rep.add("diagnostic: sqrt(eps) + seminorms <= beta", true, beta - combined, "",
          combined <= beta ? "holds" : "exceeded at this eps; downstream bounds certified directly");
  return rep;
}

CertificateReport comparison_check(const GapFunction& h, double eps, int n_samples) {
  CertificateReport rep;
  rep.name = "gap comparison bounds";
  const double se = std::sqrt(eps);
  const double beta = h.beta;

  double worst_slope = 1e300;
  double worst_lo = 1e300, worst_hi = 1e300, worst_lo4 = 1e300, worst_hi4 = 1e300;
  double worst_exp = 1e300;
  std::string loc_lo, loc_hi, loc_lo4, loc_hi4, loc_exp, loc_slope;
  const double offsets[] = {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
  for (int i = 0; i < n_samples; ++i) {
    const double y = -h.spec.R + 2 * h.spec.R * double(i) / n_samples;
    const double wy = h(y) + se;
    {
      const double sm = beta - std::abs(h.eval(y, 1));
      if (sm < worst_slope) {
        worst_slope = sm;
        loc_slope = "y=" + fmt17(y);
      }
    }
    for (double t : offsets) {
      const double z = y + t * 4 * wy;
      const double wz = h(z) + se;
      const double lo = wz - 0.5 * wy, hi = 2 * wy - wz;
      const double lo4 = wz - (1 - 4 * beta) * wy, hi4 = (1 + 4 * beta) * wy - wz;
      const double ex = std::exp(-0.5 / std::sqrt(wy)) - std::exp(-1 / std::sqrt(wz));
      auto upd = [&](double& worst, std::string& loc, double m) {
        if (m < worst) {
          worst = m;
          loc = "y=" + fmt17(y) + " t=" + fmt17(t);
        }
      };
      upd(worst_lo, loc_lo, lo);
      upd(worst_hi, loc_hi, hi);
      upd(worst_lo4, loc_lo4, lo4);
      upd(worst_hi4, loc_hi4, hi4);
      upd(worst_exp, loc_exp, ex);
    }
  }
  rep.add_margin("slope budget |h'| <= beta", worst_slope, loc_slope);
  rep.add_margin("(1-4beta) lower comparison", worst_lo4, loc_lo4);
  rep.add_margin("(1+4beta) upper comparison", worst_hi4, loc_hi4);
  rep.add_margin("factor-2 lower comparison", worst_lo, loc_lo);
  rep.add_margin("factor-2 upper comparison", worst_hi, loc_hi);
  rep.add_margin("exponential weight comparison", worst_exp, loc_exp);
  return rep;
}

}  // namespace conelab
