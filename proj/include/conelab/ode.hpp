#ifndef CONELAB_ODE_HPP
#define CONELAB_ODE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace conelab {

/// Adaptive Dormand-Prince 5(4) with the classical quartic dense output.
/// The continuous extension is 4th order, so interpolated values between
/// accepted nodes carry an error O(tol) and first derivatives of the
/// interpolant an error O(tol^(4/5)); certificates that quote "C * tol"
/// use C from this order.
class DormandPrince {
 public:
  using Rhs = std::function<void(double t, const double* y, double* dydt)>;

  struct Step {
    double t0 = 0, h = 0;
    // rcont[0..4][dim] Hairer-style dense coefficients
    std::vector<double> r1, r2, r3, r4, r5;
  };

  struct Solution {
    int dim = 0;
    std::vector<double> nodes;            // accepted t values, strictly monotone
    std::vector<std::vector<double>> y;   // state at nodes
    std::vector<Step> steps;              // nodes.size()-1 entries

    /// Interpolated state at t (t within [nodes.front(), nodes.back()]).
    void eval(double t, double* out) const {
      const int k = locate(t);
      const Step& s = steps[k];
      const double th = (t - s.t0) / s.h;
      const double th1 = 1.0 - th;
      for (int d = 0; d < dim; ++d)
        out[d] = s.r1[d] + th * (s.r2[d] + th1 * (s.r3[d] + th * (s.r4[d] + th1 * s.r5[d])));
    }

    /// d/dt of the dense polynomial at t.
    void eval_derivative(double t, double* out) const {
      const int k = locate(t);
      const Step& s = steps[k];
      const double th = (t - s.t0) / s.h;
      for (int d = 0; d < dim; ++d) {
        // p(th) = r1 + th*(r2 + (1-th)*(r3 + th*(r4 + (1-th)*r5)))
        const double inner = s.r4[d] + (1 - th) * s.r5[d];
        const double dinner = -s.r5[d];
        const double mid = s.r3[d] + th * inner;
        const double dmid = inner + th * dinner;
        out[d] = (s.r2[d] + (1 - 2 * th) * mid + th * (1 - th) * dmid) / s.h;
      }
    }

    int locate(double t) const {
      if (nodes.empty()) throw std::runtime_error("empty ode solution");
      if (t < nodes.front() - 1e-12 * std::abs(nodes.front()) || t > nodes.back() * (1 + 1e-12))
        throw std::out_of_range("ode interpolation out of range");
      auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
      int k = int(it - nodes.begin()) - 1;
      return std::clamp(k, 0, int(steps.size()) - 1);
    }
  };

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-4;
    double h_min = 1e-14;
    double h_max = 0.0;  // 0 = no cap
    /// Optional guard invoked on every accepted node; throw to abort.
    std::function<void(double t, const double* y)> on_accept;
    /// Optional stop event g(t,y); integration halts (with bisection onto the
    /// root) the first time g changes sign from its seed value.
    std::function<double(double t, const double* y)> event;
  };

  static Solution integrate(const Rhs& f, double t0, double t1,
                            std::vector<double> y0, const Options& opt) {
    const int n = int(y0.size());
    Solution sol;
    sol.dim = n;
    sol.nodes.push_back(t0);
    sol.y.push_back(y0);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> yt(n), y5(n), y4(n), err(n);
    double t = t0;
    std::vector<double> y = y0;
    f(t, y.data(), k1.data());

    double ev0 = 0.0;
    bool have_event = bool(opt.event);
    if (have_event) ev0 = opt.event(t, y.data());

    double h = opt.h_init * (t1 >= t0 ? 1 : -1);
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    if (opt.h_max > 0) h = dir * std::min(std::abs(h), opt.h_max);

    int rejects_in_row = 0;
    while (dir * (t1 - t) > 0) {
      if (dir * (t + h - t1) > 0) h = t1 - t;
      if (std::abs(h) < opt.h_min)
        throw std::runtime_error("ode step size underflow at t=" + std::to_string(t));

      stage(f, t, y, h, k1, k2, k3, k4, k5, k6, k7, yt, y5, y4);

      double errnorm = 0;
      for (int d = 0; d < n; ++d) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[d]), std::abs(y5[d]));
        const double e = (y5[d] - y4[d]) / sc;
        errnorm += e * e;
      }
      errnorm = std::sqrt(errnorm / n);

      if (errnorm <= 1.0) {
        Step st;
        st.t0 = t;
        st.h = h;
        dense(y, y5, h, k1, k3, k4, k5, k6, k7, st);
        sol.steps.push_back(std::move(st));

        t += h;
        std::swap(y, y5);
        f(t, y.data(), k1.data());  // FSAL re-evaluated; keeps logic simple
        sol.nodes.push_back(t);
        sol.y.push_back(y);
        if (opt.on_accept) opt.on_accept(t, y.data());

        if (have_event) {
          double ev = opt.event(t, y.data());
          if (ev0 == 0.0) ev0 = ev;
          if (ev * ev0 < 0) {  // bracketed: bisect inside the last step
            double lo = sol.nodes[sol.nodes.size() - 2], hi = t;
            std::vector<double> ym(n);
            for (int it = 0; it < 80; ++it) {
              double mid = 0.5 * (lo + hi);
              sol.eval(mid, ym.data());
              if (opt.event(mid, ym.data()) * ev0 < 0)
                hi = mid;
              else
                lo = mid;
            }
            sol.eval(hi, ym.data());
            sol.nodes.back() = hi;
            sol.y.back() = ym;
            sol.steps.back().h = hi - sol.steps.back().t0;  // truncate dense range
            return sol;
          }
        }
        rejects_in_row = 0;
        double fac = 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
      } else {
        if (++rejects_in_row > 60)
          throw std::runtime_error("ode: repeated step rejection at t=" + std::to_string(t));
        h *= std::max(0.9 * std::pow(errnorm, -0.2), 0.1);
      }
      if (opt.h_max > 0 && std::abs(h) > opt.h_max) h = dir * opt.h_max;
    }
    return sol;
  }

 private:
  static void stage(const Rhs& f, double t, const std::vector<double>& y, double h,
                    std::vector<double>& k1, std::vector<double>& k2,
                    std::vector<double>& k3, std::vector<double>& k4,
                    std::vector<double>& k5, std::vector<double>& k6,
                    std::vector<double>& k7, std::vector<double>& yt,
                    std::vector<double>& y5, std::vector<double>& y4) {
    const int n = int(y.size());
    auto comb = [&](std::initializer_list<std::pair<const std::vector<double>*, double>> terms,
                    std::vector<double>& out) {
      for (int d = 0; d < n; ++d) {
        double acc = y[d];
        for (auto& [k, a] : terms) acc += h * a * (*k)[d];
        out[d] = acc;
      }
    };
    comb({{&k1, 1.0 / 5}}, yt);
    f(t + h / 5, yt.data(), k2.data());
    comb({{&k1, 3.0 / 40}, {&k2, 9.0 / 40}}, yt);
    f(t + 3 * h / 10, yt.data(), k3.data());
    comb({{&k1, 44.0 / 45}, {&k2, -56.0 / 15}, {&k3, 32.0 / 9}}, yt);
    f(t + 4 * h / 5, yt.data(), k4.data());
    comb({{&k1, 19372.0 / 6561}, {&k2, -25360.0 / 2187}, {&k3, 64448.0 / 6561}, {&k4, -212.0 / 729}}, yt);
    f(t + 8 * h / 9, yt.data(), k5.data());
    comb({{&k1, 9017.0 / 3168}, {&k2, -355.0 / 33}, {&k3, 46732.0 / 5247}, {&k4, 49.0 / 176}, {&k5, -5103.0 / 18656}}, yt);
    f(t + h, yt.data(), k6.data());
    comb({{&k1, 35.0 / 384}, {&k3, 500.0 / 1113}, {&k4, 125.0 / 192}, {&k5, -2187.0 / 6784}, {&k6, 11.0 / 84}}, y5);
    f(t + h, y5.data(), k7.data());
    static constexpr double b4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
    for (int d = 0; d < n; ++d)
      y4[d] = y[d] + h * (b4[0] * k1[d] + b4[2] * k3[d] + b4[3] * k4[d] + b4[4] * k5[d] +
                          b4[5] * k6[d] + b4[6] * k7[d]);
  }

  static void dense(const std::vector<double>& y0, const std::vector<double>& y1, double h,
                    const std::vector<double>& k1, const std::vector<double>& k3,
                    const std::vector<double>& k4, const std::vector<double>& k5,
                    const std::vector<double>& k6, const std::vector<double>& k7, Step& st) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
    const int n = int(y0.size());
    st.r1.resize(n);
    st.r2.resize(n);
    st.r3.resize(n);
    st.r4.resize(n);
    st.r5.resize(n);
    for (int d = 0; d < n; ++d) {
      st.r1[d] = y0[d];
      st.r2[d] = y1[d] - y0[d];
      st.r3[d] = h * k1[d] - st.r2[d];
      st.r4[d] = st.r2[d] - h * k7[d] - st.r3[d];
      st.r5[d] = h * (d1 * k1[d] + d3 * k3[d] + d4 * k4[d] + d5 * k5[d] + d6 * k6[d] + d7 * k7[d]);
    }
  }
};

}  // namespace conelab

#endif
