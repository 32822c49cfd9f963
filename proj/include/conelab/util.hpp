#ifndef CONELAB_UTIL_HPP
#define CONELAB_UTIL_HPP

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace conelab {

inline double sq(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

/// Full-precision decimal formatting; 17 significant digits round-trip
/// exactly through double, which keeps all CSV/JSON output lossless.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  v.back() = b;
  return v;
}

/// Least squares fit y = slope*x + intercept.
inline void linfit(const std::vector<double>& x, const std::vector<double>& y,
                   double& slope, double& intercept) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linfit: need >= 2 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::runtime_error("linfit: degenerate abscissae");
  slope = (n * sxy - sx * sy) / det;
  intercept = (sy * sxx - sx * sxy) / det;
}

/// Simple CSV emitter; every cell printed with %.17g so re-runs of a
/// deterministic pipeline are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : f_(std::fopen(path.c_str(), "wb")) {
    if (!f_) throw std::runtime_error("cannot open " + path);
  }
  ~CsvWriter() {
    if (f_) std::fclose(f_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i)
      std::fprintf(f_, "%s%s", names[i].c_str(), i + 1 < names.size() ? "," : "\n");
  }
  void row(const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i)
      std::fprintf(f_, "%.17g%s", vals[i], i + 1 < vals.size() ? "," : "\n");
  }

 private:
  std::FILE* f_;
};

}  // namespace conelab

#endif
