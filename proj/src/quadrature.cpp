#include "weyl/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace weyl {

// Gauss-Legendre on [0,1]: nodes (1 +/- x_i)/2 for the [-1,1] abscissas.
const double Gauss4::node[4] = {
    0.5 - 0.43056815579702629, 0.5 - 0.16999052179242816,
    0.5 + 0.16999052179242816, 0.5 + 0.43056815579702629};
const double Gauss4::weight[4] = {
    0.17392742256872692, 0.32607257743127307,
    0.32607257743127307, 0.17392742256872692};

void composite_gauss(double a, double b, std::size_t panels,
                     const std::function<void(double, double)>& fn) {
  if (b <= a || panels == 0) return;
  double w = (b - a) / double(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    double lo = a + double(p) * w;
    for (int i = 0; i < 4; ++i) fn(lo + Gauss4::node[i] * w, Gauss4::weight[i] * w);
  }
}

double pairwise_sum(std::span<const double> xs) {
  std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (double x : xs) s += x;
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 1024) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t w = std::size_t(workers);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    std::size_t lo = n * t / w, hi = n * (t + 1) / w;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double xbar = 0, ybar = 0;
  for (std::size_t i = 0; i < n; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= double(n);
  ybar /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ybar - f.slope * xbar;
  f.residuals.resize(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    f.residuals[i] = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += f.residuals[i] * f.residuals[i];
  }
  f.slope_stderr = n > 2 ? std::sqrt(ss / double(n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace weyl
