#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace weyl {

// 4-point Gauss-Legendre rule on [0, 1].
struct Gauss4 {
  static const double node[4];
  static const double weight[4];
};

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
// fn(x, w) is called once per node; nodes never touch panel boundaries.
void composite_gauss(double a, double b, std::size_t panels,
                     const std::function<void(double, double)>& fn);

// Numerically stable tree reduction; the result does not depend on how the
// values were produced (worker count, chunking).
double pairwise_sum(std::span<const double> xs);

// Evaluate fn(i) for i in [0, n) across `workers` threads, each writing its
// own index range.  Deterministic by construction.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Least-squares line fit y = a + b x.
struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  std::vector<double> residuals;
};

LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace weyl
