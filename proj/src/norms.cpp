#include "weyl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "weyl/character.hpp"
#include "weyl/peeling.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

namespace {

constexpr double kPi = std::numbers::pi;

// |chi_{N rho}| and the |delta_J|^2 weight share the same sine factors, so
// evaluation is driven by the linear forms u_alpha(t_free) of the active
// (outside-the-J-span) positive roots over the chart coordinates.
struct FacetIntegrand {
  int N = 1;
  double p = 2;
  bool weighted = false;
  bool is_max = false;  // p = infinity
  double npow = 1;      // N^{|pos roots inside the J-span|}
  std::vector<double> a0;
  std::vector<std::array<double, 2>> coef;  // up to 2 chart coordinates
  int dim = 0;

  double operator()(double t1, double t2) const {
    double chi = npow;
    double w = 1;
    for (std::size_t i = 0; i < a0.size(); ++i) {
      double u = a0[i] + coef[i][0] * t1 + coef[i][1] * t2;
      double s = std::sin(kPi * u);
      chi *= std::sin(double(N) * kPi * u) / s;
      if (weighted) w *= 4.0 * s * s;
    }
    double v = std::abs(chi);
    if (is_max) return v;
    return std::pow(v, p) * w;
  }
};

FacetIntegrand make_integrand(const RootSystem& rs, const FacetChart& ch, double p,
                              int N, bool weighted) {
  FacetIntegrand f;
  f.N = N;
  f.p = p;
  f.weighted = weighted;
  f.is_max = std::isinf(p);
  f.dim = ch.dim();
  if (f.dim > 2) throw ResourceError("facet integrand supports dimension <= 2");
  const SubsystemTable& tbl = rs.subsystems();
  f.npow = std::pow(double(N), tbl.count(ch.J));
  for (int k = 0; k < rs.num_positive(); ++k) {
    int idx = rs.positive_idx[k];
    if (tbl.in_span(ch.J, idx)) continue;
    const dvec& alpha = rs.roots_d[idx];
    f.a0.push_back(ddot(alpha, ch.offset));
    std::array<double, 2> c{0.0, 0.0};
    for (int i = 0; i < f.dim; ++i) c[i] = ddot(alpha, ch.columns[i]);
    f.coef.push_back(c);
  }
  return f;
}

std::size_t panels_for(double len, double q_res, int N) {
  if (len <= 0) return 0;
  return std::size_t(std::max(1.0, std::ceil(q_res * double(N) * len)));
}

// Tensor Gauss over the chart simplex {t >= 0, sum m_f t_f <= 1}, rows along
// the first coordinate, pairwise-reduced so the result is independent of the
// worker count.  Returns the integral (or the max when integrand.is_max).
double tensor_integrate(const RootSystem& rs, const FacetChart& ch,
                        const FacetIntegrand& f, double q_res, int N,
                        const QuadratureSpec& quad, std::size_t* nodes_out) {
  int dim = ch.dim();
  if (dim == 0) {
    if (nodes_out) *nodes_out = 1;
    return f.is_max ? f(0, 0) : f(0, 0);
  }
  double m1 = double(rs.mark(ch.free_nodes[0]));
  double len1 = 1.0 / m1;
  std::size_t p1 = panels_for(len1, q_res, N);

  if (dim == 1) {
    if (4 * p1 > quad.node_budget)
      throw ResourceError("node budget exceeded; lower N, q_res, or the budget");
    if (nodes_out) *nodes_out = 4 * p1;
    std::vector<double> panel_sums(p1, 0.0);
    double w1 = len1 / double(p1);
    parallel_for(p1, quad.workers, [&](std::size_t pi) {
      double lo = double(pi) * w1;
      double acc = f.is_max ? 0.0 : 0.0;
      for (int i = 0; i < 4; ++i) {
        double x = lo + Gauss4::node[i] * w1;
        double v = f(x, 0);
        if (f.is_max)
          acc = std::max(acc, v);
        else
          acc += Gauss4::weight[i] * w1 * v;
      }
      panel_sums[pi] = acc;
    });
    if (f.is_max) return *std::max_element(panel_sums.begin(), panel_sums.end());
    return pairwise_sum(panel_sums);
  }

  // dim == 2: per outer node, an inner composite run over the remaining range
  double m2 = double(rs.mark(ch.free_nodes[1]));
  double w1 = len1 / double(p1);
  std::size_t rows = 4 * p1;
  std::vector<double> row_vals(rows, 0.0);
  std::size_t total_nodes = 0;
  std::vector<double> xs(rows), ws(rows);
  std::vector<std::size_t> inner_panels(rows);
  for (std::size_t pi = 0; pi < p1; ++pi) {
    double lo = double(pi) * w1;
    for (int i = 0; i < 4; ++i) {
      std::size_t row = 4 * pi + i;
      xs[row] = lo + Gauss4::node[i] * w1;
      ws[row] = Gauss4::weight[i] * w1;
      double len2 = (1.0 - m1 * xs[row]) / m2;
      inner_panels[row] = panels_for(len2, q_res, N);
      total_nodes += 4 * inner_panels[row];
    }
  }
  if (total_nodes > quad.node_budget)
    throw ResourceError("node budget exceeded; lower N, q_res, or the budget");
  if (nodes_out) *nodes_out = total_nodes;

  parallel_for(rows, quad.workers, [&](std::size_t row) {
    double x = xs[row];
    double len2 = (1.0 - m1 * x) / m2;
    std::size_t p2 = inner_panels[row];
    if (p2 == 0) return;
    double w2 = len2 / double(p2);
    double acc = 0.0;
    for (std::size_t pj = 0; pj < p2; ++pj) {
      double lo2 = double(pj) * w2;
      for (int i = 0; i < 4; ++i) {
        double y = lo2 + Gauss4::node[i] * w2;
        double v = f(x, y);
        if (f.is_max)
          acc = std::max(acc, v);
        else
          acc += Gauss4::weight[i] * w2 * v;
      }
    }
    row_vals[row] = f.is_max ? acc : ws[row] * acc;
  });
  if (f.is_max) return *std::max_element(row_vals.begin(), row_vals.end());
  return pairwise_sum(row_vals);
}

double mc_integrate(const RootSystem& rs, const FacetChart& ch, const FacetIntegrand& f,
                    const QuadratureSpec& quad, double* err_out, std::size_t* nodes_out) {
  int dim = ch.dim();
  if (dim > 2) throw ResourceError("Monte Carlo facet sampling supports dimension <= 2");
  std::mt19937_64 rng(quad.seed);
  std::exponential_distribution<double> expd(1.0);
  int n = quad.mc_samples;
  std::vector<std::array<double, 2>> pts(n, {0.0, 0.0});
  for (int s = 0; s < n; ++s) {
    // uniform on the solid unit simplex, then scaled by 1/m_f
    double e[3] = {expd(rng), expd(rng), expd(rng)};
    double tot = e[0] + e[1] + (dim == 2 ? e[2] : 0.0);
    for (int i = 0; i < dim; ++i)
      pts[s][i] = e[i] / tot / double(rs.mark(ch.free_nodes[i]));
  }
  std::vector<double> vals(n);
  parallel_for(std::size_t(n), quad.workers,
               [&](std::size_t s) { vals[s] = f(pts[s][0], pts[s][1]); });
  if (nodes_out) *nodes_out = std::size_t(n);
  double vol = ch.t_volume(rs);
  if (f.is_max) {
    if (err_out) *err_out = 0;
    return *std::max_element(vals.begin(), vals.end());
  }
  double mean = pairwise_sum(vals) / double(n);
  // batch means for the error bar
  int nb = quad.mc_batches;
  std::vector<double> bm(nb, 0.0);
  int per = n / nb;
  for (int b = 0; b < nb; ++b)
    bm[b] = pairwise_sum(std::span<const double>(vals).subspan(b * per, per)) / double(per);
  double var = 0;
  for (double x : bm) var += (x - mean) * (x - mean);
  var /= double(nb - 1) * double(nb);
  if (err_out) *err_out = std::sqrt(var) * vol;
  return mean * vol;
}

NormResult norm_impl(const RootSystem& rs, NodeMask J, double p, int N,
                     const QuadratureSpec& quad, bool weighted) {
  if (N <= 0) throw ValidationError("norm: N must be positive");
  if (!(p > 0) && !std::isinf(p)) throw ValidationError("norm: p must be positive");
  FacetChart ch = facet_chart(rs, J);
  if (ch.dim() > 2 && quad.scheme == QuadScheme::TENSOR_GAUSS)
    throw ResourceError("tensor quadrature supports facet dimension <= 2; use Monte Carlo");
  FacetIntegrand f = make_integrand(rs, ch, p, N, weighted);

  double scale = 1.0;
  if (weighted)
    scale = double(weyl_order(rs)) / double(cartan_index(rs));

  NormResult res;
  if (quad.scheme == QuadScheme::MONTE_CARLO) {
    double err = 0;
    double integral = mc_integrate(rs, ch, f, quad, &err, &res.nodes);
    if (f.is_max) {
      res.value = integral;
      res.err_est = err;
      return res;
    }
    res.value = std::pow(scale * integral, 1.0 / p);
    res.err_est = res.value > 0 ? res.value * err / std::max(integral, 1e-300) / p : 0.0;
    return res;
  }

  double integral = tensor_integrate(rs, ch, f, quad.q_res, N, quad, &res.nodes);
  if (f.is_max) {
    res.value = integral;
    if (quad.estimate_error) {
      double coarse = tensor_integrate(rs, ch, f, quad.q_res / 2, N, quad, nullptr);
      res.err_est = std::abs(integral - coarse);
    }
    return res;
  }
  res.value = std::pow(scale * integral, 1.0 / p);
  if (quad.estimate_error) {
    double coarse = tensor_integrate(rs, ch, f, quad.q_res / 2, N, quad, nullptr);
    res.err_est = std::abs(res.value - std::pow(scale * coarse, 1.0 / p));
  }
  return res;
}

}  // namespace

NormResult lp_norm_facet(const RootSystem& rs, NodeMask J, double p, int N,
                         const QuadratureSpec& quad) {
  return norm_impl(rs, J, p, N, quad, false);
}

NormResult lp_norm_weighted(const RootSystem& rs, NodeMask J, double p, int N,
                            const QuadratureSpec& quad) {
  return norm_impl(rs, J, p, N, quad, true);
}

NormResult lp_norm_region(const RootSystem& rs, NodeMask J, const std::vector<int>& perm0,
                          double c, double p, int N, const QuadratureSpec& quad) {
  if (N <= 0) throw ValidationError("norm: N must be positive");
  if (!(p > 0)) throw ValidationError("norm: p must be positive");
  if (!(c > 0)) throw ValidationError("norm: c must be positive");
  double invN = 1.0 / double(N);
  if (invN >= c)
    throw EmptyRegionError("region 1/N < t <= c is empty; raise N or c");

  int r = rs.rank;
  if (int(perm0.size()) != r + 1) throw ValidationError("region norm: bad permutation");
  int k = r - __builtin_popcount(J);
  NodeMask tail = 0;
  for (int i = k + 1; i <= r; ++i) tail |= NodeMask(1) << perm0[i];
  if (tail != J)
    throw ValidationError("region norm: J must be the size-(r-k) tail of perm0");
  if (k > 2) throw ResourceError("region quadrature supports chain depth <= 2");

  FacetChart ch = facet_chart(rs, J, perm0[0]);
  FacetIntegrand f = make_integrand(rs, ch, p, N, false);

  // map chain variables s_i = t_{perm0[i]} onto the chart coordinate slots
  std::array<int, 2> slot{0, 0};
  for (int i = 1; i <= k; ++i) {
    auto it = std::find(ch.free_nodes.begin(), ch.free_nodes.end(), perm0[i]);
    if (it == ch.free_nodes.end())
      throw InternalConsistencyError("region norm: chain node missing from chart");
    slot[i - 1] = int(it - ch.free_nodes.begin());
  }

  NormResult res;
  auto run = [&](double q_res, std::size_t* nodes_out) {
    std::size_t p1 = panels_for(c - invN, q_res, N);
    std::vector<double> sums(p1, 0.0);
    std::size_t count = 0;
    if (k == 1) {
      count = 4 * p1;
      if (count > quad.node_budget) throw ResourceError("node budget exceeded");
      double w1 = (c - invN) / double(p1);
      parallel_for(p1, quad.workers, [&](std::size_t pi) {
        double lo = invN + double(pi) * w1;
        double acc = 0;
        for (int i = 0; i < 4; ++i) {
          double s1 = lo + Gauss4::node[i] * w1;
          double t1 = slot[0] == 0 ? s1 : 0.0;
          double t2 = slot[0] == 1 ? s1 : 0.0;
          acc += Gauss4::weight[i] * w1 * f(t1, t2);
        }
        sums[pi] = acc;
      });
    } else {
      double w1 = (c - invN) / double(p1);
      // node estimate: inner runs over (1/N, s1]
      count = 0;
      for (std::size_t pi = 0; pi < p1; ++pi)
        count += 4 * 4 * panels_for(c - invN, q_res, N);  // upper bound
      if (count > quad.node_budget) throw ResourceError("node budget exceeded");
      parallel_for(p1, quad.workers, [&](std::size_t pi) {
        double lo = double(pi) * w1 + invN;
        double acc = 0;
        for (int i = 0; i < 4; ++i) {
          double s1 = lo + Gauss4::node[i] * w1;
          std::size_t p2 = panels_for(s1 - invN, q_res, N);
          if (p2 == 0) continue;
          double w2 = (s1 - invN) / double(p2);
          double inner = 0;
          for (std::size_t pj = 0; pj < p2; ++pj) {
            double lo2 = invN + double(pj) * w2;
            for (int i2 = 0; i2 < 4; ++i2) {
              double s2 = lo2 + Gauss4::node[i2] * w2;
              double t[2] = {0, 0};
              t[slot[0]] = s1;
              t[slot[1]] = s2;
              inner += Gauss4::weight[i2] * w2 * f(t[0], t[1]);
            }
          }
          acc += Gauss4::weight[i] * w1 * inner;
        }
        sums[pi] = acc;
      });
    }
    if (nodes_out) *nodes_out = count;
    return pairwise_sum(sums);
  };

  double integral = run(quad.q_res, &res.nodes);
  res.value = std::pow(integral, 1.0 / p);
  if (quad.estimate_error) {
    double coarse = run(quad.q_res / 2, nullptr);
    res.err_est = std::abs(res.value - std::pow(coarse, 1.0 / p));
  }
  return res;
}

double facet_measure(const RootSystem& rs, NodeMask J) {
  return facet_chart(rs, J).t_volume(rs);
}

long orbit_dimension(const RootSystem& rs, NodeMask J, int k) {
  const SubsystemTable& tbl = rs.subsystems();
  return k + 2L * (rs.num_positive() - tbl.count(J));
}

namespace {
bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }
}  // namespace

Predicted predicted_exponent(const RootSystem& rs, Bound b, int k, long n, double p) {
  if (k < 0 || k > rs.rank) throw ValidationError("predicted_exponent: need 0 <= k <= r");
  double d = rs.group_dim();
  double r = rs.rank;
  double half = (d - r) / 2.0;

  auto pk_of = [&](int kk) -> double {
    if (kk == 0) return 0.0;
    return critical_exponents(rs).p[kk].to_double();
  };

  switch (b) {
    case Bound::CharacterSubmanifold: {
      if (!(p > 0)) throw RangeError("character bound: p must be positive");
      double pk = pk_of(k);
      if (k == 0 || p > pk + 1e-12) return {half - double(k) / p, 0.0};
      if (near(p, pk)) return {half - double(k) / pk, 1.0 / pk};
      return {half - double(k) / pk, 0.0};
    }
    case Bound::MatrixCoefficientSum: {
      if (p < 2) throw RangeError("matrix-coefficient bound: stated for p >= 2");
      double lp = (rs.rank == 1 && k == 1 && near(p, 2.0)) ? 0.5 : 0.0;
      return {half - double(k) / p, lp};
    }
    case Bound::LaplaceEigenfunction: {
      if (p < 2) throw RangeError("eigenfunction bound: stated for p >= 2");
      return {(d - 2) / 2.0 - double(k) / p, 0.0};
    }
    case Bound::InvariantSubmanifold: {
      if (p < 2) throw RangeError("invariant-submanifold bound: stated for p >= 2");
      double pk = pk_of(k);
      double kpk = k == 0 ? 0.0 : double(critical_exponents(rs).k_over_pk[k]);
      if (double(n) - double(k) - 2.0 * kpk < -1e-9)
        throw ValidationError("invariant-submanifold bound: n < k + 2k/p_k");
      if (p > 2.0 + pk + 1e-12) return {half - double(n) / p, 0.0};
      if (near(p, 2.0 + pk))
        return {half - double(n) / (2.0 + pk), 1.0 / (2.0 + pk)};
      return {half - kpk - (double(n) - double(k) - 2.0 * kpk) / p, 0.0};
    }
    case Bound::InvariantSubmanifoldL2: {
      if (!near(p, 2.0)) throw RangeError("orbit L2 bound: stated only for p = 2");
      return {half - (double(n) - double(k)) / 2.0, 0.0};
    }
    case Bound::GlobalCharacter: {
      if (p < 2) throw RangeError("global character bound: stated for p >= 2");
      double pc = 2.0 * d / (d - r);
      if (p > pc + 1e-12) return {half - d / p, 0.0};
      if (near(p, pc)) return {0.0, (d - r) / (2.0 * d)};
      return {0.0, 0.0};
    }
  }
  throw ValidationError("predicted_exponent: unknown bound selector");
}

ScanResult scan_exponent(const std::function<double(int)>& norm_at_N, double p,
                         const std::vector<int>& N_list, Predicted pred,
                         bool log_correct) {
  (void)p;
  if (N_list.size() < 4)
    throw ValidationError("scan_exponent: need at least 4 values of N");
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (N_list[i] <= N_list[i - 1])
      throw ValidationError("scan_exponent: N_list must be strictly increasing");

  ScanResult sr;
  sr.N_values = N_list;
  sr.predicted = pred.exponent;
  sr.log_power = pred.log_power;
  sr.log_corrected = log_correct && pred.log_power != 0.0;

  std::vector<double> xs, ys;
  for (int N : N_list) {
    double v = norm_at_N(N);
    if (!(v > 0) || !std::isfinite(v))
      throw Error("scan_exponent: norm at N=" + std::to_string(N) + " is not finite positive");
    sr.norms.push_back(v);
    double y = std::log(v);
    if (sr.log_corrected) y -= pred.log_power * std::log(std::log(double(N)));
    xs.push_back(std::log(double(N)));
    ys.push_back(y);
  }

  LineFit fit = fit_line(xs, ys);
  // transient guard: drop the smallest N when it sits far off the line
  if (N_list.size() >= 5 &&
      std::abs(fit.residuals.front()) > 2.0 * fit.slope_stderr) {
    std::vector<double> xs2(xs.begin() + 1, xs.end()), ys2(ys.begin() + 1, ys.end());
    fit = fit_line(xs2, ys2);
    sr.dropped_first = true;
  }
  sr.fitted_slope = fit.slope;
  sr.slope_stderr = fit.slope_stderr;
  return sr;
}

double nested_power_integral(const std::vector<double>& a, double p, double N, double c) {
  if (a.empty()) throw ValidationError("nested_power_integral: empty exponent list");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i - 1] > a[i]))
      throw ValidationError("nested_power_integral: exponents must be strictly decreasing");
  if (!(a.back() > 0)) throw ValidationError("nested_power_integral: exponents must be positive");
  if (!(p > 0)) throw ValidationError("nested_power_integral: p must be positive");
  if (!(N > 1.0 / c)) throw PreconditionError("nested_power_integral: need N > 1/c");

  // log substitution s = e^u turns each level into int e^{(1 - a_i p) u} du
  double lo = -std::log(N);
  const double per_efold = 4.0;

  std::function<double(std::size_t, double)> level = [&](std::size_t i,
                                                          double upper) -> double {
    if (i == a.size()) return 1.0;
    double b = 1.0 - a[i] * p;
    if (upper <= lo) return 0.0;
    std::size_t panels = std::size_t(std::max(4.0, std::ceil(per_efold * (upper - lo))));
    double w = (upper - lo) / double(panels);
    double acc = 0;
    for (std::size_t pi = 0; pi < panels; ++pi) {
      double base = lo + double(pi) * w;
      for (int g = 0; g < 4; ++g) {
        double u = base + Gauss4::node[g] * w;
        acc += Gauss4::weight[g] * w * std::exp(b * u) * level(i + 1, u);
      }
    }
    return acc;
  };

  double integral = level(0, std::log(c));
  return std::pow(integral, 1.0 / p);
}

}  // namespace weyl
