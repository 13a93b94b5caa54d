#include "weyl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "weyl/alcove.hpp"
#include "weyl/character.hpp"
#include "weyl/norms.hpp"
#include "weyl/peeling.hpp"
#include "weyl/root_system.hpp"
#include "weyl/weyl_group.hpp"

namespace weyl::cli {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<int> parse_int_list(const std::string& s, char sep) {
  std::vector<int> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

// point rows: either t_1..t_r or t_0..t_r per line
std::vector<dvec> parse_points(const std::string& text, const RootSystem& rs) {
  std::vector<dvec> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    dvec row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      if (cell.empty()) continue;
      row.push_back(std::stod(cell));
    }
    if (row.empty()) continue;
    if (int(row.size()) == rs.rank + 1) {
      row.erase(row.begin());  // drop t_0; it is determined by the rest
    } else if (int(row.size()) != rs.rank) {
      throw ValidationError("point row must have r or r+1 wall distances");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* regime_str(CharRegime r) {
  switch (r) {
    case CharRegime::REGULAR_RATIO: return "regular_ratio";
    case CharRegime::FACET_LIMIT: return "facet_limit";
    case CharRegime::ALTERNATING_SUM: return "alternating_sum";
  }
  return "?";
}

double effective_c(const RunConfig& cfg, const RootSystem& rs) {
  return cfg.c > 0 ? cfg.c : default_barycentric_c(rs);
}

QuadratureSpec quad_from(const RunConfig& cfg) {
  QuadratureSpec q;
  q.q_res = cfg.q_res;
  q.seed = cfg.seed;
  q.node_budget = cfg.node_budget;
  q.workers = cfg.workers;
  return q;
}

struct NormPlan {
  NodeMask J = 0;
  int k = 0;
  Bound bound = Bound::CharacterSubmanifold;
  long n = 0;
};

NormPlan plan_norm(const RootSystem& rs, const std::string& mode,
                   const std::vector<int>& J_nodes, double p) {
  NormPlan plan;
  plan.J = nodes_mask(J_nodes);
  plan.k = rs.rank - int(J_nodes.size());
  if (mode == "facet" || mode == "region") {
    plan.bound = Bound::CharacterSubmanifold;
    plan.n = plan.k;
  } else if (mode == "weighted") {
    plan.n = orbit_dimension(rs, plan.J, plan.k);
    plan.bound = std::abs(p - 2.0) < 1e-12 ? Bound::InvariantSubmanifoldL2
                                           : Bound::InvariantSubmanifold;
  } else {
    throw ValidationError("mode must be facet, weighted, or region");
  }
  return plan;
}

double run_norm(const RootSystem& rs, const NormPlan& plan, const std::string& mode,
                double p, int N, double c, const QuadratureSpec& quad,
                NormResult* full = nullptr) {
  NormResult r;
  if (mode == "facet") {
    r = lp_norm_facet(rs, plan.J, p, N, quad);
  } else if (mode == "weighted") {
    r = lp_norm_weighted(rs, plan.J, p, N, quad);
  } else {
    auto opt = optimal_peeling(rs, rs.subsystems());
    r = lp_norm_region(rs, plan.J, opt.perm, c, p, N, quad);
  }
  if (full) *full = r;
  return r.value;
}

// ---- verify suite ----

struct Check {
  std::string name;
  enum { PASS, FAIL, SKIP } status;
  std::string detail;
};

dvec sample_interior_t(const RootSystem& rs, std::mt19937_64& rng, double min_dist) {
  std::exponential_distribution<double> expd(1.0);
  for (int tries = 0; tries < 100000; ++tries) {
    // t_j = (e_j / m_j) / sum e scaled onto the affine slice
    std::vector<double> e(rs.rank + 1);
    double tot = 0;
    for (int j = 0; j <= rs.rank; ++j) {
      e[j] = expd(rng);
      tot += e[j];
    }
    dvec t(rs.rank + 1);
    bool ok = true;
    for (int j = 0; j <= rs.rank; ++j) {
      t[j] = e[j] / tot / double(rs.mark(j));
      ok = ok && t[j] >= min_dist;
    }
    if (!ok) continue;
    return dvec(t.begin() + 1, t.end());
  }
  throw Error("sample_interior_t: rejection failed; min_dist too large");
}

void check_denominator_identity(std::vector<Check>& out, std::uint64_t cap,
                                std::uint64_t seed) {
  for (auto [f, r] : {std::pair{'A', 2}, {'B', 2}, {'C', 3}, {'G', 2}}) {
    RootSystem rs = build_root_system(f, r);
    std::string name = "denominator_identity_" + rs.name();
    if (weyl_order(rs) > cap) {
      out.push_back({name, Check::SKIP, "weyl_cap below |W|"});
      continue;
    }
    WeylGroup W = weyl_group(rs, cap);
    std::mt19937_64 rng(seed ^ 0x11);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      AlcovePoint pt = point_from_t(rs, sample_interior_t(rs, rng, 0.1));
      cplx prod = weyl_denominator(rs, pt.h);
      cplx sum = 0;
      for (std::size_t s = 0; s < W.size(); ++s) {
        double phase = 0;
        for (int q = 0; q < rs.ambient_dim; ++q)
          phase += ddot(W.mats_d[s][q], pt.h) * rs.rho_d[q];
        sum += double(W.dets[s]) * cplx(std::cos(2 * M_PI * phase), std::sin(2 * M_PI * phase));
      }
      worst = std::max(worst, std::abs(prod - sum) / std::abs(prod));
    }
    out.push_back({name, worst < 1e-10 ? Check::PASS : Check::FAIL,
                   "max relative error " + fmt(worst)});
  }
}

void check_decomposition(std::vector<Check>& out, std::uint64_t cap, std::uint64_t seed) {
  for (auto [f, r, jnode] : {std::tuple{'A', 2, 1}, {'B', 2, 1}, {'C', 3, 2}, {'G', 2, 2}}) {
    RootSystem rs = build_root_system(f, r);
    std::string name = "decomposition_" + rs.name();
    if (weyl_order(rs) > cap) {
      out.push_back({name, Check::SKIP, "weyl_cap below |W|"});
      continue;
    }
    WeylGroup W = weyl_group(rs, cap);
    dvec mu = dscale(3.0, rs.rho_d);
    std::mt19937_64 rng(seed ^ 0x22);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      AlcovePoint pt = point_from_t(rs, sample_interior_t(rs, rng, 0.1));
      worst = std::max(worst,
                       decomposition_residual(rs, W, pt.h, mu, NodeMask(1) << jnode));
    }
    out.push_back({name, worst < 1e-9 ? Check::PASS : Check::FAIL,
                   "max relative residual " + fmt(worst)});
  }
}

void check_orthonormality(std::vector<Check>& out, const RunConfig& cfg) {
  for (auto [f, r, tol] : {std::tuple{'A', 1, 1e-6}, {'A', 2, 1e-4}}) {
    RootSystem rs = build_root_system(f, r);
    QuadratureSpec quad = quad_from(cfg);
    double worst = 0;
    for (int N : {8, 32, 128}) {
      NormResult nr = lp_norm_weighted(rs, 0, 2.0, N, quad);
      double v = nr.value * nr.value / double(weyl_order(rs));
      worst = std::max(worst, std::abs(v - 1.0));
    }
    out.push_back({"orthonormality_" + rs.name(), worst < tol ? Check::PASS : Check::FAIL,
                   "max |value - 1| = " + fmt(worst)});
  }
}

void check_partition(std::vector<Check>& out, const RunConfig& cfg, double c_scale) {
  for (auto [f, r] : {std::pair{'A', 2}, {'G', 2}}) {
    RootSystem rs = build_root_system(f, r);
    double c = effective_c(cfg, rs) * c_scale;
    std::mt19937_64 rng(cfg.seed ^ 0x33);
    bool ok = true;
    std::string why;
    for (int N : {32, 256}) {
      for (int i = 0; i < 10000 && ok; ++i) {
        AlcovePoint pt = point_from_t(rs, sample_interior_t(rs, rng, 0.0));
        BssCell cell = classify_bss(rs, pt.h, N, c);
        if (cell.outside || (cell.J & ~cell.K) != 0 || cell.K == full_mask(rs.rank)) {
          ok = false;
          why = "bad cell";
          break;
        }
        if (!bss_cell_contains(rs, cell.K, cell.J, pt.h, N, c)) {
          ok = false;
          why = "cell predicate rejects its own point";
          break;
        }
        // the predicate of any other cell must reject the point
        NodeMask other_K = cell.K ^ 1u;
        if (other_K != full_mask(rs.rank) &&
            bss_cell_contains(rs, other_K, cell.J & other_K, pt.h, N, c)) {
          ok = false;
          why = "two cells overlap";
          break;
        }
      }
    }
    out.push_back({"partition_" + rs.name() + (c_scale == 1.0 ? "" : "_c_half"),
                   ok ? Check::PASS : Check::FAIL, why});
  }
}

void check_wall_distance(std::vector<Check>& out, const RunConfig& cfg, double c_scale) {
  // points of the barycentric cell around a facet stay at least c away from
  // every hyperplane of a root outside the facet subsystem
  for (auto [f, r] : {std::pair{'A', 2}, {'G', 2}}) {
    RootSystem rs = build_root_system(f, r);
    double c = effective_c(cfg, rs) * c_scale;
    const SubsystemTable& tbl = rs.subsystems();
    std::mt19937_64 rng(cfg.seed ^ 0x44);
    double worst = 1e9;
    for (int i = 0; i < 5000; ++i) {
      AlcovePoint pt = point_from_t(rs, sample_interior_t(rs, rng, 0.0));
      NodeMask K = 0;
      for (int j = 0; j <= rs.rank; ++j)
        if (pt.t[j] <= c) K |= NodeMask(1) << j;
      if (K == full_mask(rs.rank)) continue;
      for (int k = 0; k < rs.num_positive(); ++k) {
        int idx = rs.positive_idx[k];
        if (tbl.in_span(K, idx)) continue;
        double u = ddot(rs.roots_d[idx], pt.h);
        double dist = std::abs(u - std::round(u));
        worst = std::min(worst, dist);
      }
    }
    out.push_back({"wall_distance_" + rs.name() + (c_scale == 1.0 ? "" : "_c_half"),
                   worst > c * 0.999 ? Check::PASS : Check::FAIL,
                   "min distance " + fmt(worst) + " vs c = " + fmt(c)});
  }
}

void check_marks(std::vector<Check>& out, const RunConfig& cfg, bool corrupt) {
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  std::vector<long> marks = rs.marks;
  if (corrupt && !marks.empty()) marks[0] += 1;
  // affine relation t_0 + sum m_j t_j = 1 on random points
  std::mt19937_64 rng(cfg.seed ^ 0x55);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    dvec h(rs.ambient_dim);
    for (auto& x : h) x = uni(rng);
    dvec t = t_coords(rs, h);
    double s = t[0];
    for (int j = 1; j <= rs.rank; ++j) s += double(marks[j - 1]) * t[j];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  out.push_back({"affine_relation_" + rs.name(), worst < 1e-9 ? Check::PASS : Check::FAIL,
                 "max |t_0 + sum m t - 1| = " + fmt(worst)});
}

}  // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    try {
      if (key == "family") cfg.family = val.at(0);
      else if (key == "rank") cfg.rank = std::stoi(val);
      else if (key == "c") cfg.c = std::stod(val);
      else if (key == "q_res") cfg.q_res = std::stod(val);
      else if (key == "weyl_cap") cfg.weyl_cap = std::stoull(val);
      else if (key == "node_budget") cfg.node_budget = std::stoull(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "format") cfg.format = val;
      else if (key == "out") cfg.out = val;
      else if (key == "workers") cfg.workers = std::stoi(val);
      else throw ValidationError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

void validate(const RunConfig& cfg) {
  family_from_char(cfg.family);
  if (cfg.rank <= 0) throw ValidationError("rank must be positive");
  if (cfg.c < 0) throw ValidationError("c must be positive");
  if (cfg.q_res < 4) throw ValidationError("q_res must be at least 4");
  if (cfg.weyl_cap == 0) throw ValidationError("weyl_cap must be positive");
  if (cfg.node_budget == 0) throw ValidationError("node_budget must be positive");
  if (cfg.workers <= 0) throw ValidationError("workers must be positive");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ValidationError("format must be json or csv");
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& fallback) {
  if (cfg.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::trunc);
  if (!f) throw Error("cannot write " + cfg.out);
  f << text;
}

int cmd_roots(const RunConfig& cfg, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  std::string text;
  if (cfg.format == "json") {
    text = root_system_json(rs) + "\n";
  } else {
    std::ostringstream ss;
    ss << "family,rank,ambient_dim,group_dim,num_positive,marks\n";
    ss << cfg.family << ',' << cfg.rank << ',' << rs.ambient_dim << ',' << rs.group_dim()
       << ',' << rs.num_positive() << ',';
    for (std::size_t i = 0; i < rs.marks.size(); ++i)
      ss << (i ? ":" : "") << rs.marks[i];
    ss << '\n';
    text = ss.str();
  }
  emit(cfg, text, os);
  return kOk;
}

int cmd_peel(const RunConfig& cfg, bool csv_table, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  const SubsystemTable& tbl = rs.subsystems();
  auto opt = optimal_peeling(rs, tbl);
  auto rep = verify_peeling_inequality(rs, tbl, opt.perm);

  std::ostringstream ss;
  if (csv_table) {
    if (cfg.rank > 4)
      throw ValidationError("full permutation table export is limited to rank <= 4");
    ss << "perm,n_sequence\n";
    std::vector<int> perm(rs.rank + 1);
    for (int i = 0; i <= rs.rank; ++i) perm[i] = i;
    do {
      auto prof = peeling_profile(rs, tbl, perm);
      for (std::size_t i = 0; i < perm.size(); ++i) ss << (i ? " " : "") << perm[i];
      ss << ',';
      for (std::size_t i = 0; i < prof.n.size(); ++i) ss << (i ? " " : "") << prof.n[i];
      ss << '\n';
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else if (cfg.format == "json") {
    nlohmann::json j;
    j["family"] = std::string(1, cfg.family);
    j["rank"] = cfg.rank;
    j["q_opt"] = std::vector<long>(opt.q.begin() + 1, opt.q.end());
    j["perm_opt"] = opt.perm;
    j["inequality_verified"] = rep.pass;
    j["permutations_checked"] = rep.permutations_checked;
    ss << j.dump(2) << '\n';
  } else {
    ss << "family,rank,q_opt,perm_opt,inequality_verified,permutations_checked\n";
    ss << cfg.family << ',' << cfg.rank << ',';
    for (std::size_t i = 1; i < opt.q.size(); ++i) ss << (i > 1 ? " " : "") << opt.q[i];
    ss << ',';
    for (std::size_t i = 0; i < opt.perm.size(); ++i) ss << (i ? " " : "") << opt.perm[i];
    ss << ',' << (rep.pass ? 1 : 0) << ',' << rep.permutations_checked << '\n';
  }
  emit(cfg, ss.str(), os);
  return rep.pass ? kOk : kVerifyFail;
}

int cmd_exponents(const RunConfig& cfg, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  auto ce = critical_exponents(rs);
  std::ostringstream ss;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["family"] = std::string(1, cfg.family);
    j["rank"] = cfg.rank;
    for (int k = 0; k <= rs.rank; ++k) {
      j["k_over_pk"].push_back(ce.k_over_pk[k]);
      j["p_k"].push_back(ce.p[k].str());
    }
    ss << j.dump(2) << '\n';
  } else {
    ss << "k,k_over_pk,p_k\n";
    for (int k = 0; k <= rs.rank; ++k)
      ss << k << ',' << ce.k_over_pk[k] << ',' << ce.p[k].str() << '\n';
  }
  emit(cfg, ss.str(), os);
  return kOk;
}

int cmd_char(const RunConfig& cfg, int N, const std::vector<std::string>& mu_fund,
             const std::string& points_csv, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  auto pts = parse_points(points_csv, rs);

  bool use_mu = !mu_fund.empty();
  dvec mu;
  WeylGroup W;
  if (use_mu) {
    if (int(mu_fund.size()) != rs.rank)
      throw ValidationError("--mu needs r fundamental coordinates");
    std::vector<Rat> coeffs;
    for (const auto& s : mu_fund) coeffs.push_back(Rat::parse(s));
    mu = rv_to_d(weight_from_fundamental(rs, coeffs));
    if (weyl_order(rs) > cfg.weyl_cap)
      throw CapabilityError("|W| exceeds weyl_cap; use the N-multiple-of-rho path");
    W = weyl_group(rs, cfg.weyl_cap);
  } else if (N <= 0) {
    throw ValidationError("char: give --N or --mu");
  }

  std::ostringstream ss;
  for (int j = 0; j <= rs.rank; ++j) ss << "t" << j << ',';
  ss << "re_chi,im_chi,regime\n";
  for (const auto& row : pts) {
    AlcovePoint pt = point_from_t(rs, row);
    CharValue cv = use_mu ? char_mu(rs, W, pt.h, mu) : char_Nrho(rs, pt.h, N);
    for (int j = 0; j <= rs.rank; ++j) ss << fmt(pt.t[j]) << ',';
    ss << fmt(cv.value.real()) << ',' << fmt(cv.value.imag()) << ','
       << regime_str(cv.regime) << '\n';
  }
  emit(cfg, ss.str(), os);
  return kOk;
}

int cmd_alcove_classify(const RunConfig& cfg, int N, const std::string& points_csv,
                        std::ostream& os) {
  validate(cfg);
  if (N <= 0) throw ValidationError("alcove classify: need --N");
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  double c = effective_c(cfg, rs);
  auto pts = parse_points(points_csv, rs);
  std::ostringstream ss;
  for (int j = 0; j <= rs.rank; ++j) ss << "t" << j << ',';
  ss << "K,J\n";
  for (const auto& row : pts) {
    AlcovePoint pt = point_from_t(rs, row);
    BssCell cell = classify_bss(rs, pt.h, N, c);
    for (int j = 0; j <= rs.rank; ++j) ss << fmt(pt.t[j]) << ',';
    if (cell.outside)
      ss << "OUTSIDE,OUTSIDE\n";
    else
      ss << mask_str(cell.K) << ',' << mask_str(cell.J) << '\n';
  }
  emit(cfg, ss.str(), os);
  return kOk;
}

int cmd_alcove_chart(const RunConfig& cfg, const std::vector<int>& J, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  FacetChart ch = facet_chart(rs, nodes_mask(J));
  nlohmann::json j;
  j["J"] = J;
  j["free_nodes"] = ch.free_nodes;
  j["dep_node"] = ch.dep_node;
  j["offset"] = ch.offset;
  for (const auto& col : ch.columns) j["columns"].push_back(col);
  j["volume_scale"] = ch.volume_scale;
  j["t_volume"] = ch.t_volume(rs);
  emit(cfg, j.dump(2) + "\n", os);
  return kOk;
}

int cmd_norm(const RunConfig& cfg, const std::string& mode, const std::vector<int>& J,
             double p, int N, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  NormPlan plan = plan_norm(rs, mode, J, p);
  QuadratureSpec quad = quad_from(cfg);
  double c = effective_c(cfg, rs);
  NormResult full;
  run_norm(rs, plan, mode, p, N, c, quad, &full);
  Predicted pred = predicted_exponent(rs, plan.bound, plan.k, plan.n, p);

  std::ostringstream ss;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["N"] = N;
    j["p"] = p;
    j["family"] = std::string(1, cfg.family);
    j["rank"] = cfg.rank;
    j["J"] = J;
    j["mode"] = mode;
    j["value"] = full.value;
    j["err_est"] = full.err_est;
    j["nodes"] = full.nodes;
    j["predicted_exponent"] = pred.exponent;
    j["log_power"] = pred.log_power;
    ss << j.dump(2) << '\n';
  } else {
    ss << "N,p,family,rank,J,mode,value,err_est,predicted_exponent\n";
    ss << N << ',' << fmt(p) << ',' << cfg.family << ',' << cfg.rank << ','
       << mask_str(plan.J) << ',' << mode << ',' << fmt(full.value) << ','
       << fmt(full.err_est) << ',' << fmt(pred.exponent) << '\n';
  }
  emit(cfg, ss.str(), os);
  return kOk;
}

int cmd_scan(const RunConfig& cfg, const std::string& mode, const std::vector<int>& J,
             double p, const std::vector<int>& N_list, std::ostream& os) {
  validate(cfg);
  RootSystem rs = build_root_system(cfg.family, cfg.rank);
  NormPlan plan = plan_norm(rs, mode, J, p);
  QuadratureSpec quad = quad_from(cfg);
  quad.estimate_error = false;
  double c = effective_c(cfg, rs);
  Predicted pred = predicted_exponent(rs, plan.bound, plan.k, plan.n, p);
  ScanResult sr = scan_exponent(
      [&](int N) { return run_norm(rs, plan, mode, p, N, c, quad); }, p, N_list, pred,
      pred.log_power != 0);

  std::ostringstream ss;
  if (cfg.format == "json") {
    nlohmann::json j;
    j["p"] = p;
    j["family"] = std::string(1, cfg.family);
    j["rank"] = cfg.rank;
    j["J"] = J;
    j["mode"] = mode;
    j["N_values"] = sr.N_values;
    j["norms"] = sr.norms;
    j["fitted_slope"] = sr.fitted_slope;
    j["slope_stderr"] = sr.slope_stderr;
    j["predicted"] = sr.predicted;
    j["log_power"] = sr.log_power;
    j["log_corrected"] = sr.log_corrected;
    j["dropped_first"] = sr.dropped_first;
    ss << j.dump(2) << '\n';
  } else {
    ss << "N,p,family,rank,J,mode,value,err_est,predicted_exponent,fitted_slope\n";
    for (std::size_t i = 0; i < sr.N_values.size(); ++i)
      ss << sr.N_values[i] << ',' << fmt(p) << ',' << cfg.family << ',' << cfg.rank << ','
         << mask_str(plan.J) << ',' << mode << ',' << fmt(sr.norms[i]) << ",,"
         << fmt(sr.predicted) << ',' << fmt(sr.fitted_slope) << '\n';
  }
  emit(cfg, ss.str(), os);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, bool inject_corrupt_marks, std::ostream& os) {
  validate(cfg);
  std::vector<Check> checks;
  check_marks(checks, cfg, inject_corrupt_marks);
  check_denominator_identity(checks, cfg.weyl_cap, cfg.seed);
  check_decomposition(checks, cfg.weyl_cap, cfg.seed);
  check_orthonormality(checks, cfg);
  check_partition(checks, cfg, 1.0);
  check_partition(checks, cfg, 0.5);
  check_wall_distance(checks, cfg, 1.0);
  check_wall_distance(checks, cfg, 0.5);

  std::ostringstream ss;
  bool any_fail = false;
  for (const auto& c : checks) {
    const char* tag = c.status == Check::PASS ? "PASS" : c.status == Check::FAIL ? "FAIL" : "SKIP";
    any_fail = any_fail || c.status == Check::FAIL;
    ss << '[' << tag << "] " << c.name;
    if (!c.detail.empty()) ss << " (" << c.detail << ')';
    ss << '\n';
  }
  emit(cfg, ss.str(), os);
  return any_fail ? kVerifyFail : kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& os, std::ostream& err) {
  CLI::App app{"root systems, Weyl characters, and restriction-norm scans"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--family", cfg.family, "A..G");
  app.add_option("--rank", cfg.rank, "rank");
  app.add_option("--c", cfg.c, "barycentric threshold (0 = default)");
  app.add_option("--q-res", cfg.q_res, "quadrature resolution factor");
  app.add_option("--weyl-cap", cfg.weyl_cap, "Weyl group size cap");
  app.add_option("--node-budget", cfg.node_budget, "quadrature node budget");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--workers", cfg.workers, "evaluation threads");

  auto* roots = app.add_subcommand("roots", "root system summary");

  auto* peel = app.add_subcommand("peel", "optimal peeling order and verification");
  bool peel_table = false;
  peel->add_flag("--table", peel_table, "emit the full perm -> n table (rank <= 4)");

  auto* expo = app.add_subcommand("exponents", "critical exponents p_k");

  auto* chr = app.add_subcommand("char", "evaluate characters at torus points");
  int chr_N = 0;
  std::vector<std::string> chr_mu;
  std::string chr_points;
  chr->add_option("--N", chr_N, "evaluate chi_{N rho}");
  chr->add_option("--mu", chr_mu, "weight in fundamental coordinates (rationals)");
  chr->add_option("--points", chr_points, "CSV file of wall-distance rows")->required();

  auto* alc = app.add_subcommand("alcove", "alcove classification and charts");
  auto* alc_classify = alc->add_subcommand("classify", "label points by their cell");
  int alc_N = 64;
  std::string alc_points;
  alc_classify->add_option("--N", alc_N, "semiclassical parameter");
  alc_classify->add_option("--points", alc_points, "CSV file of wall-distance rows")->required();
  auto* alc_chart = alc->add_subcommand("chart", "facet chart as matrix + offset");
  std::vector<int> alc_J;
  alc_chart->add_option("--J", alc_J, "facet nodes");

  auto* norm = app.add_subcommand("norm", "restricted norm of chi_{N rho}");
  std::string norm_mode = "facet";
  std::vector<int> norm_J;
  double norm_p = 2;
  int norm_N = 32;
  norm->add_option("--mode", norm_mode, "facet | weighted | region");
  norm->add_option("--J", norm_J, "facet nodes");
  norm->add_option("--p", norm_p, "exponent p");
  norm->add_option("--N", norm_N, "spectral parameter");

  auto* scan = app.add_subcommand("scan", "N-sweep with slope fit");
  std::string scan_mode = "facet";
  std::vector<int> scan_J;
  double scan_p = 2;
  std::string scan_Ns = "32,64,128,256";
  scan->add_option("--mode", scan_mode, "facet | weighted | region");
  scan->add_option("--J", scan_J, "facet nodes");
  scan->add_option("--p", scan_p, "exponent p");
  scan->add_option("--N-list", scan_Ns, "comma-separated increasing N values");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  bool inject = false;
  verify->add_flag("--inject-corrupt-marks", inject, "negative control: corrupt marks");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      os << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (!config_path.empty()) {
      RunConfig file_cfg;
      load_config_file(config_path, file_cfg);
      // flags override: re-parse onto the file values
      RunConfig flag_defaults;
      auto keep = [&](auto& field, auto& file_field, const auto& default_val) {
        if (field == default_val) field = file_field;
      };
      keep(cfg.family, file_cfg.family, flag_defaults.family);
      keep(cfg.rank, file_cfg.rank, flag_defaults.rank);
      keep(cfg.c, file_cfg.c, flag_defaults.c);
      keep(cfg.q_res, file_cfg.q_res, flag_defaults.q_res);
      keep(cfg.weyl_cap, file_cfg.weyl_cap, flag_defaults.weyl_cap);
      keep(cfg.node_budget, file_cfg.node_budget, flag_defaults.node_budget);
      keep(cfg.seed, file_cfg.seed, flag_defaults.seed);
      keep(cfg.format, file_cfg.format, flag_defaults.format);
      keep(cfg.out, file_cfg.out, flag_defaults.out);
      keep(cfg.workers, file_cfg.workers, flag_defaults.workers);
    }

    if (roots->parsed()) return cmd_roots(cfg, os);
    if (peel->parsed()) return cmd_peel(cfg, peel_table, os);
    if (expo->parsed()) return cmd_exponents(cfg, os);
    if (chr->parsed()) return cmd_char(cfg, chr_N, chr_mu, read_file(chr_points), os);
    if (alc->parsed()) {
      if (alc_classify->parsed())
        return cmd_alcove_classify(cfg, alc_N, read_file(alc_points), os);
      if (alc_chart->parsed()) return cmd_alcove_chart(cfg, alc_J, os);
      err << "error: alcove needs classify or chart\n";
      return kUsage;
    }
    if (norm->parsed()) return cmd_norm(cfg, norm_mode, norm_J, norm_p, norm_N, os);
    if (scan->parsed())
      return cmd_scan(cfg, scan_mode, scan_J, scan_p, parse_int_list(scan_Ns, ','), os);
    if (verify->parsed()) return cmd_verify(cfg, inject, os);
    err << "error: no subcommand\n";
    return kUsage;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace weyl::cli
