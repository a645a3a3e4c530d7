#include "levy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace levy {

namespace {

using cd = std::complex<double>;

cd phi_of(const LevyTriplet& t, double u, double time) {
  return std::exp(-time * psi(t, u));
}

CheckStatus status_from_items(const std::vector<CheckItem>& items) {
  for (const CheckItem& it : items)
    if (!it.pass) return CheckStatus::fail;
  return CheckStatus::pass;
}

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// unbiased sample variance
double sample_var(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

std::size_t grid_index(const PathSample& p, double time) {
  const auto it = std::lower_bound(p.grid.begin(), p.grid.end(), time - 1e-9);
  if (it == p.grid.end() || std::abs(*it - time) > 1e-9 * std::max(1.0, std::abs(time)))
    throw std::invalid_argument("requested time is not a grid time");
  return static_cast<std::size_t>(it - p.grid.begin());
}

}  // namespace

double clt_band(double bound, std::size_t n) {
  if (n == 0) throw std::invalid_argument("clt_band: empty sample");
  return 4.0 * bound / std::sqrt(static_cast<double>(n));
}

double chi2_tail(double stat, double dof) {
  if (dof <= 0.0) return 1.0;
  if (!(stat >= 0.0)) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

const Vec& value_at(const PathSample& p, double time) {
  return p.skeleton[grid_index(p, time)];
}

PoissonGof poisson_gof(const std::vector<std::uint64_t>& counts, double lambda) {
  PoissonGof g;
  const double n = static_cast<double>(counts.size());
  if (counts.empty()) throw std::invalid_argument("poisson_gof: empty sample");
  if (lambda == 0.0) {
    bool all_zero = true;
    for (auto c : counts) all_zero = all_zero && c == 0;
    g.stat = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
    g.p = all_zero ? 1.0 : 0.0;
    g.bins = 1;
    return g;
  }
  std::uint64_t k_obs = 0;
  for (auto c : counts) k_obs = std::max(k_obs, c);
  // raw cells 0..K plus one tail cell, then pooled left to right
  std::vector<double> probs;
  double cum = 0.0, pk = std::exp(-lambda);
  for (std::uint64_t k = 0;; ++k) {
    probs.push_back(pk);
    cum += pk;
    if (k >= k_obs && n * (1.0 - cum) < 2.5) break;
    if (k > k_obs + 10000) break;  // defensive; unreachable for sane inputs
    pk *= lambda / static_cast<double>(k + 1);
  }
  std::vector<double> obs(probs.size() + 1, 0.0), expd(probs.size() + 1, 0.0);
  for (std::size_t k = 0; k < probs.size(); ++k) expd[k] = n * probs[k];
  expd.back() = n * std::max(0.0, 1.0 - cum);
  for (auto c : counts) {
    const std::size_t k = static_cast<std::size_t>(c);
    if (k < probs.size())
      obs[k] += 1.0;
    else
      obs.back() += 1.0;
  }
  std::vector<double> pooled_obs, pooled_exp;
  double eb = 0.0, ob = 0.0;
  for (std::size_t k = 0; k < expd.size(); ++k) {
    eb += expd[k];
    ob += obs[k];
    if (eb >= 5.0) {
      pooled_obs.push_back(ob);
      pooled_exp.push_back(eb);
      eb = ob = 0.0;
    }
  }
  if (eb > 0.0 || ob > 0.0) {
    if (!pooled_exp.empty()) {
      pooled_exp.back() += eb;
      pooled_obs.back() += ob;
    } else {
      pooled_exp.push_back(eb);
      pooled_obs.push_back(ob);
    }
  }
  g.bins = pooled_exp.size();
  for (std::size_t i = 0; i < pooled_exp.size(); ++i) {
    const double d = pooled_obs[i] - pooled_exp[i];
    g.stat += d * d / pooled_exp[i];
  }
  g.dof = static_cast<double>(g.bins > 1 ? g.bins - 1 : 0);
  g.p = chi2_tail(g.stat, g.dof);
  return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

// ------------------------------ check_ecf ----------------------------------

CheckReport check_ecf(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                      std::size_t n, double time, const std::vector<Vec>& us) {
  if (n < 10000) throw std::invalid_argument("check_ecf: need at least 10^4 replicates");
  if (us.empty()) throw std::invalid_argument("check_ecf: empty u-grid");
  std::vector<Vec> xs(n, Vec::zero(t.dim()));
  sample_replicates(t, cfg, seed, n,
                    [&](std::size_t r, const PathSample& p) { xs[r] = value_at(p, time); });
  double sup = 0.0;
  for (const Vec& u : us) {
    cd acc(0.0, 0.0);
    for (const Vec& x : xs) acc += std::polar(1.0, dot(u, x));
    acc /= static_cast<double>(n);
    const cd want = std::exp(-time * psi(t, u));
    sup = std::max(sup, std::abs(acc - want));
  }
  CheckReport rep;
  rep.check = "ecf";
  rep.n = n;
  rep.seed = seed;
  const double band = clt_band(1.0, n);  // |e^{iuX}| = 1 bounds each summand
  rep.items.push_back({"sup_error", sup, 0.0, band, sup <= band});
  rep.status = status_from_items(rep.items);
  return rep;
}

// -------------------------- check_poisson_law -------------------------------

CheckReport check_poisson_law(const std::vector<std::uint64_t>& counts, double lambda,
                              std::uint64_t seed) {
  if (counts.empty()) throw std::invalid_argument("check_poisson_law: empty sample");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("check_poisson_law: lambda must be finite and >= 0");
  const std::size_t n = counts.size();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(counts[i]);
  const double mean = sample_mean(xs);
  const double var = sample_var(xs, mean);

  CheckReport rep;
  rep.check = "poisson_law";
  rep.n = n;
  rep.seed = seed;
  const double mean_band = clt_band(std::sqrt(lambda), n);
  rep.items.push_back(
      {"mean", mean, lambda, mean_band, std::abs(mean - lambda) <= mean_band});
  // Var(s^2) = (mu4 - sigma^4)/n with mu4 = lambda(1+3lambda) for Poisson
  const double var_band = clt_band(std::sqrt(lambda + 2.0 * lambda * lambda), n);
  rep.items.push_back(
      {"variance", var, lambda, var_band, std::abs(var - lambda) <= var_band});
  const PoissonGof g = poisson_gof(counts, lambda);
  rep.items.push_back(
      {"chi2_p", g.p, 1.0, 1.0 - 1e-3, std::abs(g.p - 1.0) <= 1.0 - 1e-3});
  rep.status = status_from_items(rep.items);
  return rep;
}

CheckReport check_poisson_law(const LevyTriplet& t, const SimConfig& cfg,
                              std::uint64_t seed, std::size_t n, const BorelRegion& b) {
  std::vector<std::uint64_t> counts(n, 0);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    counts[r] = count_jumps(p, b, p.horizon);
  });
  const double lambda = cfg.horizon * nu_mass(t.measure, b);
  return check_poisson_law(counts, lambda, seed);
}

// -------------------------- check_jump_moments ------------------------------

CheckReport check_jump_moments(const LevyTriplet& t, const SimConfig& cfg,
                               std::uint64_t seed, std::size_t n, const ScalarFn& f,
                               const BorelRegion& b) {
  const double horizon = cfg.horizon;
  const double i1 = nu_integral(t.measure, f, b).value;
  const double i2 =
      nu_integral(t.measure, [&f](const Vec& x) { const double v = f(x); return v * v; }, b)
          .value;
  std::vector<double> js(n, 0.0);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    js[r] = jump_integral(p, f, b, horizon);
  });
  const double mean = sample_mean(js);
  const double var = sample_var(js, mean);

  CheckReport rep;
  rep.check = "jump_moments";
  rep.n = n;
  rep.seed = seed;
  const double mean_band = clt_band(std::sqrt(horizon * i2), n);
  rep.items.push_back({"mean", mean, horizon * i1, mean_band,
                       std::abs(mean - horizon * i1) <= mean_band});
  const double var_tol = 0.05 * horizon * i2;  // 5% relative
  rep.items.push_back({"variance", var, horizon * i2, var_tol,
                       std::abs(var - horizon * i2) <= var_tol});
  rep.status = status_from_items(rep.items);
  return rep;
}

// --------------------- check_disjoint_independence --------------------------

namespace detail {

double factorization_sup(const LevyTriplet& t, const SimConfig& cfg, std::uint64_t seed,
                         std::size_t n, const BorelRegion& b1, const BorelRegion& b2,
                         const std::vector<double>& us, const std::vector<double>& vs) {
  if (t.dim() != 1)
    throw std::invalid_argument("factorization check is one-dimensional");
  std::vector<double> a(n, 0.0), c(n, 0.0);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    a[r] = jump_sum(p, b1, p.horizon)[0];
    c[r] = jump_sum(p, b2, p.horizon)[0];
  });
  const double dn = static_cast<double>(n);
  double sup = 0.0;
  for (double u : us) {
    cd fu(0.0, 0.0);
    for (double x : a) fu += std::polar(1.0, u * x);
    fu /= dn;
    for (double v : vs) {
      cd fv(0.0, 0.0), joint(0.0, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        fv += std::polar(1.0, v * c[r]);
        joint += std::polar(1.0, u * a[r] + v * c[r]);
      }
      fv /= dn;
      joint /= dn;
      sup = std::max(sup, std::abs(joint - fu * fv));
    }
  }
  return sup;
}

}  // namespace detail

CheckReport check_disjoint_independence(const LevyTriplet& t, const SimConfig& cfg,
                                        std::uint64_t seed, std::size_t n,
                                        const BorelRegion& b1, const BorelRegion& b2,
                                        const std::vector<double>& us,
                                        const std::vector<double>& vs) {
  if (b1.intersects(b2))
    throw std::invalid_argument("check_disjoint_independence: regions overlap");
  const double sup = detail::factorization_sup(t, cfg, seed, n, b1, b2, us, vs);
  CheckReport rep;
  rep.check = "disjoint_independence";
  rep.n = n;
  rep.seed = seed;
  const double band = clt_band(2.0, n);  // joint minus product of two unit-modulus means
  rep.items.push_back({"factorization_sup", sup, 0.0, band, sup <= band});
  rep.status = status_from_items(rep.items);
  return rep;
}

// --------------------- check_martingale_normalization -----------------------

CheckReport check_martingale_normalization(const LevyTriplet& t, const SimConfig& cfg,
                                           std::uint64_t seed, std::size_t n, double u,
                                           double s, double time) {
  if (t.dim() != 1)
    throw std::invalid_argument("martingale check is one-dimensional");
  if (!(s > 0.0) || !(s < time))
    throw std::invalid_argument("martingale check needs 0 < s < time");
  std::vector<cd> ms(n), mt(n);
  const cd phi_s = phi_of(t, u, s);
  const cd phi_t = phi_of(t, u, time);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    ms[r] = std::polar(1.0, u * value_at(p, s)[0]) / phi_s;
    mt[r] = std::polar(1.0, u * value_at(p, time)[0]) / phi_t;
  });
  cd mean_t(0.0, 0.0), ortho(0.0, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    mean_t += mt[r];
    ortho += (mt[r] - ms[r]) * std::conj(ms[r]);
  }
  const double dn = static_cast<double>(n);
  mean_t /= dn;
  ortho /= dn;

  CheckReport rep;
  rep.check = "martingale_normalization";
  rep.n = n;
  rep.seed = seed;
  const double bt = 1.0 / std::abs(phi_t);  // |M_t| = e^{time Re psi}
  const double bs = 1.0 / std::abs(phi_s);
  const double mean_band = clt_band(bt, n);
  rep.items.push_back({"mean_error", std::abs(mean_t - 1.0), 0.0, mean_band,
                       std::abs(mean_t - 1.0) <= mean_band});
  const double ortho_band = clt_band((bt + bs) * bs, n);
  rep.items.push_back({"increment_orthogonality", std::abs(ortho), 0.0, ortho_band,
                       std::abs(ortho) <= ortho_band});
  rep.status = status_from_items(rep.items);
  return rep;
}

// -------------------- check_jump_covariance_identity ------------------------

namespace detail {

CovIdentity covariance_identity_stats(const LevyTriplet& t, const SimConfig& cfg,
                                      std::uint64_t seed, std::size_t n,
                                      const BorelRegion& b_m, const BorelRegion& b_n,
                                      double time, bool compensate) {
  if (t.dim() != 1)
    throw std::invalid_argument("covariance identity check is one-dimensional");
  const double comp = compensate ? nu_first_moment(t.measure, b_m)[0] : 0.0;
  std::vector<double> lhs(n, 0.0), rhs(n, 0.0);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    const double m_t = jump_sum(p, b_m, time)[0] - time * comp;
    const double n_t = static_cast<double>(count_jumps(p, b_n, time));
    lhs[r] = m_t * n_t;
    // M's jump at an N-jump time is the jump size when it lies in b_m
    double s = 0.0;
    for (const Jump& j : p.jumps) {
      if (j.time > time) break;
      if (b_n.contains(j.size) && b_m.contains(j.size)) s += j.size[0];
    }
    rhs[r] = s;
  });
  CovIdentity out;
  out.lhs = sample_mean(lhs);
  out.rhs = sample_mean(rhs);
  const auto inter = BorelRegion::intersection_1d(b_m, b_n);
  out.expected = time * nu_first_moment(t.measure, inter)[0];
  out.lhs_band = clt_band(std::sqrt(sample_var(lhs, out.lhs)), n);
  out.rhs_band = clt_band(std::sqrt(sample_var(rhs, out.rhs)), n);
  std::vector<double> diff(n);
  for (std::size_t r = 0; r < n; ++r) diff[r] = lhs[r] - rhs[r];
  const double dmean = sample_mean(diff);
  out.diff_band = clt_band(std::sqrt(sample_var(diff, dmean)), n);
  return out;
}

}  // namespace detail

CheckReport check_jump_covariance_identity(const LevyTriplet& t, const SimConfig& cfg,
                                           std::uint64_t seed, std::size_t n,
                                           const BorelRegion& b_m, const BorelRegion& b_n,
                                           double time) {
  const auto st =
      detail::covariance_identity_stats(t, cfg, seed, n, b_m, b_n, time, true);
  CheckReport rep;
  rep.check = "jump_covariance_identity";
  rep.n = n;
  rep.seed = seed;
  rep.items.push_back({"product_mean", st.lhs, st.expected, st.lhs_band,
                       std::abs(st.lhs - st.expected) <= st.lhs_band});
  rep.items.push_back({"jump_sum_mean", st.rhs, st.expected, st.rhs_band,
                       std::abs(st.rhs - st.expected) <= st.rhs_band});
  rep.items.push_back({"difference", st.lhs - st.rhs, 0.0, st.diff_band,
                       std::abs(st.lhs - st.rhs) <= st.diff_band});
  rep.status = status_from_items(rep.items);
  return rep;
}

// ------------------------ check_gaussian_residual ---------------------------

CheckReport check_gaussian_residual(const LevyTriplet& t, const SimConfig& cfg,
                                    std::uint64_t seed, std::size_t n, double time,
                                    const std::vector<double>& us) {
  if (t.dim() != 1)
    throw std::invalid_argument("gaussian residual check is one-dimensional");
  const double q = t.covariance(0, 0);
  std::vector<double> res(n, 0.0);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    const std::size_t i = grid_index(p, time);
    const double tg = p.grid[i];
    const double drift_rate = t.drift[0] + p.compensator_rate[0];
    // mirrors the path assembly bit for bit: (drift*t + prefix) in this order
    double prefix = 0.0;
    for (const Jump& j : p.jumps) {
      if (j.time > tg) break;
      prefix += j.size[0];
    }
    const double base = drift_rate * tg + prefix;
    res[r] = p.skeleton[i][0] - base;
  });

  CheckReport rep;
  rep.check = "gaussian_residual";
  rep.n = n;
  rep.seed = seed;
  if (q == 0.0) {
    double worst = 0.0;
    for (double x : res) worst = std::max(worst, std::abs(x));
    rep.items.push_back({"max_abs_residual", worst, 0.0, 0.0, worst == 0.0});
    rep.status = status_from_items(rep.items);
    return rep;
  }
  const double dn = static_cast<double>(n);
  double sup = 0.0;
  for (double u : us) {
    cd acc(0.0, 0.0);
    for (double x : res) acc += std::polar(1.0, u * x);
    acc /= dn;
    const double want = std::exp(-0.5 * u * u * q * time);
    sup = std::max(sup, std::abs(acc - want));
  }
  const double ecf_band = clt_band(1.0, n);
  rep.items.push_back({"ecf_sup_error", sup, 0.0, ecf_band, sup <= ecf_band});

  const double mean = sample_mean(res);
  double m2 = 0.0, m4 = 0.0;
  for (double x : res) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m4 /= dn;
  const double excess = m4 / (m2 * m2) - 3.0;
  const double kurt_band = clt_band(std::sqrt(24.0), n);
  rep.items.push_back(
      {"excess_kurtosis", excess, 0.0, kurt_band, std::abs(excess) <= kurt_band});
  rep.status = status_from_items(rep.items);
  return rep;
}

// -------------------------- check_strong_markov -----------------------------

CheckReport check_strong_markov(const LevyTriplet& t, const SimConfig& cfg,
                                std::uint64_t seed, std::size_t n, const BorelRegion& b,
                                double s, const std::vector<double>& us) {
  if (t.dim() != 1)
    throw std::invalid_argument("strong Markov check is one-dimensional");
  const double rate = nu_mass(t.measure, b);
  if (!(rate > 0.0))
    throw std::invalid_argument("strong Markov check: stopping region never fires");
  if (cfg.horizon < 10.0 * (s + 1.0 / rate))
    throw std::invalid_argument(
        "strong Markov check: horizon below 10*(s + 1/rate); retention bias would "
        "exceed the band");
  const double k_real = s / cfg.dt;
  const long k = std::lround(k_real);
  if (k < 1 || std::abs(k_real - static_cast<double>(k)) > 1e-9)
    throw std::invalid_argument("strong Markov check: lag must be a grid multiple");

  struct Slot {
    double y = 0.0;  // restart increment
    double z = 0.0;  // pre-restart statistic
    bool kept = false;
  };
  std::vector<Slot> slots(n);
  sample_replicates(t, cfg, seed, n, [&](std::size_t r, const PathSample& p) {
    double tau = -1.0;
    for (const Jump& j : p.jumps)
      if (b.contains(j.size)) {
        tau = j.time;
        break;
      }
    if (tau < 0.0) return;
    const auto it = std::lower_bound(p.grid.begin(), p.grid.end(), tau);
    const std::size_t i0 = static_cast<std::size_t>(it - p.grid.begin());
    const std::size_t i1 = i0 + static_cast<std::size_t>(k);
    if (i1 >= p.grid.size()) return;
    slots[r].y = p.skeleton[i1][0] - p.skeleton[i0][0];
    slots[r].z = p.skeleton[i0 / 2][0];
    slots[r].kept = true;
  });
  std::vector<double> ys, zs;
  ys.reserve(n);
  zs.reserve(n);
  for (const Slot& sl : slots)
    if (sl.kept) {
      ys.push_back(sl.y);
      zs.push_back(sl.z);
    }
  const std::size_t kept = ys.size();

  CheckReport rep;
  rep.check = "strong_markov";
  rep.n = kept;
  rep.seed = seed;
  if (kept < 1000) {
    rep.status = CheckStatus::inconclusive;
    rep.note = "fewer than 1000 retained replicates (" + std::to_string(kept) + ")";
    return rep;
  }
  const double dn = static_cast<double>(kept);
  double sup = 0.0;
  double cross_ratio = 0.0;
  const double zmean = sample_mean(zs);
  for (double u : us) {
    cd acc(0.0, 0.0);
    for (double y : ys) acc += std::polar(1.0, u * y);
    acc /= dn;
    const cd want = std::exp(-s * psi(t, u));
    sup = std::max(sup, std::abs(acc - want));
    // cross-covariance of e^{iuY} with the pre-restart value
    cd w(0.0, 0.0);
    double w2 = 0.0;
    for (std::size_t r = 0; r < kept; ++r) {
      const cd term = (std::polar(1.0, u * ys[r]) - acc) * (zs[r] - zmean);
      w += term;
      w2 += std::norm(term);
    }
    w /= dn;
    w2 /= dn;
    const double band = clt_band(std::sqrt(w2), kept);
    if (band > 0.0) cross_ratio = std::max(cross_ratio, std::abs(w) / band);
  }
  const double ecf_band = clt_band(1.0, kept);
  rep.items.push_back({"restart_ecf_sup_error", sup, 0.0, ecf_band, sup <= ecf_band});
  rep.items.push_back(
      {"cross_covariance_ratio", cross_ratio, 0.0, 1.0, cross_ratio <= 1.0});
  rep.status = status_from_items(rep.items);
  return rep;
}

// ---------------------------- serialization ---------------------------------

namespace {
const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "inconclusive";
  }
}
}  // namespace

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["status"] = status_name(r.status);
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["note"] = r.note;
  nlohmann::json items = nlohmann::json::array();
  for (const CheckItem& it : r.items)
    items.push_back({{"name", it.name},
                     {"statistic", it.statistic},
                     {"expected", it.expected},
                     {"tolerance", it.tolerance},
                     {"pass", it.pass}});
  j["items"] = items;
  return j;
}

nlohmann::json reports_to_json(const std::vector<CheckReport>& rs) {
  nlohmann::json flat = nlohmann::json::array();
  bool any_fail = false, any_inconclusive = false;
  nlohmann::json summaries = nlohmann::json::array();
  for (const CheckReport& r : rs) {
    any_fail = any_fail || r.status == CheckStatus::fail;
    any_inconclusive = any_inconclusive || r.status == CheckStatus::inconclusive;
    summaries.push_back(
        {{"check", r.check}, {"status", status_name(r.status)}, {"note", r.note}});
    for (const CheckItem& it : r.items)
      flat.push_back({{"check", r.check + "." + it.name},
                      {"statistic", it.statistic},
                      {"expected", it.expected},
                      {"tolerance", it.tolerance},
                      {"N", r.n},
                      {"seed", r.seed},
                      {"pass", it.pass}});
  }
  nlohmann::json j;
  j["schema"] = "levy-report/1";
  j["status"] = any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "pass");
  j["items"] = flat;
  j["reports"] = summaries;
  return j;
}

}  // namespace levy
