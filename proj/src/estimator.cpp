#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "contractivity/norms.hpp"

namespace contractivity {
namespace {

// Singular values within this relative distance of each other (or of zero)
// are treated as tied inside the duality mappings.
constexpr double kSpectralJitter = 1e-12;

ComplexMatrix diag_mul(const ComplexMatrix& u, const RealVector& w, const ComplexMatrix& v) {
  return u * w.cast<Complex>().asDiagonal() * v.adjoint();
}

// D with ||D||_q = 1 and Re tr(D^* B) = ||B||_p, q the conjugate exponent.
ComplexMatrix output_dual(const ComplexMatrix& b, PExponent p) {
  Eigen::JacobiSVD<ComplexMatrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double top = sigma.size() ? sigma[0] : 0.0;
  if (top == 0.0) return ComplexMatrix::Zero(b.rows(), b.cols());
  RealVector w = RealVector::Zero(sigma.size());
  if (p.is_infinite()) {
    int tied = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma[i] >= top * (1.0 - kSpectralJitter)) ++tied;
    for (int i = 0; i < tied; ++i) w[i] = 1.0 / tied;
  } else if (p.value() == 1.0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) w[i] = sigma[i] > kSpectralJitter * top ? 1.0 : 0.0;
  } else {
    const double pv = p.value();
    const double norm = schatten_norm_of_values(sigma, p);
    for (Eigen::Index i = 0; i < sigma.size(); ++i) w[i] = std::pow(sigma[i] / norm, pv - 1.0);
  }
  return diag_mul(svd.matrixU(), w, svd.matrixV());
}

// Maximizer of Re tr(G^* A) over ||A||_p <= 1 with no domain restriction
// (up to positive scaling).
ComplexMatrix input_dual_all(const ComplexMatrix& g, PExponent p) {
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();
  const double top = sigma[0];
  if (top == 0.0) return ComplexMatrix::Zero(g.rows(), g.cols());
  RealVector w = RealVector::Zero(sigma.size());
  if (p.is_infinite()) {
    w.setOnes();
  } else if (p.value() == 1.0) {
    int tied = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma[i] >= top * (1.0 - kSpectralJitter)) ++tied;
    for (int i = 0; i < tied; ++i) w[i] = 1.0 / tied;
  } else {
    const double q = p.conjugate().value();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) w[i] = std::pow(sigma[i] / top, q - 1.0);
  }
  return diag_mul(svd.matrixU(), w, svd.matrixV());
}

double signed_pow(double x, double e) {
  return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), e), x);
}

ComplexMatrix input_dual_hermitian(const ComplexMatrix& g, PExponent p, bool traceless) {
  const ComplexMatrix h = (g + g.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const RealVector lam = es.eigenvalues();  // ascending
  const ComplexMatrix& v = es.eigenvectors();
  const auto n = lam.size();
  const double scale = lam.cwiseAbs().maxCoeff();
  if (scale == 0.0) return ComplexMatrix::Zero(n, n);
  RealVector w = RealVector::Zero(n);

  if (!traceless) {
    if (p.is_infinite()) {
      for (Eigen::Index i = 0; i < n; ++i)
        w[i] = std::abs(lam[i]) > kSpectralJitter * scale ? (lam[i] > 0 ? 1.0 : -1.0) : 0.0;
    } else if (p.value() == 1.0) {
      int tied = 0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(lam[i]) >= scale * (1.0 - kSpectralJitter)) ++tied;
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(lam[i]) >= scale * (1.0 - kSpectralJitter))
          w[i] = (lam[i] > 0 ? 1.0 : -1.0) / tied;
    } else {
      const double q = p.conjugate().value();
      for (Eigen::Index i = 0; i < n; ++i) w[i] = signed_pow(lam[i] / scale, q - 1.0);
    }
    return diag_mul(v, w, v);
  }

  const double spread = lam[n - 1] - lam[0];
  if (spread <= kSpectralJitter * scale) return ComplexMatrix::Zero(n, n);
  if (p.is_infinite()) {
    // max tr(HA) over -1 <= A <= 1, tr A = 0: +1 on the top half of the
    // spectrum, -1 on the bottom half, 0 on a middle eigenvalue for odd n.
    const auto half = n / 2;
    for (Eigen::Index i = 0; i < half; ++i) {
      w[i] = -1.0;
      w[n - 1 - i] = 1.0;
    }
  } else if (p.value() == 1.0) {
    w[0] = -0.5;
    w[n - 1] = 0.5;
  } else {
    // Shift c with sum_i phi(lambda_i - c) = 0, phi(x) = sign(x)|x|^{q-1}.
    const double q = p.conjugate().value();
    auto excess = [&](double c) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += signed_pow((lam[i] - c) / spread, q - 1.0);
      return s;
    };
    double lo = lam[0], hi = lam[n - 1];
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + scale); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (excess(mid) > 0.0) lo = mid; else hi = mid;
    }
    const double c = 0.5 * (lo + hi);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = signed_pow((lam[i] - c) / spread, q - 1.0);
  }
  return diag_mul(v, w, v);
}

ComplexMatrix input_dual_traceless_all(const ComplexMatrix& g, PExponent p) {
  const auto n = g.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const PExponent q = p.conjugate();
  Complex c = g.trace() / static_cast<double>(n);
  // Minimize the convex function c -> ||G - c 1||_q; at the minimum the dual
  // element of G - c 1 is traceless.
  if (!(!p.is_infinite() && p.value() == 2.0)) {
    auto f = [&](Complex cc) { return schatten_norm(g - cc * id, q); };
    double fc = f(c);
    double eta = fc / static_cast<double>(n);
    for (int it = 0; it < 60 && eta > 0.0; ++it) {
      const Complex t = input_dual_all(g - c * id, p).trace();
      if (std::abs(t) == 0.0) break;
      bool moved = false;
      for (int ls = 0; ls < 40; ++ls) {
        const Complex trial = c + eta * t / std::abs(t);
        const double ft = f(trial);
        if (ft < fc) {
          c = trial;
          fc = ft;
          moved = true;
          eta *= 1.5;
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
  }
  return project_to_domain(input_dual_all(g - c * id, p), NormDomain::traceless_all);
}

ComplexMatrix input_dual(const ComplexMatrix& g, PExponent p, NormDomain domain) {
  switch (domain) {
    case NormDomain::all: return input_dual_all(g, p);
    case NormDomain::hermitian: return input_dual_hermitian(g, p, false);
    case NormDomain::traceless_hermitian: return input_dual_hermitian(g, p, true);
    case NormDomain::traceless_all: return input_dual_traceless_all(g, p);
  }
  throw std::invalid_argument("unknown domain");
}

struct Candidate {
  ComplexMatrix a;  // unit p-norm, in domain
  double value = 0.0;
};

class Ascent {
 public:
  Ascent(const SuperOp& t, PExponent p, NormDomain domain)
      : t_(t), t_adj_(adjoint(t)), p_(p), domain_(domain) {}

  // Projects into the domain and normalizes; nullopt for a zero input.
  std::optional<Candidate> make(const ComplexMatrix& raw) const {
    const ComplexMatrix a = project_to_domain(raw, domain_);
    const double norm = schatten_norm(a, p_);
    if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
    Candidate c;
    c.a = a / norm;
    c.value = schatten_norm(t_.apply(c.a), p_);
    return c;
  }

  std::optional<Candidate> fixed_point_step(const Candidate& cur) const {
    const ComplexMatrix d = output_dual(t_.apply(cur.a), p_);
    return make(input_dual(t_adj_.apply(d), p_, domain_));
  }

  // Projected (sub)gradient step with backtracking.
  std::optional<Candidate> gradient_step(const Candidate& cur) const {
    const ComplexMatrix d_out = output_dual(t_.apply(cur.a), p_);
    const ComplexMatrix d_in = output_dual(cur.a, p_);
    const ComplexMatrix grad =
        project_to_domain(t_adj_.apply(d_out) - cur.value * d_in, domain_);
    const double gn = grad.norm();
    if (!(gn > 0.0)) return std::nullopt;
    double step = cur.a.norm() / gn;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      auto next = make(cur.a + step * grad);
      if (next && next->value > cur.value) return next;
    }
    return std::nullopt;
  }

 private:
  const SuperOp& t_;
  SuperOp t_adj_;
  PExponent p_;
  NormDomain domain_;
};

UpperBound certify(const SuperOp& t, PExponent p, NormDomain domain, const MapFacts& facts) {
  UpperBound best;
  auto offer = [&](double v, const char* source) {
    if (!std::isfinite(v)) return;
    if (!best.value || v < *best.value) {
      best.value = v;
      best.source = source;
    }
  };
  const int n = t.dim_in();
  const bool positive_tp = facts.positive && facts.trace_preserving;
  // Every bound on the full space also bounds each restricted domain.
  if (positive_tp) offer(theorem1_bound(n, p), "theorem1");
  offer(riesz_thorin_bound(facts, p), "riesz_thorin");
  if (positive_tp && domain == NormDomain::traceless_hermitian && n >= 2 &&
      t.dim_out() == n) {
    offer(h01_bound(n, p), "h01");
  }
  if (!p.is_infinite() && p.value() == 2.0) offer(exact_norm_p2(t), "exact_p2");
  if (p.is_infinite() && facts.positive) {
    offer(schatten_norm(t.apply(ComplexMatrix::Identity(n, n)), p), "russo_dye");
  }
  return best;
}

}  // namespace

NormEstimate estimate_norm(const SuperOp& t, PExponent p, NormDomain domain,
                           const EstimatorConfig& cfg) {
  return estimate_norm(t, p, domain, cfg, analyze_map(t, cfg.seed));
}

NormEstimate estimate_norm(const SuperOp& t, PExponent p, NormDomain domain,
                           const EstimatorConfig& cfg, const MapFacts& facts) {
  if (cfg.restarts < 1) throw std::invalid_argument("estimator needs restarts >= 1");
  if (cfg.max_iters < 0) throw std::invalid_argument("estimator needs max_iters >= 0");
  if (is_hermitian_domain(domain) && !facts.hermiticity_preserving) {
    throw std::invalid_argument("domain " + to_string(domain) +
                                " requires a Hermiticity-preserving map");
  }
  const int n = t.dim_in();
  if (is_traceless(domain) && n < 2) {
    throw std::invalid_argument("traceless domains need n >= 2");
  }
  const Ascent ascent(t, p, domain);

  NormEstimate est;
  est.upper = certify(t, p, domain, facts);
  bool have_best = false;
  Candidate best;
  bool best_converged = false;

  for (int k = 0; k < cfg.restarts; ++k) {
    std::optional<Candidate> cur;
    if (k == 0 && !is_traceless(domain)) {
      cur = ascent.make(ComplexMatrix::Identity(n, n));
    }
    Rng rng(cfg.seed, static_cast<std::uint64_t>(k) + 1);
    while (!cur) cur = ascent.make(rng.ginibre(n, n));

    bool converged = false;
    int quiet = 0;
    int it = 0;
    double prev_gain = std::numeric_limits<double>::infinity();
    for (; it < cfg.max_iters; ++it) {
      auto next = ascent.fixed_point_step(*cur);
      if (!next || !(next->value > cur->value)) next = ascent.gradient_step(*cur);
      if (!next || !(next->value > cur->value)) {
        converged = true;
        break;
      }
      const double gain = next->value - cur->value;
      cur = std::move(next);
      // Under linear convergence with rate rho the remaining gap is about
      // gain * rho / (1 - rho); stop once that and the step itself are small.
      const double rho = std::isfinite(prev_gain) && prev_gain > 0.0 ? gain / prev_gain : 1.0;
      const double remaining =
          rho < 1.0 ? gain * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
      prev_gain = gain;
      const double target = cfg.tol * cur->value;
      quiet = (gain <= target && remaining <= target) ? quiet + 1 : 0;
      if (quiet >= 3) {
        converged = true;
        break;
      }
    }
    est.iterations += it;
    if (!have_best || cur->value > best.value + 1e-12) {
      best = *cur;
      best_converged = converged;
      have_best = true;
    }
  }

  est.witness = best.a;
  est.lower = best.value;
  est.converged = best_converged;
  std::ostringstream method;
  method << "dual fixed-point ascent (" << cfg.restarts << " restarts)";
  est.method = method.str();
  return est;
}

double brute_force_norm(const SuperOp& t, PExponent p, NormDomain domain, int budget,
                        std::uint64_t seed) {
  if (budget <= 0) throw std::invalid_argument("brute_force_norm needs a positive budget");
  const int n = t.dim_in();
  const auto basis = domain_basis(n, domain);
  const auto m = static_cast<Eigen::Index>(basis.size());
  Rng rng(seed, 0x62727574);
  int used = 0;
  double best = 0.0;

  // The search may steer by a smoothed exponent q, but every evaluated point
  // also scores its exact ratio at p, so `best` is always a valid lower bound.
  auto eval = [&](const RealVector& x, PExponent q) {
    ++used;
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < m; ++k) a += x[k] * basis[k];
    const RealVector sa = singular_values(a);
    const RealVector sb = singular_values(t.apply(a));
    const double den = schatten_norm_of_values(sa, p);
    if (!(den > 0.0)) return 0.0;
    best = std::max(best, schatten_norm_of_values(sb, p) / den);
    if (q == p) return schatten_norm_of_values(sb, p) / den;
    return schatten_norm_of_values(sb, q) / schatten_norm_of_values(sa, q);
  };

  // The unit spheres at p = 1 and p = inf have kinks that stall direct
  // search, so those exponents are approached through smooth ones.
  std::vector<PExponent> stages;
  if (p.is_infinite()) {
    for (double q : {8.0, 32.0, 128.0, 512.0, 2048.0}) stages.emplace_back(q);
  } else if (p.value() == 1.0) {
    for (double q : {8.0, 32.0, 128.0, 512.0, 2048.0}) stages.emplace_back(1.0 + 1.0 / q);
  }
  stages.push_back(p);

  // Phase 1: Gaussian samples of the domain coordinates.
  const int sample_budget = std::max(1, budget / 2);
  constexpr int kKeep = 3;
  std::vector<std::pair<double, RealVector>> top;
  for (int s = 0; s < sample_budget; ++s) {
    RealVector x(m);
    for (Eigen::Index k = 0; k < m; ++k) x[k] = rng.normal();
    const double v = eval(x, stages.front());
    top.emplace_back(v, x);
    std::sort(top.begin(), top.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (top.size() > kKeep) top.pop_back();
  }

  // Phase 2: Hooke-Jeeves pattern search from the best samples, one pass per
  // stage exponent.
  const int per_start = std::max(1, (budget - used) / static_cast<int>(top.size()));
  const int per_stage = std::max(1, per_start / static_cast<int>(stages.size()));
  for (auto& start : top) {
    RealVector x = start.second / start.second.norm();
    for (std::size_t st = 0; st < stages.size(); ++st) {
      const PExponent q = stages[st];
      const int stop_at = used + per_stage;
      double fx = eval(x, q);
      double step = st == 0 ? 0.25 : 0.01;
      auto explore = [&](RealVector y, double& fy) {
        for (Eigen::Index k = 0; k < m && used < stop_at; ++k) {
          const double old = y[k];
          y[k] = old + step;
          double v = eval(y, q);
          if (v > fy) {
            fy = v;
            continue;
          }
          y[k] = old - step;
          v = eval(y, q);
          if (v > fy) {
            fy = v;
            continue;
          }
          y[k] = old;
        }
        return y;
      };
      while (used < stop_at && step > 1e-13) {
        double fy = fx;
        RealVector y = explore(x, fy);
        if (fy > fx) {
          // Pattern move along the improving direction.
          RealVector z = y + (y - x);
          double fz = eval(z, q);
          RealVector z2 = explore(z, fz);
          x = y;
          fx = fy;
          if (fz > fx) {
            x = z2;
            fx = fz;
          }
          const double len = x.norm();
          if (len > 0.0) x /= len;
        } else {
          // Coordinate moves also stall along curved ridges; poll random
          // directions before refining the mesh.
          bool moved = false;
          for (Eigen::Index r = 0; r < m && used < stop_at && !moved; ++r) {
            RealVector d(m);
            for (Eigen::Index k = 0; k < m; ++k) d[k] = rng.normal();
            d *= step / d.norm();
            for (double sign : {1.0, -1.0}) {
              const RealVector z = x + sign * d;
              const double fz = eval(z, q);
              if (fz > fx) {
                x = z / z.norm();
                fx = fz;
                moved = true;
                break;
              }
            }
          }
          if (!moved) step *= 0.5;
        }
      }
    }
  }
  return best;
}

}  // namespace contractivity
