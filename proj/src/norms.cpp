#include "contractivity/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace contractivity {

NormDomain parse_domain(std::string_view name) {
  if (name == "all") return NormDomain::all;
  if (name == "hermitian") return NormDomain::hermitian;
  if (name == "traceless_hermitian") return NormDomain::traceless_hermitian;
  if (name == "traceless_all") return NormDomain::traceless_all;
  throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

std::string to_string(NormDomain domain) {
  switch (domain) {
    case NormDomain::all: return "all";
    case NormDomain::hermitian: return "hermitian";
    case NormDomain::traceless_hermitian: return "traceless_hermitian";
    case NormDomain::traceless_all: return "traceless_all";
  }
  return "unknown";
}

bool is_traceless(NormDomain domain) noexcept {
  return domain == NormDomain::traceless_hermitian || domain == NormDomain::traceless_all;
}

bool is_hermitian_domain(NormDomain domain) noexcept {
  return domain == NormDomain::hermitian || domain == NormDomain::traceless_hermitian;
}

ComplexMatrix project_to_domain(const ComplexMatrix& a, NormDomain domain) {
  ComplexMatrix out = is_hermitian_domain(domain) ? ComplexMatrix((a + a.adjoint()) * 0.5) : a;
  if (is_traceless(domain)) {
    Complex shift = out.trace() / static_cast<double>(out.rows());
    if (is_hermitian_domain(domain)) shift = shift.real();
    out.diagonal().array() -= shift;
  }
  return out;
}

std::vector<ComplexMatrix> domain_basis(int n, NormDomain domain) {
  if (n < 1) throw std::invalid_argument("domain_basis needs n >= 1");
  const Complex i(0.0, 1.0);
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> herm;
  // Diagonal part.
  if (is_traceless(domain)) {
    for (int k = 1; k < n; ++k) {
      ComplexMatrix d = ComplexMatrix::Zero(n, n);
      for (int j = 0; j < k; ++j) d(j, j) = 1.0;
      d(k, k) = -static_cast<double>(k);
      herm.push_back(d / std::sqrt(static_cast<double>(k) * (k + 1)));
    }
  } else {
    for (int k = 0; k < n; ++k) {
      ComplexMatrix d = ComplexMatrix::Zero(n, n);
      d(k, k) = 1.0;
      herm.push_back(d);
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(a, b) = h;
      s(b, a) = h;
      ComplexMatrix t = ComplexMatrix::Zero(n, n);
      t(a, b) = -i * h;
      t(b, a) = i * h;
      herm.push_back(s);
      herm.push_back(t);
    }
  if (is_hermitian_domain(domain)) return herm;
  // Complex span: every Hermitian basis element and i times it.
  std::vector<ComplexMatrix> out;
  out.reserve(2 * herm.size());
  for (const auto& m : herm) {
    out.push_back(m);
    out.push_back(i * m);
  }
  return out;
}

double theorem1_bound(int n, PExponent p) {
  if (n < 1) throw std::invalid_argument("theorem1_bound needs n >= 1");
  return std::pow(static_cast<double>(n), 1.0 - p.reciprocal());
}

double h01_bound(int n, PExponent p) {
  if (n < 2) throw std::invalid_argument("h01_bound needs n >= 2");
  if (n % 2 == 0) {
    if (p.is_infinite()) return n / 2.0;
    return std::pow(n / 2.0, 1.0 - 1.0 / p.value());
  }
  if (p.is_infinite()) return (n - 1) / 2.0;
  const double pv = p.value();
  const double denom = std::pow(n - 1.0, 1.0 - pv) + std::pow(n + 1.0, 1.0 - pv);
  return std::pow(std::pow(2.0, 2.0 - pv) / denom, 1.0 / pv);
}

double saturation_ratio(int n, int d, PExponent p) {
  if (d < 1 || d > n - 1) {
    std::ostringstream os;
    os << "saturation_ratio needs 1 <= d <= n-1 (got n=" << n << ", d=" << d << ")";
    throw std::invalid_argument(os.str());
  }
  // p = inf: ||T(A)||_inf = d and ||A||_inf = max(1, d/(n-d)).
  if (p.is_infinite()) return std::min<double>(d, n - d);
  const double pv = p.value();
  const double dp = std::pow(static_cast<double>(d), pv);
  return std::pow(2.0 * dp / (d + dp * std::pow(static_cast<double>(n - d), 1.0 - pv)), 1.0 / pv);
}

int optimal_saturation_dim(int n) {
  if (n < 2) throw std::invalid_argument("optimal_saturation_dim needs n >= 2");
  return n % 2 == 0 ? n / 2 : (n + 1) / 2;
}

ComplexMatrix saturating_witness(int n, int d) {
  if (d < 1 || d > n - 1) throw std::invalid_argument("saturating_witness needs 1 <= d <= n-1");
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  const double tail = -static_cast<double>(d) / (n - d);
  for (int k = 0; k < n; ++k) a(k, k) = k < d ? 1.0 : tail;
  return a;
}

RussoDyeValue russo_dye_inf_norm(const SuperOp& t) {
  const ComplexMatrix id = ComplexMatrix::Identity(t.dim_in(), t.dim_in());
  RussoDyeValue out;
  out.value = schatten_norm(t.apply(id), PExponent::infinity());
  const auto props = check_props(t);
  out.positivity_verified = props.completely_positive || props.positive_sampled;
  return out;
}

double norm_1_rank_one(const SuperOp& t, int restarts, std::uint64_t seed) {
  const int n = t.dim_in();
  const SuperOp t_adj = adjoint(t);
  Rng rng(seed, 0x72316f);
  auto value = [&](const ComplexVector& psi, const ComplexVector& phi) {
    return schatten_norm(t.apply(psi * phi.adjoint()), PExponent(1.0));
  };
  double best = 0.0;
  const int starts = n + std::max(0, restarts);
  for (int s = 0; s < starts; ++s) {
    ComplexVector psi, phi;
    if (s < n) {
      psi = ComplexVector::Unit(n, s);
      phi = psi;
    } else {
      psi = rng.unit_vector(n);
      phi = rng.unit_vector(n);
    }
    double cur = value(psi, phi);
    for (int it = 0; it < 500; ++it) {
      // D = polar part of T(psi phi^*); new (psi, phi) = top singular pair of T^*(D).
      Eigen::JacobiSVD<ComplexMatrix> out_svd(t.apply(psi * phi.adjoint()),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
      const ComplexMatrix d = out_svd.matrixU() * out_svd.matrixV().adjoint();
      Eigen::JacobiSVD<ComplexMatrix> g_svd(t_adj.apply(d),
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      const ComplexVector npsi = g_svd.matrixU().col(0);
      const ComplexVector nphi = g_svd.matrixV().col(0);
      const double next = value(npsi, nphi);
      if (next <= cur * (1.0 + 1e-14)) {
        cur = std::max(cur, next);
        break;
      }
      psi = npsi;
      phi = nphi;
      cur = next;
    }
    best = std::max(best, cur);
  }
  return best;
}

double exact_norm_p2(const SuperOp& t) { return singular_values(t.natural())[0]; }

MapFacts analyze_map(const SuperOp& t, std::uint64_t seed) {
  MapFacts f;
  const auto props = check_props(t, 500, seed);
  f.positive = props.completely_positive || props.positive_sampled;
  f.trace_preserving = props.trace_preserving;
  f.hermiticity_preserving = is_hermiticity_preserving(t);
  f.norm_1_1 = norm_1_rank_one(t);
  if (f.positive) {
    f.norm_inf_inf =
        schatten_norm(t.apply(ComplexMatrix::Identity(t.dim_in(), t.dim_in())),
                      PExponent::infinity());
  } else {
    f.norm_inf_inf = norm_1_rank_one(adjoint(t));
  }
  return f;
}

double riesz_thorin_bound(const MapFacts& facts, PExponent p) {
  const double theta = p.reciprocal();
  if (theta == 1.0) return facts.norm_1_1;
  if (theta == 0.0) return facts.norm_inf_inf;
  return std::pow(facts.norm_1_1, theta) * std::pow(facts.norm_inf_inf, 1.0 - theta);
}

double riesz_thorin_bound(const SuperOp& t, PExponent p) {
  return riesz_thorin_bound(analyze_map(t), p);
}

double norm_ratio(const SuperOp& t, const ComplexMatrix& a, PExponent p) {
  const double denom = schatten_norm(a, p);
  if (denom == 0.0) throw std::invalid_argument("norm_ratio: zero input");
  return schatten_norm(t.apply(a), p) / denom;
}

namespace {

// Objective of the spectrum program for a given (lambda, mu), normalized so
// that the norm constraint holds.
double spectrum_objective(const std::vector<double>& lambda, const std::vector<double>& mu,
                          double p) {
  const double r = static_cast<double>(lambda.size());
  const double s = static_cast<double>(mu.size());
  double sum_l = 0.0, sum_m = 0.0;
  for (double x : lambda) sum_l += x;
  for (double x : mu) sum_m += x;
  // Rescale mu so that sum lambda = sum mu, then normalize the p-th powers.
  double pow_l = 0.0, pow_m = 0.0;
  for (double x : lambda) pow_l += std::pow(x, p);
  for (double x : mu) pow_m += std::pow(x * sum_l / sum_m, p);
  const double norm = pow_l + pow_m;
  return (std::pow(r, p - 1.0) * pow_l + std::pow(s, p - 1.0) * pow_m) / norm;
}

}  // namespace

double h01_spectrum_oracle(int n, PExponent p) {
  if (n < 2) throw std::invalid_argument("h01_spectrum_oracle needs n >= 2");
  if (p.is_infinite() || p.value() == 1.0) {
    throw std::invalid_argument("h01_spectrum_oracle needs 1 < p < inf; use h01_bound");
  }
  const double pv = p.value();
  Rng rng(0x6f7261636c65ULL, static_cast<std::uint64_t>(n));
  double best = 0.0;
  for (int r = 1; r < n; ++r)
    for (int s = 1; r + s <= n; ++s) {
      // Flat branch: the constraints leave a single feasible point per (r, s).
      best = std::max(best, spectrum_objective(std::vector<double>(r, 1.0),
                                               std::vector<double>(s, 1.0), pv));
      if (r != s) continue;
      // r = s branch: arbitrary spectra; dense random sampling plus
      // coordinate refinement.
      for (int trial = 0; trial < 64; ++trial) {
        std::vector<double> lam(r), mu(s);
        for (auto& x : lam) x = 0.05 + rng.uniform();
        for (auto& x : mu) x = 0.05 + rng.uniform();
        double cur = spectrum_objective(lam, mu, pv);
        double step = 0.25;
        while (step > 1e-6) {
          bool moved = false;
          for (auto* vec : {&lam, &mu})
            for (auto& x : *vec)
              for (double dir : {1.0, -1.0}) {
                const double old = x;
                x = std::max(1e-6, old + dir * step);
                const double v = spectrum_objective(lam, mu, pv);
                if (v > cur) {
                  cur = v;
                  moved = true;
                } else {
                  x = old;
                }
              }
          if (!moved) step *= 0.5;
        }
        best = std::max(best, cur);
      }
    }
  return best;
}

}  // namespace contractivity
