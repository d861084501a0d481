#include "contractivity/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace contractivity {
namespace {

ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, int rows, int cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string shape(Eigen::Index r, Eigen::Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

}  // namespace

SuperOp::SuperOp(int dim_in, int dim_out, ComplexMatrix natural, std::string label)
    : dim_in_(dim_in), dim_out_(dim_out), natural_(std::move(natural)), label_(std::move(label)) {
  require(dim_in >= 1 && dim_out >= 1, "SuperOp dimensions must be positive");
  require(natural_.rows() == dim_out * dim_out && natural_.cols() == dim_in * dim_in,
          "natural representation has shape " + shape(natural_.rows(), natural_.cols()) +
              ", expected " + shape(dim_out * dim_out, dim_in * dim_in));
}

SuperOp SuperOp::from_kraus(KrausSet kraus, std::string label) {
  require(!kraus.operators.empty(), "Kraus set must be nonempty");
  const auto rows = kraus.operators.front().rows();
  const auto cols = kraus.operators.front().cols();
  for (const auto& k : kraus.operators) {
    require(k.rows() == rows && k.cols() == cols, "Kraus operators must share one shape");
  }
  SuperOp out(static_cast<int>(cols), static_cast<int>(rows), natural_from_kraus(kraus),
              std::move(label));
  out.kraus_ = std::move(kraus);
  return out;
}

SuperOp SuperOp::from_choi(int dim_in, int dim_out, ChoiMatrix choi, std::string label) {
  SuperOp out(dim_in, dim_out, natural_from_choi(dim_in, dim_out, choi.matrix), std::move(label));
  out.choi_ = std::move(choi);
  return out;
}

SuperOp SuperOp::with_label(std::string label) const {
  SuperOp out = *this;
  out.label_ = std::move(label);
  return out;
}

SuperOp SuperOp::with_kraus(KrausSet kraus) const {
  SuperOp out = *this;
  out.kraus_ = std::move(kraus);
  return out;
}

SuperOp SuperOp::with_choi(ChoiMatrix choi) const {
  SuperOp out = *this;
  out.choi_ = std::move(choi);
  return out;
}

ComplexMatrix SuperOp::apply(const ComplexMatrix& a) const {
  if (a.rows() != dim_in_ || a.cols() != dim_in_) {
    throw std::invalid_argument("apply: input is " + shape(a.rows(), a.cols()) +
                                " but the map acts on " + shape(dim_in_, dim_in_));
  }
  return unvec(natural_ * vec(a), dim_out_, dim_out_);
}

ComplexMatrix apply(const SuperOp& t, const ComplexMatrix& a) { return t.apply(a); }

ComplexMatrix natural_from_kraus(const KrausSet& kraus) {
  const auto r = kraus.operators.front().rows();
  const auto n = kraus.operators.front().cols();
  ComplexMatrix nat = ComplexMatrix::Zero(r * r, n * n);
  // vec(K A K^*) = (conj(K) (x) K) vec(A) with column stacking.
  for (const auto& k : kraus.operators) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index b = 0; b < r; ++b) {
          const Complex kbj = std::conj(k(b, j));
          for (Eigen::Index a = 0; a < r; ++a) nat(a + b * r, i + j * n) += k(a, i) * kbj;
        }
  }
  return nat;
}

ComplexMatrix natural_from_choi(int dim_in, int dim_out, const ComplexMatrix& choi) {
  const int n = dim_in;
  const int r = dim_out;
  require(choi.rows() == n * r && choi.cols() == n * r,
          "Choi matrix has shape " + shape(choi.rows(), choi.cols()) + ", expected " +
              shape(n * r, n * r));
  ComplexMatrix nat(r * r, n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < r; ++b)
        for (int a = 0; a < r; ++a) nat(a + b * r, i + j * n) = choi(i * r + a, j * r + b);
  return nat;
}

ChoiMatrix choi_of(const SuperOp& t) {
  if (t.choi()) return *t.choi();
  const int n = t.dim_in();
  const int r = t.dim_out();
  const auto& nat = t.natural();
  ComplexMatrix choi(n * r, n * r);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < r; ++b)
        for (int a = 0; a < r; ++a) choi(i * r + a, j * r + b) = nat(a + b * r, i + j * n);
  return {choi};
}

SuperOp adjoint(const SuperOp& t) {
  SuperOp out(t.dim_out(), t.dim_in(), t.natural().adjoint(),
              t.label().empty() ? std::string() : t.label() + "*");
  if (t.kraus()) {
    KrausSet k;
    for (const auto& op : t.kraus()->operators) k.operators.push_back(op.adjoint());
    out = out.with_kraus(std::move(k));
  }
  return out;
}

SuperOp compose(const SuperOp& s, const SuperOp& t) {
  if (t.dim_out() != s.dim_in()) {
    std::ostringstream os;
    os << "compose: inner map outputs M_" << t.dim_out() << " but outer map acts on M_"
       << s.dim_in();
    throw std::invalid_argument(os.str());
  }
  std::string label;
  if (!s.label().empty() || !t.label().empty()) label = s.label() + " o " + t.label();
  SuperOp out(t.dim_in(), s.dim_out(), s.natural() * t.natural(), label);
  if (s.kraus() && t.kraus()) {
    KrausSet k;
    for (const auto& a : s.kraus()->operators)
      for (const auto& b : t.kraus()->operators) k.operators.push_back(a * b);
    out = out.with_kraus(std::move(k));
  }
  return out;
}

Representation parse_representation(const std::string& name) {
  if (name == "kraus") return Representation::kraus;
  if (name == "choi") return Representation::choi;
  if (name == "natural") return Representation::natural;
  throw std::invalid_argument("unknown representation '" + name + "'");
}

namespace {

KrausSet kraus_from_choi(int n, int r, const ComplexMatrix& choi) {
  const double scale = 1.0 + max_abs(choi);
  if (max_abs(choi - choi.adjoint()) > kPropTol * scale) {
    throw std::domain_error("Kraus form requested for a map whose Choi matrix is not Hermitian");
  }
  const ComplexMatrix h = (choi + choi.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const auto& lambda = es.eigenvalues();
  if (lambda.minCoeff() < -kKrausCutoff) {
    std::ostringstream os;
    os << "Kraus form requested for a map that is not completely positive (Choi eigenvalue "
       << lambda.minCoeff() << ")";
    throw std::domain_error(os.str());
  }
  KrausSet out;
  for (Eigen::Index k = lambda.size() - 1; k >= 0; --k) {
    if (lambda[k] <= kKrausCutoff) continue;
    const ComplexVector v = es.eigenvectors().col(k) * std::sqrt(lambda[k]);
    ComplexMatrix op(r, n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < r; ++a) op(a, i) = v[i * r + a];
    out.operators.push_back(std::move(op));
  }
  if (out.operators.empty()) out.operators.push_back(ComplexMatrix::Zero(r, n));
  return out;
}

}  // namespace

SuperOp convert(const SuperOp& t, Representation target) {
  switch (target) {
    case Representation::natural:
      return t;
    case Representation::choi:
      return t.with_choi(choi_of(t));
    case Representation::kraus:
      if (t.kraus()) return t;
      return t.with_kraus(kraus_from_choi(t.dim_in(), t.dim_out(), choi_of(t).matrix));
  }
  throw std::invalid_argument("unknown representation");
}

double representation_mismatch(const SuperOp& t) {
  const int n = t.dim_in();
  const int r = t.dim_out();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = 1.0;
      const ComplexMatrix ref = t.apply(e);
      if (t.kraus()) {
        ComplexMatrix out = ComplexMatrix::Zero(r, r);
        for (const auto& k : t.kraus()->operators) out += k * e * k.adjoint();
        worst = std::max(worst, max_abs(out - ref));
      }
      if (t.choi()) {
        const ComplexMatrix block = t.choi()->matrix.block(i * r, j * r, r, r);
        worst = std::max(worst, max_abs(block - ref));
      }
    }
  return worst;
}

bool is_hermiticity_preserving(const SuperOp& t, double tol) {
  // T preserves Hermiticity iff T(E_ji) = T(E_ij)^* for all matrix units.
  const int n = t.dim_in();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ComplexMatrix eij = ComplexMatrix::Zero(n, n);
      eij(i, j) = 1.0;
      const ComplexMatrix a = t.apply(eij);
      const ComplexMatrix b = t.apply(eij.transpose());
      if (max_abs(a.adjoint() - b) > tol * (1.0 + max_abs(a))) return false;
    }
  return true;
}

double min_output_eigenvalue(const SuperOp& t, int samples, std::uint64_t seed) {
  const int n = t.dim_in();
  const SuperOp t_adj = adjoint(t);
  Rng rng(seed, 0x706f73);
  auto score = [&](const ComplexVector& psi, ComplexVector* min_vec) {
    const ComplexMatrix out = t.apply(psi * psi.adjoint());
    const double skew = max_abs(out - out.adjoint());
    const ComplexMatrix h = (out + out.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (min_vec) *min_vec = es.eigenvectors().col(0);
    return std::min(es.eigenvalues()[0], -skew);
  };

  double worst = std::numeric_limits<double>::infinity();
  ComplexVector worst_psi;
  for (int s = 0; s < samples; ++s) {
    const ComplexVector psi = rng.unit_vector(n);
    const double v = score(psi, nullptr);
    if (v < worst) {
      worst = v;
      worst_psi = psi;
    }
  }
  // Alternate: v = lowest eigenvector of T(psi psi^*), psi = lowest eigenvector
  // of T^*(v v^*). Each half-step cannot increase v^* T(psi psi^*) v.
  ComplexVector psi = worst_psi;
  for (int it = 0; it < 100; ++it) {
    ComplexVector v;
    const double cur = score(psi, &v);
    worst = std::min(worst, cur);
    const ComplexMatrix m = t_adj.apply(v * v.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) * 0.5);
    const ComplexVector next = es.eigenvectors().col(0);
    const double nv = score(next, nullptr);
    if (nv >= cur - 1e-15) {
      worst = std::min(worst, nv);
      break;
    }
    psi = next;
  }
  return worst;
}

ChannelProps check_props(const SuperOp& t, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_props needs at least one sample");
  ChannelProps props;
  const int n = t.dim_in();
  const int r = t.dim_out();

  const ComplexMatrix adj_id = adjoint(t).apply(ComplexMatrix::Identity(r, r));
  props.trace_preserving =
      singular_values(adj_id - ComplexMatrix::Identity(n, n))[0] <= kPropTol;

  if (n == r) {
    const ComplexMatrix out = t.apply(ComplexMatrix::Identity(n, n));
    props.unital = singular_values(out - ComplexMatrix::Identity(n, n))[0] <= kPropTol;
  }

  const ComplexMatrix choi = choi_of(t).matrix;
  const double skew = max_abs(choi - choi.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((choi + choi.adjoint()) * 0.5,
                                                   Eigen::EigenvaluesOnly);
  props.choi_min_eigenvalue = es.eigenvalues()[0];
  props.completely_positive =
      skew <= kPropTol * (1.0 + max_abs(choi)) && props.choi_min_eigenvalue >= -kPropTol;

  const double min_eig = min_output_eigenvalue(t, samples, seed);
  props.positivity_samples = samples;
  props.worst_positivity_violation = std::max(0.0, -min_eig);
  props.positive_sampled = min_eig >= -kPositivityTol;

  if (props.completely_positive && !props.positive_sampled) {
    throw std::logic_error("check_props: completely positive map failed sampled positivity");
  }
  return props;
}

SuperOp make_identity(int n) {
  require(n >= 1, "identity channel needs n >= 1");
  return SuperOp::from_kraus({{ComplexMatrix::Identity(n, n)}}, "identity");
}

SuperOp make_trace_channel(int n) {
  require(n >= 1, "trace channel needs n >= 1");
  KrausSet k;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix bra = ComplexMatrix::Zero(1, n);
    bra(0, i) = 1.0;
    k.operators.push_back(bra);
  }
  return SuperOp::from_kraus(std::move(k), "trace");
}

SuperOp make_projector_measurement(int n, int d) {
  if (d < 1 || d > n - 1) {
    std::ostringstream os;
    os << "projector measurement needs 1 <= d <= n-1 (got n=" << n << ", d=" << d << ")";
    throw std::invalid_argument(os.str());
  }
  KrausSet k;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix op = ComplexMatrix::Zero(n, n);
    op(i < d ? 0 : 1, i) = 1.0;
    k.operators.push_back(op);
  }
  std::ostringstream label;
  label << "projector_measurement(n=" << n << ",d=" << d << ")";
  return SuperOp::from_kraus(std::move(k), label.str());
}

SuperOp make_qutrit_counterexample() {
  KrausSet k;
  const int src[3] = {0, 1, 2};
  const int dst[3] = {0, 0, 1};
  for (int m = 0; m < 3; ++m) {
    ComplexMatrix op = ComplexMatrix::Zero(3, 3);
    op(dst[m], src[m]) = 1.0;
    k.operators.push_back(op);
  }
  return SuperOp::from_kraus(std::move(k), "qutrit_counterexample");
}

SuperOp make_depolarizing(int n, double mu) {
  require(n >= 1, "depolarizing channel needs n >= 1");
  require(std::isfinite(mu), "depolarizing parameter must be finite");
  const ComplexVector id = vec(ComplexMatrix::Identity(n, n));
  ComplexMatrix nat = mu * ComplexMatrix::Identity(n * n, n * n) +
                      ((1.0 - mu) / n) * (id * id.adjoint());
  std::ostringstream label;
  label << "depolarizing(n=" << n << ",mu=" << mu << ")";
  return SuperOp(n, n, std::move(nat), label.str());
}

SuperOp make_transpose(int n) {
  require(n >= 2, "transpose map needs n >= 2");
  ComplexMatrix nat = ComplexMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) nat(j + i * n, i + j * n) = 1.0;
  return SuperOp(n, n, std::move(nat), "transpose");
}

SuperOp make_unitary_channel(const ComplexMatrix& u) {
  require(u.rows() == u.cols(), "unitary channel needs a square matrix");
  return SuperOp::from_kraus({{u}}, "unitary");
}

SuperOp make_random_cptp(int n, int r, int env_dim, std::uint64_t seed) {
  require(n >= 1 && r >= 1, "random channel dimensions must be positive");
  require(env_dim >= 1, "env_dim must be >= 1");
  require(r * env_dim >= n, "Stinespring isometry needs dim_out * env_dim >= dim_in");
  Rng rng(seed, 0x637074);
  const int big = r * env_dim;
  // Isometry V: C^n -> C^r (x) C^env, rows ordered (system, environment).
  const ComplexMatrix v = haar_unitary(big, rng).leftCols(n);
  KrausSet k;
  for (int e = 0; e < env_dim; ++e) {
    ComplexMatrix op(r, n);
    for (int a = 0; a < r; ++a) op.row(a) = v.row(a * env_dim + e);
    k.operators.push_back(std::move(op));
  }
  std::ostringstream label;
  label << "random_cptp(n=" << n << ",r=" << r << ",env=" << env_dim << ",seed=" << seed << ")";
  return SuperOp::from_kraus(std::move(k), label.str());
}

SuperOp make_unitary_mixture(const std::vector<double>& probabilities,
                             const std::vector<ComplexMatrix>& unitaries) {
  require(!probabilities.empty(), "unitary mixture needs at least one term");
  require(probabilities.size() == unitaries.size(),
          "unitary mixture needs one probability per unitary");
  double total = 0.0;
  for (double p : probabilities) {
    require(std::isfinite(p) && p >= 0.0, "mixture probabilities must be nonnegative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture probabilities must sum to 1");
  const auto n = unitaries.front().rows();
  KrausSet k;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const auto& u = unitaries[i];
    require(u.rows() == n && u.cols() == n, "mixture unitaries must share one square shape");
    require(max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n)) <= 1e-10,
            "mixture term is not unitary");
    if (probabilities[i] == 0.0) continue;
    k.operators.push_back(std::sqrt(probabilities[i]) * u);
  }
  return SuperOp::from_kraus(std::move(k), "unitary_mixture");
}

SuperOp make_random_unitary_mixture(int n, int terms, std::uint64_t seed) {
  require(terms >= 1, "unitary mixture needs at least one term");
  Rng rng(seed, 0x756d6978);
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& x : w) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  std::vector<ComplexMatrix> us;
  for (auto& x : w) {
    x /= total;
    us.push_back(haar_unitary(n, rng));
  }
  // Renormalizing after the division keeps the sum within rounding of 1.
  double s = 0.0;
  for (double x : w) s += x;
  w.back() += 1.0 - s;
  std::ostringstream label;
  label << "unitary_mixture(n=" << n << ",terms=" << terms << ",seed=" << seed << ")";
  return make_unitary_mixture(w, us).with_label(label.str());
}

SuperOp complementary_channel(const SuperOp& t) {
  if (!t.kraus()) {
    throw std::invalid_argument("complementary channel needs a Kraus representation");
  }
  const auto& ks = t.kraus()->operators;
  const int k = static_cast<int>(ks.size());
  const int n = t.dim_in();
  const int r = t.dim_out();
  // F_m(i, a) = K_i(m, a) gives T^C(rho)_ij = sum_m (F_m rho F_m^*)_ij = tr(K_i rho K_j^*).
  KrausSet out;
  for (int m = 0; m < r; ++m) {
    ComplexMatrix f(k, n);
    for (int i = 0; i < k; ++i) f.row(i) = ks[i].row(m);
    out.operators.push_back(std::move(f));
  }
  return SuperOp::from_kraus(std::move(out),
                             t.label().empty() ? "complementary" : t.label() + "^C");
}

UnitalSplit split_unital_part(const SuperOp& t) {
  require(t.dim_in() == t.dim_out(), "split_unital_part needs a square map");
  const int n = t.dim_in();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (singular_values(adjoint(t).apply(id) - id)[0] > kPropTol) {
    throw std::invalid_argument("split_unital_part needs a trace-preserving map");
  }
  const ComplexMatrix offset = (t.apply(id) - id) / static_cast<double>(n);
  const ComplexMatrix nat = t.natural() - vec(offset) * vec(id).adjoint();
  return {offset, SuperOp(n, n, nat, t.label().empty() ? "T1" : t.label() + "_unital")};
}

}  // namespace contractivity
