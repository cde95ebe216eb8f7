#include "grasph/spherical.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "grasph/jacobi.hpp"

namespace grasph {

namespace {

template <typename T>
T from_integer(const Integer& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(v);
  } else {
    return static_cast<T>(v.get_d());
  }
}

template <typename T>
T from_rational(const Rational& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return v;
  } else {
    return static_cast<T>(v.get_d());
  }
}

/// Gaussian elimination; partial pivoting in floating mode, first non-zero
/// pivot in exact mode (division is exact there).
template <typename T>
T determinant(std::vector<std::vector<T>> a) {
  const int n = static_cast<int>(a.size());
  T det(1);
  int sign = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    if constexpr (std::is_floating_point_v<T>) {
      T best(0);
      for (int r = c; r < n; ++r) {
        T mag = std::abs(a[r][c]);
        if (mag > best) {
          best = mag;
          pivot = r;
        }
      }
    } else {
      for (int r = c; r < n; ++r) {
        if (a[r][c] != 0) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot < 0 || a[pivot][c] == 0) return T(0);
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      sign = -sign;
    }
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      T f = a[r][c] / a[c][c];
      for (int cc = c; cc < n; ++cc) a[r][cc] -= f * a[c][cc];
    }
    det *= a[c][c];
  }
  if (sign < 0) det = -det;
  return det;
}

/// prod_{j<k} (n_j(n_j+r) - n_k(n_k+r)); positive for strictly decreasing n.
template <typename T>
T spacing_product(const std::vector<long>& n, int r) {
  T prod(1);
  for (std::size_t j = 0; j < n.size(); ++j) {
    const long long nj = static_cast<long long>(n[j]) * (n[j] + r);
    for (std::size_t k = j + 1; k < n.size(); ++k) {
      const long long nk = static_cast<long long>(n[k]) * (n[k] + r);
      prod *= from_integer<T>(Integer(static_cast<long>(nj - nk)));
    }
  }
  return prod;
}

/// Tables for one node: row i holds P~_n^{(i)}(x) / i! over n = 0..n_max,
/// the divided-difference column entries for a block of that size.
template <typename T>
std::vector<std::vector<T>> build_node_tables(int gap, long n_max, const T& x,
                                              int orders) {
  std::vector<std::vector<T>> rows;
  rows.reserve(orders);
  for (int i = 0; i < orders; ++i) {
    std::vector<T> row(static_cast<std::size_t>(n_max) + 1, T(0));
    if (n_max >= i) {
      std::vector<T> tab = jacobi_table<T>(gap + i, i, n_max - i, x);
      T scale = rational_pow(T(2), i) * from_integer<T>(factorial(i));
      for (long n = i; n <= n_max; ++n) {
        T pref(1);
        for (long m = 1; m <= i; ++m) pref *= from_integer<T>(Integer(n + gap + m));
        T denom = scale * from_integer<T>(binomial(n + gap, n));
        row[static_cast<std::size_t>(n)] = tab[static_cast<std::size_t>(n - i)] * pref / denom;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
T cross_block_product(const std::vector<T>& nodes, const std::vector<std::size_t>& sizes) {
  T prod(1);
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      T diff = nodes[a] - nodes[b];
      prod *= rational_pow(diff, static_cast<long>(sizes[a] * sizes[b]));
    }
  return prod;
}

std::string format_gap(double g) {
  std::ostringstream os;
  os.precision(3);
  os << g;
  return os.str();
}

}  // namespace

Integer c_pq(const GrassmannianSpace& space) {
  const int q = space.q();
  Integer c;
  mpz_ui_pow_ui(c.get_mpz_t(), 2, static_cast<unsigned long>(q) * (q - 1) / 2);
  for (int j = 1; j <= q - 1; ++j) {
    Integer pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(j + space.gap()),
                  static_cast<unsigned long>(q - j));
    c *= factorial(j) * pw;
  }
  return c;
}

std::string to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::kAuto: return "auto";
    case EvalMode::kGeneric: return "generic";
    case EvalMode::kConfluent: return "confluent";
    case EvalMode::kOracle: return "oracle";
  }
  return "?";
}

std::string to_string(EvalPath path) {
  switch (path) {
    case EvalPath::kGeneric: return "generic";
    case EvalPath::kConfluent: return "confluent";
    case EvalPath::kMinusOneClosedForm: return "minus_one_closed_form";
    case EvalPath::kOracle: return "oracle";
  }
  return "?";
}

EvalMode eval_mode_from_string(const std::string& text) {
  if (text == "auto") return EvalMode::kAuto;
  if (text == "generic") return EvalMode::kGeneric;
  if (text == "confluent") return EvalMode::kConfluent;
  if (text == "oracle") return EvalMode::kOracle;
  throw std::invalid_argument("unknown mode: '" + text + "'");
}

struct SphericalEvaluator::Impl {
  const GrassmannianSpace* space = nullptr;
  TorusPoint point;
  long prepared_n = -1;
  long prepared_exact_n = -1;

  // [block][derivative order][degree n]
  std::vector<std::vector<std::vector<double>>> ftab;
  std::vector<std::vector<std::vector<Rational>>> xtab;

  double cpq_d = 1.0;
  Rational cpq_x;
  double cross_d = 1.0;
  Rational cross_x;
  int conf_sign = 1;

  std::unique_ptr<SphericalEvaluator> collapsed;

  // Fetched lazily so that calibration itself (which only uses oracle_raw)
  // can construct evaluators without recursing into the calibration cache.
  mutable std::atomic<const CalibrationRecord*> record_cache{nullptr};

  const CalibrationRecord& record() const {
    const CalibrationRecord* rec = record_cache.load(std::memory_order_acquire);
    if (rec == nullptr) {
      rec = &calibration_for(*space);
      record_cache.store(rec, std::memory_order_release);
    }
    return *rec;
  }

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(point.blocks().size());
    for (const auto& b : point.blocks()) sizes.push_back(b.size());
    return sizes;
  }

  void check_weight(const SphericalWeight& w) const {
    if (w.rank() != space->q()) throw std::invalid_argument("weight rank mismatch");
  }
};

SphericalEvaluator::SphericalEvaluator(const GrassmannianSpace& space, TorusPoint point)
    : impl_(std::make_unique<Impl>()) {
  if (point.q() != space.q())
    throw std::invalid_argument("point must have exactly q entries");
  impl_->space = &space;
  impl_->point = std::move(point);
  Integer c = c_pq(space);
  impl_->cpq_x = Rational(c);
  impl_->cpq_d = c.get_d();

  const auto sizes = impl_->block_sizes();
  impl_->cross_d = cross_block_product(impl_->point.block_nodes(), sizes);
  for (std::size_t s : sizes)
    if ((s * (s - 1) / 2) % 2 == 1) impl_->conf_sign = -impl_->conf_sign;

  if (impl_->point.blocks().size() >= 2 &&
      impl_->point.min_gap() < kNearConfluentGap) {
    impl_->collapsed = std::make_unique<SphericalEvaluator>(
        space, collapse_blocks(space, impl_->point, kNearConfluentGap));
  }
}

SphericalEvaluator::~SphericalEvaluator() = default;
SphericalEvaluator::SphericalEvaluator(SphericalEvaluator&&) noexcept = default;
SphericalEvaluator& SphericalEvaluator::operator=(SphericalEvaluator&&) noexcept = default;

const TorusPoint& SphericalEvaluator::point() const { return impl_->point; }
const GrassmannianSpace& SphericalEvaluator::space() const { return *impl_->space; }

void SphericalEvaluator::prepare(long n_max) {
  if (n_max <= impl_->prepared_n) return;
  const int gap = impl_->space->gap();
  impl_->ftab.clear();
  const auto& blocks = impl_->point.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    impl_->ftab.push_back(build_node_tables<double>(
        gap, n_max, impl_->point.block_nodes()[b], static_cast<int>(blocks[b].size())));
  }
  impl_->prepared_n = n_max;
  if (impl_->collapsed) impl_->collapsed->prepare(n_max);
}

void SphericalEvaluator::prepare_exact(long n_max) {
  if (n_max <= impl_->prepared_exact_n) return;
  if (!impl_->point.all_nodes_exact()) throw std::domain_error("irrational node");
  const int gap = impl_->space->gap();
  const auto& blocks = impl_->point.blocks();
  std::vector<Rational> nodes;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    nodes.push_back(*impl_->point.block_nodes_exact()[b]);
  impl_->xtab.clear();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    impl_->xtab.push_back(build_node_tables<Rational>(
        gap, n_max, nodes[b], static_cast<int>(blocks[b].size())));
  }
  impl_->cross_x = cross_block_product(nodes, impl_->block_sizes());
  impl_->prepared_exact_n = n_max;
}

EvalResult SphericalEvaluator::eval_generic(const SphericalWeight& w) const {
  impl_->check_weight(w);
  if (!impl_->point.all_blocks_singleton())
    throw std::invalid_argument("confluent point");
  if (w.n1() > impl_->prepared_n)
    throw std::logic_error("evaluator not prepared to requested degree");

  const int q = impl_->space->q();
  const auto& n = w.n();
  std::vector<std::vector<double>> a(q, std::vector<double>(q));
  for (int j = 0; j < q; ++j)
    for (int k = 0; k < q; ++k)
      a[j][k] = impl_->ftab[k][0][static_cast<std::size_t>(n[j])];
  const double det = determinant(std::move(a));
  const double spacing = spacing_product<double>(n, impl_->space->r());

  EvalResult res;
  res.value = impl_->cpq_d * det / (impl_->cross_d * spacing);
  res.path_taken = EvalPath::kGeneric;
  res.condition_estimate = 1.0 / impl_->point.min_gap();
  if (impl_->point.min_gap() < kNearConfluentGap)
    res.warnings.push_back("ill-conditioned generic evaluation: node gap " +
                           format_gap(impl_->point.min_gap()));
  return res;
}

EvalResult SphericalEvaluator::eval_confluent(const SphericalWeight& w) const {
  impl_->check_weight(w);
  if (w.n1() > impl_->prepared_n)
    throw std::logic_error("evaluator not prepared to requested degree");

  const CalibrationRecord& rec = impl_->record();
  const int q = impl_->space->q();
  const auto& n = w.n();
  const auto& blocks = impl_->point.blocks();
  std::vector<std::vector<double>> a(q, std::vector<double>(q));
  int col = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].size(); ++i, ++col)
      for (int j = 0; j < q; ++j)
        a[j][col] = impl_->ftab[b][i][static_cast<std::size_t>(n[j])];
  }
  const double det = determinant(std::move(a));
  const double spacing = spacing_product<double>(n, impl_->space->r());

  EvalResult res;
  res.value = to_double(rec.global_constant) * impl_->cpq_d * impl_->conf_sign * det /
              (impl_->cross_d * spacing);
  res.path_taken = EvalPath::kConfluent;
  res.condition_estimate = std::numeric_limits<double>::infinity();
  return res;
}

EvalResult SphericalEvaluator::eval_minus_one(const SphericalWeight& w) const {
  impl_->check_weight(w);
  if (impl_->space->p() == impl_->space->q())
    throw std::invalid_argument("normalizer point");
  if (!impl_->point.all_minus_one())
    throw std::invalid_argument("point is not of the all-(-1) type");

  const CalibrationRecord& rec = impl_->record();
  const int gap = impl_->space->gap();
  double denom = 1.0;
  long parity = 0;
  for (long nj : w.n()) {
    parity += nj;
    for (int i = 1; i <= gap; ++i)
      denom *= static_cast<double>(nj + i) / static_cast<double>(i);
  }
  EvalResult res;
  res.value = to_double(rec.minus_one_kappa) * (parity % 2 == 0 ? 1.0 : -1.0) / denom;
  res.path_taken = EvalPath::kMinusOneClosedForm;
  res.condition_estimate = 0.0;
  return res;
}

EvalResult SphericalEvaluator::eval_auto(const SphericalWeight& w) const {
  if (impl_->collapsed) {
    EvalResult res = impl_->collapsed->eval_auto(w);
    res.condition_estimate = 1.0 / impl_->point.min_gap();
    std::string note = "near-confluent nodes (min gap " +
                       format_gap(impl_->point.min_gap()) +
                       "): returning block-collapsed confluent value";
    if (impl_->point.all_blocks_singleton() && w.n1() <= impl_->prepared_n) {
      const EvalResult gen = eval_generic(w);
      note += "; generic path differs by " + format_gap(std::abs(gen.value - res.value));
    }
    res.warnings.push_back(std::move(note));
    return res;
  }
  if (impl_->point.all_blocks_singleton()) return eval_generic(w);
  if (impl_->point.all_minus_one() && impl_->space->p() > impl_->space->q())
    return eval_minus_one(w);
  return eval_confluent(w);
}

Rational SphericalEvaluator::oracle_raw(const SphericalWeight& w) const {
  impl_->check_weight(w);
  if (w.n1() > impl_->prepared_exact_n)
    throw std::logic_error("evaluator not prepared (exact) to requested degree");

  const int q = impl_->space->q();
  const auto& n = w.n();
  const auto& blocks = impl_->point.blocks();
  std::vector<std::vector<Rational>> a(q, std::vector<Rational>(q));
  int col = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].size(); ++i, ++col)
      for (int j = 0; j < q; ++j)
        a[j][col] = impl_->xtab[b][i][static_cast<std::size_t>(n[j])];
  }
  Rational det = determinant(std::move(a));
  Rational spacing = spacing_product<Rational>(n, impl_->space->r());
  Rational value = impl_->cpq_x * det / (impl_->cross_x * spacing);
  if (impl_->conf_sign < 0) value = -value;
  return value;
}

Rational SphericalEvaluator::oracle_exact(const SphericalWeight& w) const {
  return impl_->record().global_constant * oracle_raw(w);
}

CalibrationRecord calibrate_constants(const GrassmannianSpace& space,
                                      std::span<const SphericalWeight> samples) {
  if (samples.empty()) throw std::invalid_argument("calibration needs sample weights");
  const int q = space.q();
  long n_max = 0;
  for (const auto& w : samples) n_max = std::max(n_max, w.n1());

  TorusPoint identity =
      point_from_exact_nodes(space, std::vector<Rational>(q, Rational(1)));
  SphericalEvaluator ev(space, identity);
  ev.prepare_exact(n_max);

  CalibrationRecord rec;
  rec.p = space.p();
  rec.q = q;
  rec.sample_count = static_cast<int>(samples.size());

  bool have = false;
  Rational constant;
  Rational raw_anchor;
  for (const auto& w : samples) {
    Rational raw = ev.oracle_raw(w);
    if (raw == 0) throw std::runtime_error("inconsistent calibration");
    Rational k = Rational(1) / raw;
    if (!have) {
      constant = k;
      raw_anchor = raw;
      have = true;
    } else if (k != constant) {
      throw std::runtime_error("inconsistent calibration");
    }
  }
  rec.global_constant = constant;
  rec.consistent = true;

  const int vsign = ((static_cast<long>(q) * (q - 1) / 2) % 2 == 0) ? 1 : -1;
  Rational eq3 = constant * Rational(vsign) / Rational(superfactorial(q - 1));
  rec.eq3_constant = eq3;
  Rational abs_eq3 = abs(eq3);
  rec.matches_paper_constant = (abs_eq3 == Rational(1) / Rational(factorial(q - 1)));
  rec.matches_classical_constant =
      (abs_eq3 == Rational(1) / Rational(superfactorial(q - 1)));
  // Does the published plain-derivative form normalize without C_{p,q}?
  // raw = C_{p,q} * sign * det/(prod k! * spacing), so the form with constant
  // sign/(q-1)! alone evaluates at the identity to:
  Rational without_cpq = raw_anchor * Rational(superfactorial(q - 1)) /
                         (Rational(c_pq(space)) * Rational(factorial(q - 1)));
  rec.eq3_requires_cpq = (without_cpq != 1);

  if (space.p() > space.q()) {
    TorusPoint minus =
        point_from_exact_nodes(space, std::vector<Rational>(q, Rational(-1)));
    SphericalEvaluator evm(space, minus);
    SphericalWeight w0 = SphericalWeight::from_m(std::vector<long>(q, 0));
    evm.prepare_exact(w0.n1());
    Rational phi0 = constant * evm.oracle_raw(w0);
    Rational prod(1);
    long parity = 0;
    for (long nj : w0.n()) {
      parity += nj;
      prod *= Rational(binomial(nj + space.gap(), nj));
    }
    rec.minus_one_kappa = phi0 * prod;
    if (parity % 2 != 0) rec.minus_one_kappa = -rec.minus_one_kappa;
  } else {
    rec.minus_one_kappa = Rational(0);
  }
  return rec;
}

const CalibrationRecord& calibration_for(const GrassmannianSpace& space) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<CalibrationRecord>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(space.p(), space.q());
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<SphericalWeight> all = enumerate_weights(space, space.q() + 1);
    std::vector<SphericalWeight> samples(all.begin(),
                                         all.begin() + std::min<std::size_t>(6, all.size()));
    auto rec = std::make_unique<CalibrationRecord>(calibrate_constants(space, samples));
    it = cache.emplace(key, std::move(rec)).first;
  }
  return *it->second;
}

namespace {

EvalResult oracle_result(const SphericalEvaluator& ev, const SphericalWeight& w) {
  EvalResult res;
  res.value = to_double(ev.oracle_exact(w));
  res.path_taken = EvalPath::kOracle;
  res.condition_estimate = 0.0;
  return res;
}

}  // namespace

EvalResult evaluate(const EvalRequest& req) {
  if (req.space == nullptr) throw std::invalid_argument("request without space");
  SphericalEvaluator ev(*req.space, req.point);
  switch (req.mode) {
    case EvalMode::kGeneric:
      ev.prepare(req.weight.n1());
      return ev.eval_generic(req.weight);
    case EvalMode::kConfluent:
      ev.prepare(req.weight.n1());
      return ev.eval_confluent(req.weight);
    case EvalMode::kOracle:
      ev.prepare_exact(req.weight.n1());
      return oracle_result(ev, req.weight);
    case EvalMode::kAuto:
      ev.prepare(req.weight.n1());
      return ev.eval_auto(req.weight);
  }
  throw std::logic_error("unreachable");
}

EvalResult eval_generic(const EvalRequest& req) {
  EvalRequest r = req;
  r.mode = EvalMode::kGeneric;
  return evaluate(r);
}

EvalResult eval_confluent(const EvalRequest& req) {
  EvalRequest r = req;
  r.mode = EvalMode::kConfluent;
  return evaluate(r);
}

EvalResult eval_minus_one_closed_form(const EvalRequest& req) {
  if (req.space == nullptr) throw std::invalid_argument("request without space");
  SphericalEvaluator ev(*req.space, req.point);
  return ev.eval_minus_one(req.weight);
}

EvalResult eval_auto(const EvalRequest& req) {
  EvalRequest r = req;
  r.mode = EvalMode::kAuto;
  return evaluate(r);
}

Rational oracle_exact(const EvalRequest& req) {
  if (req.space == nullptr) throw std::invalid_argument("request without space");
  SphericalEvaluator ev(*req.space, req.point);
  ev.prepare_exact(req.weight.n1());
  return ev.oracle_exact(req.weight);
}

}  // namespace grasph
