#include "grasph/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace grasph {

namespace {

std::string root_name(const std::vector<int>& coeff) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    if (coeff[j] == 0) continue;
    if (!first) os << (coeff[j] > 0 ? "+" : "-");
    else if (coeff[j] < 0) os << "-";
    int a = std::abs(coeff[j]);
    if (a != 1) os << a;
    os << "e" << (j + 1);
    first = false;
  }
  return os.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

GrassmannianSpace::GrassmannianSpace(int p, int q) : p_(p), q_(q) {
  if (q < 2 || p < q) throw std::invalid_argument("invalid rank parameters");
  // 2e_k with multiplicity 1
  for (int k = 0; k < q; ++k) {
    std::vector<int> c(q, 0);
    c[k] = 2;
    roots_.push_back({c, 1, root_name(c)});
  }
  // e_k with multiplicity 2(p-q), absent when p = q
  if (p > q) {
    for (int k = 0; k < q; ++k) {
      std::vector<int> c(q, 0);
      c[k] = 1;
      roots_.push_back({c, 2 * (p - q), root_name(c)});
    }
  }
  // e_i - e_j and e_i + e_j, i < j, multiplicity 2
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      std::vector<int> cm(q, 0);
      cm[i] = 1;
      cm[j] = -1;
      roots_.push_back({cm, 2, root_name(cm)});
      std::vector<int> cp(q, 0);
      cp[i] = 1;
      cp[j] = 1;
      roots_.push_back({cp, 2, root_name(cp)});
    }
  }
}

std::vector<Rational> GrassmannianSpace::rho() const {
  std::vector<Rational> out;
  out.reserve(q_);
  for (int j = 1; j <= q_; ++j) out.push_back(make_rational(r(), 2) + (q_ - j));
  return out;
}

std::vector<long> GrassmannianSpace::rho_e() const {
  std::vector<long> out;
  out.reserve(q_);
  for (int j = 1; j <= q_; ++j) out.push_back(2L * (q_ - j) + r());
  return out;
}

std::string GrassmannianSpace::name() const {
  std::ostringstream os;
  os << "SU(" << (p_ + q_) << ")/S(U(" << p_ << ")xU(" << q_ << "))";
  return os.str();
}

SphericalWeight SphericalWeight::from_m(std::vector<long> m) {
  if (m.empty()) throw std::invalid_argument("empty weight");
  const int q = static_cast<int>(m.size());
  for (int j = 0; j + 1 < q; ++j)
    if (m[j] < m[j + 1]) throw std::invalid_argument("m-vector must be non-increasing");
  if (m.back() < 0) throw std::invalid_argument("m-vector must be non-negative");
  std::vector<long> n(m.size());
  for (int j = 0; j < q; ++j) n[j] = m[j] + (q - 1 - j);
  return SphericalWeight(std::move(n));
}

SphericalWeight SphericalWeight::from_n(std::vector<long> n) {
  if (n.empty()) throw std::invalid_argument("empty weight");
  for (std::size_t j = 0; j + 1 < n.size(); ++j)
    if (n[j] <= n[j + 1])
      throw std::invalid_argument("n-vector must be strictly decreasing");
  if (n.back() < 0) throw std::invalid_argument("n-vector must be non-negative");
  return SphericalWeight(std::move(n));
}

std::vector<long> SphericalWeight::m() const {
  const int q = rank();
  std::vector<long> m(n_.size());
  for (int j = 0; j < q; ++j) m[j] = n_[j] - (q - 1 - j);
  return m;
}

bool SphericalWeight::is_zero() const {
  const int q = rank();
  for (int j = 0; j < q; ++j)
    if (n_[j] != q - 1 - j) return false;
  return true;
}

std::string SphericalWeight::to_string() const {
  std::ostringstream os;
  os << "n=(";
  for (std::size_t j = 0; j < n_.size(); ++j) {
    if (j) os << ",";
    os << n_[j];
  }
  os << ")";
  return os.str();
}

WeightCursor::WeightCursor(int q, long n_max) {
  if (q < 1 || n_max < q - 1) {
    done_ = true;
    return;
  }
  current_.resize(q);
  for (int j = 0; j < q; ++j) current_[j] = n_max - j;
}

std::optional<SphericalWeight> WeightCursor::next() {
  if (done_) return std::nullopt;
  if (first_) {
    first_ = false;
    return SphericalWeight::from_n(current_);
  }
  const int q = static_cast<int>(current_.size());
  // Lexicographically decreasing successor: decrement the rightmost entry
  // that still leaves room for a strictly decreasing tail down to 0.
  int j = q - 1;
  while (j >= 0 && current_[j] - 1 < q - 1 - j) --j;
  if (j < 0) {
    done_ = true;
    return std::nullopt;
  }
  current_[j] -= 1;
  for (int i = j + 1; i < q; ++i) current_[i] = current_[j] - (i - j);
  return SphericalWeight::from_n(current_);
}

std::vector<SphericalWeight> enumerate_weights(const GrassmannianSpace& space,
                                               long n_max) {
  std::vector<SphericalWeight> out;
  WeightCursor cursor(space.q(), n_max);
  while (auto w = cursor.next()) out.push_back(std::move(*w));
  return out;
}

std::vector<SphericalWeight> shell_weights(const GrassmannianSpace& space, long n1) {
  std::vector<SphericalWeight> out;
  const int q = space.q();
  if (n1 < q - 1) return out;
  WeightCursor cursor(q - 1, n1 - 1);
  while (auto tail = cursor.next()) {
    std::vector<long> n;
    n.reserve(q);
    n.push_back(n1);
    for (long v : tail->n()) n.push_back(v);
    out.push_back(SphericalWeight::from_n(std::move(n)));
  }
  return out;
}

TorusEntry TorusEntry::rational_pi(const Rational& fraction) {
  TorusEntry e;
  e.kind = Kind::kRationalPi;
  e.pi_fraction = fraction;
  // Angle class of t mod pi, folded to [0, 1/2]: cos 2t depends only on this.
  Rational frac = fraction - Rational(floor_int(fraction));
  Rational key = frac <= make_rational(1, 2) ? frac : Rational(1 - frac);
  e.angle_key = key;
  e.radians = to_double(fraction) * M_PI;
  // cos(2t) is rational only for key in {0, 1/6, 1/4, 1/3, 1/2}.
  if (key == 0)
    e.cos2t_exact = Rational(1);
  else if (key == make_rational(1, 6))
    e.cos2t_exact = make_rational(1, 2);
  else if (key == make_rational(1, 4))
    e.cos2t_exact = Rational(0);
  else if (key == make_rational(1, 3))
    e.cos2t_exact = make_rational(-1, 2);
  else if (key == make_rational(1, 2))
    e.cos2t_exact = Rational(-1);
  e.cos2t = e.cos2t_exact ? to_double(*e.cos2t_exact)
                          : std::cos(2.0 * M_PI * to_double(key));
  return e;
}

TorusEntry TorusEntry::float_radians(double t) {
  TorusEntry e;
  e.kind = Kind::kFloatRadians;
  e.radians = t;
  e.cos2t = std::cos(2.0 * t);
  return e;
}

TorusEntry TorusEntry::exact_node(const Rational& x) {
  TorusEntry e;
  e.kind = Kind::kExactNode;
  e.cos2t_exact = x;
  e.cos2t = to_double(x);
  e.radians = std::acos(std::clamp(e.cos2t, -1.0, 1.0)) / 2.0;
  return e;
}

TorusEntry TorusEntry::float_node(double x) {
  TorusEntry e;
  e.kind = Kind::kFloatNode;
  e.cos2t = x;
  e.radians = std::acos(std::clamp(x, -1.0, 1.0)) / 2.0;
  return e;
}

std::string TorusEntry::to_string() const {
  switch (kind) {
    case Kind::kRationalPi:
      return pi_fraction.get_str();
    case Kind::kFloatRadians:
      return format_double(radians) + "f";
    case Kind::kExactNode:
      return "x=" + cos2t_exact->get_str();
    case Kind::kFloatNode:
      return "x=" + format_double(cos2t);
  }
  return "?";
}

namespace {

bool near(double a, double b) {
  return std::abs(a - b) <=
         kConfluenceTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TorusPoint classify_entries(int p, int q, std::vector<TorusEntry> entries) {
  if (static_cast<int>(entries.size()) != q)
    throw std::invalid_argument("point must have exactly q entries");

  TorusPoint pt;
  pt.entries_ = std::move(entries);

  // Group entries into blocks of equal cos 2t.  Exactly-represented entries
  // are compared exactly; anything else falls back to the float tolerance.
  for (int i = 0; i < q; ++i) {
    const TorusEntry& e = pt.entries_[i];
    int found = -1;
    for (std::size_t b = 0; b < pt.blocks_.size() && found < 0; ++b) {
      const TorusEntry& rep = pt.entries_[pt.blocks_[b].front()];
      bool match = false;
      bool exact_decision = false;
      if (e.cos2t_exact && rep.cos2t_exact) {
        match = (*e.cos2t_exact == *rep.cos2t_exact);
        exact_decision = true;
      } else if (e.angle_key && rep.angle_key) {
        match = (*e.angle_key == *rep.angle_key);
        exact_decision = true;
      } else {
        match = near(e.cos2t, rep.cos2t);
      }
      if (match) {
        found = static_cast<int>(b);
        if (!exact_decision && e.cos2t != rep.cos2t) {
          pt.warnings_.push_back(
              "ambiguous float confluence: entries " +
              std::to_string(pt.blocks_[b].front() + 1) + " and " +
              std::to_string(i + 1) + " merged within tolerance");
        }
      }
    }
    if (found >= 0)
      pt.blocks_[found].push_back(i);
    else
      pt.blocks_.push_back({i});
  }

  // Block nodes: mean of the member cosines; exact value when every member
  // certifies the same rational cosine.
  for (const auto& block : pt.blocks_) {
    double sum = 0;
    for (int i : block) sum += pt.entries_[i].cos2t;
    std::optional<Rational> exact = pt.entries_[block.front()].cos2t_exact;
    for (int i : block) {
      if (!pt.entries_[i].cos2t_exact ||
          (exact && *pt.entries_[i].cos2t_exact != *exact))
        exact.reset();
    }
    pt.block_nodes_.push_back(exact ? to_double(*exact)
                                    : sum / static_cast<double>(block.size()));
    pt.block_nodes_exact_.push_back(exact);
  }

  auto block_is = [&](std::size_t b, double target) {
    const TorusEntry& rep = pt.entries_[pt.blocks_[b].front()];
    if (rep.cos2t_exact) return *rep.cos2t_exact == Rational(static_cast<long>(target));
    if (rep.angle_key) return false;  // exact angle class with irrational cosine
    return std::abs(pt.block_nodes_[b] - target) <= kConfluenceTol;
  };

  pt.all_plus_one_ = pt.blocks_.size() == 1 && block_is(0, 1.0);
  pt.all_minus_one_ = pt.blocks_.size() == 1 && block_is(0, -1.0);

  bool any_pm_one = false;
  bool all_singleton = true;
  for (std::size_t b = 0; b < pt.blocks_.size(); ++b) {
    if (pt.blocks_[b].size() > 1) all_singleton = false;
    if (block_is(b, 1.0) || block_is(b, -1.0)) any_pm_one = true;
  }
  pt.is_regular_ = all_singleton && !any_pm_one;

  // Normalizer: alpha(X) = 0 mod pi for all positive restricted roots.  With
  // roots 2e_k, e_k (p > q only), e_i +- e_j this reduces to: all t_k = 0 mod
  // pi when p > q; all t_k = 0 mod pi or all t_k = pi/2 mod pi when p = q.
  pt.in_normalizer_ =
      (p > q) ? pt.all_plus_one_ : (pt.all_plus_one_ || pt.all_minus_one_);

  pt.min_gap_ = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pt.block_nodes_.size(); ++a)
    for (std::size_t b = a + 1; b < pt.block_nodes_.size(); ++b)
      pt.min_gap_ =
          std::min(pt.min_gap_, std::abs(pt.block_nodes_[a] - pt.block_nodes_[b]));

  return pt;
}

TorusPoint classify_point(const GrassmannianSpace& space,
                          std::vector<TorusEntry> entries) {
  return classify_entries(space.p(), space.q(), std::move(entries));
}

TorusPoint parse_point(const GrassmannianSpace& space, const std::string& text) {
  std::vector<TorusEntry> entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string token = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // trim
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.front())))
      token.erase(token.begin());
    while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back())))
      token.pop_back();
    if (token.empty()) throw std::invalid_argument("empty point entry");
    if (token.back() == 'f' || token.back() == 'F') {
      std::size_t pos = 0;
      double t = std::stod(token.substr(0, token.size() - 1), &pos);
      if (pos != token.size() - 1)
        throw std::invalid_argument("malformed float angle: '" + token + "'");
      entries.push_back(TorusEntry::float_radians(t));
    } else {
      entries.push_back(TorusEntry::rational_pi(parse_rational(token)));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return classify_point(space, std::move(entries));
}

TorusPoint point_from_exact_nodes(const GrassmannianSpace& space,
                                  const std::vector<Rational>& nodes) {
  std::vector<TorusEntry> entries;
  entries.reserve(nodes.size());
  for (const auto& x : nodes) entries.push_back(TorusEntry::exact_node(x));
  return classify_point(space, std::move(entries));
}

TorusPoint point_from_float_nodes(const GrassmannianSpace& space,
                                  const std::vector<double>& nodes) {
  std::vector<TorusEntry> entries;
  entries.reserve(nodes.size());
  for (double x : nodes) entries.push_back(TorusEntry::float_node(x));
  return classify_point(space, std::move(entries));
}

TorusPoint collapse_blocks(const GrassmannianSpace& space, const TorusPoint& point,
                           double tol) {
  const auto& blocks = point.blocks();
  const auto& nodes = point.block_nodes();
  const std::size_t nb = blocks.size();
  // Union blocks whose nodes are within tol (transitively, via sorted order).
  std::vector<std::size_t> order(nb);
  for (std::size_t i = 0; i < nb; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::vector<int> group(nb, -1);
  int ngroups = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    if (k > 0 && std::abs(nodes[order[k]] - nodes[order[k - 1]]) < tol)
      group[order[k]] = group[order[k - 1]];
    else
      group[order[k]] = ngroups++;
  }
  // Per merged group, the collapsed node is the mean over member entries.
  std::vector<double> sums(ngroups, 0.0);
  std::vector<int> counts(ngroups, 0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (int i : blocks[b]) {
      sums[group[b]] += point.entries()[i].cos2t;
      counts[group[b]] += 1;
    }
  }
  std::vector<TorusEntry> entries(point.q());
  for (std::size_t b = 0; b < nb; ++b)
    for (int i : blocks[b])
      entries[i] = TorusEntry::float_node(sums[group[b]] / counts[group[b]]);
  return classify_point(space, std::move(entries));
}

bool TorusPoint::all_blocks_singleton() const {
  for (const auto& b : blocks_)
    if (b.size() > 1) return false;
  return true;
}

bool TorusPoint::all_nodes_exact() const {
  for (const auto& x : block_nodes_exact_)
    if (!x) return false;
  return true;
}

std::string TorusPoint::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ",";
    out += entries_[i].to_string();
  }
  return out;
}

Rational degree_surrogate(const GrassmannianSpace& space, const SphericalWeight& w) {
  if (w.rank() != space.q()) throw std::invalid_argument("weight rank mismatch");
  const std::vector<long> rho = space.rho_e();
  const auto& n = w.n();
  Rational prod(1);
  for (const auto& root : space.positive_roots()) {
    long num = 0;
    long den = 0;
    for (int j = 0; j < space.q(); ++j) {
      num += root.coeff[j] * (2 * n[j] + space.r());
      den += root.coeff[j] * rho[j];
    }
    prod *= rational_pow(make_rational(num, den), root.multiplicity);
  }
  return prod;
}

double degree_surrogate_d(const GrassmannianSpace& space, const SphericalWeight& w) {
  if (w.rank() != space.q()) throw std::invalid_argument("weight rank mismatch");
  const std::vector<long> rho = space.rho_e();
  const auto& n = w.n();
  double prod = 1.0;
  for (const auto& root : space.positive_roots()) {
    long num = 0;
    long den = 0;
    for (int j = 0; j < space.q(); ++j) {
      num += root.coeff[j] * (2 * n[j] + space.r());
      den += root.coeff[j] * rho[j];
    }
    double ratio = static_cast<double>(num) / static_cast<double>(den);
    for (int m = 0; m < root.multiplicity; ++m) prod *= ratio;
  }
  return prod;
}

long long casimir(const GrassmannianSpace& space, const SphericalWeight& w) {
  if (w.rank() != space.q()) throw std::invalid_argument("weight rank mismatch");
  const std::vector<long> rho = space.rho_e();
  const std::vector<long> m = w.m();
  long long sum = 0;
  for (int j = 0; j < space.q(); ++j) {
    const long long lam = 2 * m[j];
    sum += lam * (lam + 2 * rho[j]);
  }
  return sum;
}

}  // namespace grasph
