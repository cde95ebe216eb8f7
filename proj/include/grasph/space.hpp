#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grasph/rational.hpp"

namespace grasph {

/// Positive restricted root in the e-basis of R^q, with its multiplicity.
struct RestrictedRoot {
  std::vector<int> coeff;
  int multiplicity = 1;
  std::string name;
};

/// Immutable descriptor of the complex Grassmannian SU(p+q)/S(U(p)xU(q)),
/// p >= q >= 2.  Rank q, dimension 2pq, restricted root system of type BC_q
/// with multiplicities m_{2e_k}=1, m_{e_k}=2(p-q) (absent when p=q),
/// m_{e_i +- e_j}=2.
class GrassmannianSpace {
 public:
  GrassmannianSpace(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  int r() const { return p_ - q_ + 1; }
  int gap() const { return p_ - q_; }
  int rank() const { return q_; }
  long dim() const { return 2L * p_ * q_; }

  const std::vector<RestrictedRoot>& positive_roots() const { return roots_; }

  /// rho as coefficients of 2e_j: r/2 + q - j.
  std::vector<Rational> rho() const;
  /// rho in plain e-basis coordinates: 2(q-j) + r (integers).
  std::vector<long> rho_e() const;

  std::string name() const;  // e.g. "SU(5)/S(U(3)xU(2))"

 private:
  int p_;
  int q_;
  std::vector<RestrictedRoot> roots_;
};

inline GrassmannianSpace make_space(int p, int q) { return GrassmannianSpace(p, q); }

/// Dominant spherical weight lambda = sum 2 m_j e_j, carried by its m-vector
/// (non-increasing, >= 0) and the derived strictly decreasing n_j = m_j + q - j.
class SphericalWeight {
 public:
  static SphericalWeight from_m(std::vector<long> m);
  static SphericalWeight from_n(std::vector<long> n);

  const std::vector<long>& n() const { return n_; }
  std::vector<long> m() const;
  long n1() const { return n_.front(); }
  int rank() const { return static_cast<int>(n_.size()); }
  bool is_zero() const;

  std::string to_string() const;

  bool operator==(const SphericalWeight& other) const { return n_ == other.n_; }

 private:
  explicit SphericalWeight(std::vector<long> n) : n_(std::move(n)) {}
  std::vector<long> n_;
};

/// Streams the strictly decreasing n-vectors with n_1 <= n_max in
/// lexicographically decreasing order.
class WeightCursor {
 public:
  WeightCursor(int q, long n_max);
  /// Returns the next weight, or nullopt when exhausted.
  std::optional<SphericalWeight> next();

 private:
  std::vector<long> current_;
  bool done_ = false;
  bool first_ = true;
};

/// All weights with n_1 <= n_max; count is binom(n_max+1, q).
std::vector<SphericalWeight> enumerate_weights(const GrassmannianSpace& space, long n_max);

/// All weights with n_1 == n1 (the "shell" of n1); count is binom(n1, q-1).
std::vector<SphericalWeight> shell_weights(const GrassmannianSpace& space, long n1);

/// One torus coordinate: an exact rational multiple of pi, a floating angle
/// in radians, or a direct cos(2t) node value (exact or floating).
struct TorusEntry {
  enum class Kind { kRationalPi, kFloatRadians, kExactNode, kFloatNode };

  Kind kind = Kind::kFloatRadians;
  Rational pi_fraction;                  // kRationalPi: t = pi_fraction * pi
  double radians = 0.0;                  // kFloatRadians
  double cos2t = 0.0;                    // always populated
  std::optional<Rational> cos2t_exact;   // kExactNode, or kRationalPi with rational cosine
  std::optional<Rational> angle_key;     // kRationalPi: class of t mod pi folded to [0, 1/2]

  static TorusEntry rational_pi(const Rational& fraction);
  static TorusEntry float_radians(double t);
  static TorusEntry exact_node(const Rational& x);
  static TorusEntry float_node(double x);

  std::string to_string() const;
};

/// Relative tolerance on cos(2t) used to classify floating confluence.
inline constexpr double kConfluenceTol = 1e-12;

/// Torus point with its confluence classification: blocks of equal cos(2t),
/// regularity and normalizer flags.  Exact entries are compared exactly;
/// floating entries within kConfluenceTol are merged (with a warning).
class TorusPoint {
 public:
  int q() const { return static_cast<int>(entries_.size()); }
  const std::vector<TorusEntry>& entries() const { return entries_; }

  /// Partition of {0..q-1} into maximal groups of equal cos(2t), ordered by
  /// first appearance.
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<double>& block_nodes() const { return block_nodes_; }
  const std::vector<std::optional<Rational>>& block_nodes_exact() const {
    return block_nodes_exact_;
  }

  bool is_regular() const { return is_regular_; }
  bool in_normalizer() const { return in_normalizer_; }
  bool all_minus_one() const { return all_minus_one_; }
  bool all_plus_one() const { return all_plus_one_; }

  /// Smallest distance between distinct block nodes (inf for one block).
  double min_gap() const { return min_gap_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool all_blocks_singleton() const;
  /// True when every block carries an exact rational node (oracle eligible).
  bool all_nodes_exact() const;

  std::string to_string() const;

  friend TorusPoint classify_entries(int p, int q, std::vector<TorusEntry> entries);

 private:
  std::vector<TorusEntry> entries_;
  std::vector<std::vector<int>> blocks_;
  std::vector<double> block_nodes_;
  std::vector<std::optional<Rational>> block_nodes_exact_;
  bool is_regular_ = false;
  bool in_normalizer_ = false;
  bool all_minus_one_ = false;
  bool all_plus_one_ = false;
  double min_gap_ = 0.0;
  std::vector<std::string> warnings_;
};

TorusPoint classify_entries(int p, int q, std::vector<TorusEntry> entries);

/// Classifies a point given per-coordinate angles.
TorusPoint classify_point(const GrassmannianSpace& space, std::vector<TorusEntry> entries);

/// Parses the CLI point syntax: comma-separated entries, each "num/den"
/// (rational multiple of pi) or a decimal literal with an "f" suffix
/// (radians, floating path).  "1/5,1/7" is the point (pi/5, pi/7).
TorusPoint parse_point(const GrassmannianSpace& space, const std::string& text);

/// Node-override constructors: supply the cos(2t) values directly.
TorusPoint point_from_exact_nodes(const GrassmannianSpace& space,
                                  const std::vector<Rational>& nodes);
TorusPoint point_from_float_nodes(const GrassmannianSpace& space,
                                  const std::vector<double>& nodes);

/// Re-classifies a point after merging blocks whose nodes are closer than
/// tol; used on near-confluent floating input.
TorusPoint collapse_blocks(const GrassmannianSpace& space, const TorusPoint& point,
                           double tol);

/// Normalized Weyl-degree product over the positive restricted roots:
///   d~_lambda = prod_alpha (<alpha, lambda+rho> / <alpha, rho>)^{m_alpha},
/// so d~_0 = 1.  Grows like prod (n_j+1)^{2p-2j+1}.
Rational degree_surrogate(const GrassmannianSpace& space, const SphericalWeight& w);
double degree_surrogate_d(const GrassmannianSpace& space, const SphericalWeight& w);

/// Casimir eigenvalue <lambda + 2 rho, lambda>; zero iff lambda = 0.
long long casimir(const GrassmannianSpace& space, const SphericalWeight& w);

}  // namespace grasph
