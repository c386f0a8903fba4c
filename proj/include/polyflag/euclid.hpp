#ifndef POLYFLAG_EUCLID_HPP
#define POLYFLAG_EUCLID_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyflag/config.hpp"
#include "polyflag/rng.hpp"

namespace polyflag {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Surface measure of the unit sphere S^{n-1} in R^n:
/// omega_n = 2 pi^{n/2} / Gamma(n/2). omega_1 = 2, omega_2 = 2 pi, omega_3 = 4 pi.
double sphere_area(int n);

/// Volume of the unit ball B^n, kappa_n = omega_n / n. kappa_0 = 1.
double ball_volume(int n);

double binomial(int n, int k);

/// Modified Gram-Schmidt with a re-orthogonalization pass. Returns the
/// orthonormal columns spanning the column space of `m`; columns whose
/// residual norm falls below the rank tolerance are dropped.
Mat orthonormalize(const Mat& m, double rank_tol = tols().rank);

/// Linear subspace of R^d held as a d x k matrix with orthonormal columns.
/// k = 0 is the zero subspace (d x 0 matrix), k = d the full space.
class Subspace {
 public:
  Subspace() = default;

  /// Orthonormalizes the given spanning columns; throws if they are
  /// rank-deficient (the span has lower dimension than the column count).
  static Subspace from_columns(const Mat& columns);

  /// Adopts columns that are already orthonormal (checked against the
  /// orthogonality tolerance).
  static Subspace from_orthonormal(const Mat& basis);

  static Subspace span_of(const Vec& v);
  static Subspace full(int d);
  static Subspace zero(int d);

  int ambient() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  /// Orthogonal projection of x onto the subspace.
  Vec project(const Vec& x) const { return basis_ * (basis_.transpose() * x); }

  /// Coordinates of the projection in the subspace basis (length dim()).
  Vec coords(const Vec& x) const { return basis_.transpose() * x; }

  /// Orthogonal complement.
  Subspace complement() const;

  /// Euclidean norm of the projection of x onto the subspace.
  double projection_norm(const Vec& x) const { return (basis_.transpose() * x).norm(); }

  bool contains(const Vec& x, double tol = tols().predicate) const;

 private:
  Mat basis_;  // d x k, orthonormal columns
};

/// Absolute determinant of the orthogonal projection between two subspaces,
/// equivalently the product of the cosines of their principal angles.
/// Symmetric when dims agree; always in [0,1]; equals 1 when either
/// subspace is zero-dimensional (empty product).
double subspace_det(const Subspace& a, const Subspace& b);

/// Largest principal angle between two subspaces of equal dimension, in
/// [0, pi/2]. Used as the metric on Grassmannians in test sets.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// Proper rotation of R^d.
class Rotation {
 public:
  explicit Rotation(Mat m);
  static Rotation identity(int d);

  /// Rotation fixing the unit vector u (and everything orthogonal to the
  /// rotation plane), turning by `angle` in the plane spanned by the first
  /// two vectors of a deterministic orthonormal completion of u.
  static Rotation about_axis(const Vec& u, double angle);

  /// Haar-random rotation (QR of a Gaussian matrix, determinant fixed to +1).
  static Rotation haar(int d, RngStream& rng);

  int ambient() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  Vec apply(const Vec& x) const { return m_ * x; }
  Subspace apply(const Subspace& s) const;
  Rotation inverse() const { return Rotation(m_.transpose()); }
  Rotation compose(const Rotation& other) const { return Rotation(m_ * other.m_); }

 private:
  Mat m_;
};

/// Haar-distributed k-dimensional subspace of R^d.
Subspace haar_grassmann(int d, int k, RngStream& rng);

/// Haar subspace conditioned to contain the unit vector u: span{u} plus a
/// Haar (k-1)-subspace of u^perp.
Subspace haar_grassmann_containing(const Vec& u, int k, RngStream& rng);

/// Haar k-subspace inside the subspace U.
Subspace haar_grassmann_inside(const Subspace& U, int k, RngStream& rng);

/// Uniform unit vector in the subspace S (dim >= 1).
Vec sphere_sample(const Subspace& S, RngStream& rng);

/// Uniform unit vector in R^d.
Vec sphere_sample(int d, RngStream& rng);

/// Uniform point in the ball of radius r centered at c within subspace S
/// (the point is returned in ambient coordinates, offset from c).
Vec ball_sample(const Subspace& S, const Vec& center, double radius, RngStream& rng);

/// Closed-form Grassmannian second moment: for W of dimension n - m fixed in
/// R^n and L Haar in G(n,k), E[ subspace_det(W,L)^2 ] = C(n-k,m) / C(n,m).
double grassmann_det2_moment(int n, int k, int m);

/// Monte Carlo scalar estimate with a standard error.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  Estimate() = default;
  Estimate(double v, double s) : value(v), se(s) {}
  Estimate operator+(const Estimate& o) const {
    return {value + o.value, std::sqrt(se * se + o.se * o.se)};
  }
  Estimate operator-(const Estimate& o) const {
    return {value - o.value, std::sqrt(se * se + o.se * o.se)};
  }
  Estimate scaled(double c) const { return {c * value, std::abs(c) * se}; }
};

/// Streaming mean/variance accumulator; merges associatively so chunked
/// parallel reductions are deterministic.
struct MeanAcc {
  long long n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(const MeanAcc& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return v > 0.0 ? v : 0.0;
  }
  double stderr_of_mean() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
  Estimate estimate() const { return {mean(), stderr_of_mean()}; }
};

/// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on a capped number
/// of worker threads. The caller owns any per-chunk output slots, so results
/// are independent of scheduling order.
void parallel_chunks(int n_chunks, const std::function<void(int)>& fn, int threads = 0);

}  // namespace polyflag

#endif
