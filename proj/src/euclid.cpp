#include "polyflag/euclid.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace polyflag {

Config& config() {
  static Config cfg;
  return cfg;
}

const char* const kVersionTag = "polyflag 0.1.0";

double sphere_area(int n) {
  if (n < 1) throw std::domain_error("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
  if (n < 0) throw std::domain_error("ball_volume: dimension must be >= 0");
  if (n == 0) return 1.0;
  return sphere_area(n) / n;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

Mat orthonormalize(const Mat& m, double rank_tol) {
  const int d = static_cast<int>(m.rows());
  Mat q(d, m.cols());
  int r = 0;
  // Column scale reference for the rank test.
  double scale = 0.0;
  for (int j = 0; j < m.cols(); ++j) scale = std::max(scale, m.col(j).norm());
  if (scale == 0.0) return Mat(d, 0);
  for (int j = 0; j < m.cols(); ++j) {
    Vec w = m.col(j);
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < r; ++i) w -= q.col(i).dot(w) * q.col(i);
    const double nw = w.norm();
    if (nw > rank_tol * scale) q.col(r++) = w / nw;
  }
  return q.leftCols(r);
}

Subspace Subspace::from_columns(const Mat& columns) {
  Subspace s;
  s.basis_ = orthonormalize(columns);
  if (s.basis_.cols() != columns.cols())
    throw std::invalid_argument("Subspace::from_columns: rank-deficient spanning set");
  return s;
}

Subspace Subspace::from_orthonormal(const Mat& basis) {
  const Mat gram = basis.transpose() * basis;
  const double err = (gram - Mat::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (basis.cols() > 0 && err > 1e3 * tols().orthogonality) {
    // Tolerate mild drift by re-orthonormalizing; reject genuine rank loss.
    return from_columns(basis);
  }
  Subspace s;
  s.basis_ = basis;
  return s;
}

Subspace Subspace::span_of(const Vec& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("Subspace::span_of: zero vector");
  Mat b(v.size(), 1);
  b.col(0) = v / n;
  Subspace s;
  s.basis_ = b;
  return s;
}

Subspace Subspace::full(int d) {
  Subspace s;
  s.basis_ = Mat::Identity(d, d);
  return s;
}

Subspace Subspace::zero(int d) {
  Subspace s;
  s.basis_ = Mat(d, 0);
  return s;
}

Subspace Subspace::complement() const {
  const int d = ambient();
  const int k = dim();
  if (k == 0) return full(d);
  if (k == d) return zero(d);
  // Full QR of the basis; the trailing columns of Q span the complement.
  Eigen::HouseholderQR<Mat> qr(basis_);
  Mat q = qr.householderQ();
  Subspace s;
  s.basis_ = q.rightCols(d - k);
  return s;
}

bool Subspace::contains(const Vec& x, double tol) const {
  return (x - project(x)).norm() <= tol * std::max(1.0, x.norm());
}

double subspace_det(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("subspace_det: ambient dimension mismatch");
  const Subspace& lo = (a.dim() <= b.dim()) ? a : b;
  const Subspace& hi = (a.dim() <= b.dim()) ? b : a;
  if (lo.dim() == 0) return 1.0;
  const Mat m = hi.basis().transpose() * lo.basis();
  double det;
  if (m.rows() == m.cols()) {
    det = std::abs(m.determinant());
  } else {
    Eigen::JacobiSVD<Mat> svd(m);
    det = 1.0;
    for (int i = 0; i < svd.singularValues().size(); ++i) det *= svd.singularValues()[i];
  }
  return det > 1.0 ? 1.0 : det;  // clip roundoff above 1
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0 && b.dim() == 0) return 0.0;
  if (a.dim() != b.dim())
    throw std::invalid_argument("max_principal_angle: dimension mismatch");
  Eigen::JacobiSVD<Mat> svd(a.basis().transpose() * b.basis());
  const int k = static_cast<int>(svd.singularValues().size());
  double smin = (k > 0) ? svd.singularValues()[k - 1] : 1.0;
  smin = std::min(1.0, std::max(-1.0, smin));
  return std::acos(smin);
}

Rotation::Rotation(Mat m) : m_(std::move(m)) {
  const int d = static_cast<int>(m_.rows());
  const double err = (m_.transpose() * m_ - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > 1e3 * tols().orthogonality)
    throw std::invalid_argument("Rotation: matrix is not orthogonal");
  if (m_.determinant() < 0.0)
    throw std::invalid_argument("Rotation: determinant must be +1");
}

Rotation Rotation::identity(int d) { return Rotation(Mat::Identity(d, d)); }

Rotation Rotation::about_axis(const Vec& u, double angle) {
  const int d = static_cast<int>(u.size());
  if (d < 2) throw std::domain_error("Rotation::about_axis: ambient dimension must be >= 2");
  const double nu = u.norm();
  if (nu == 0.0) throw std::invalid_argument("Rotation::about_axis: zero axis");
  const Vec axis = u / nu;
  // Deterministic completion: sweep the standard basis and keep the first
  // two vectors with a nonzero residual against the axis.
  Mat plane(d, 2);
  int found = 0;
  for (int j = 0; j < d && found < 2; ++j) {
    Vec w = Vec::Zero(d);
    w[j] = 1.0;
    w -= axis.dot(w) * axis;
    for (int i = 0; i < found; ++i) w -= plane.col(i).dot(w) * plane.col(i);
    const double nw = w.norm();
    if (nw > 1e-8) plane.col(found++) = w / nw;
  }
  if (found < 2) throw std::runtime_error("Rotation::about_axis: completion failed");
  const Vec b1 = plane.col(0), b2 = plane.col(1);
  const double c = std::cos(angle), s = std::sin(angle);
  Mat m = Mat::Identity(d, d);
  m += s * (b2 * b1.transpose() - b1 * b2.transpose());
  m += (c - 1.0) * (b1 * b1.transpose() + b2 * b2.transpose());
  return Rotation(std::move(m));
}

Rotation Rotation::haar(int d, RngStream& rng) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Mat q = orthonormalize(g, 1e-14);
  while (q.cols() < d) {  // astronomically unlikely; resample
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
    q = orthonormalize(g, 1e-14);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return Rotation(std::move(q));
}

Subspace Rotation::apply(const Subspace& s) const {
  return Subspace::from_orthonormal(m_ * s.basis());
}

Subspace haar_grassmann(int d, int k, RngStream& rng) {
  if (k < 0 || k > d) throw std::domain_error("haar_grassmann: need 0 <= k <= d");
  if (k == 0) return Subspace::zero(d);
  if (k == d) return Subspace::full(d);
  Mat g(d, k);
  for (;;) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
    const Mat q = orthonormalize(g, 1e-14);
    if (q.cols() == k) return Subspace::from_orthonormal(q);
  }
}

Subspace haar_grassmann_containing(const Vec& u, int k, RngStream& rng) {
  const int d = static_cast<int>(u.size());
  if (k < 1 || k > d) throw std::domain_error("haar_grassmann_containing: need 1 <= k <= d");
  const double nu = u.norm();
  if (std::abs(nu - 1.0) > 1e-6)
    throw std::invalid_argument("haar_grassmann_containing: u must be a unit vector");
  Mat b(d, k);
  b.col(0) = u / nu;
  if (k > 1) {
    // Haar (k-1)-frame in u^perp: project Gaussians and orthonormalize.
    for (;;) {
      Mat g(d, k - 1);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < k - 1; ++j) g(i, j) = rng.normal();
      g -= b.col(0) * (b.col(0).transpose() * g);
      const Mat q = orthonormalize(g, 1e-14);
      if (q.cols() == k - 1) {
        b.rightCols(k - 1) = q;
        break;
      }
    }
  }
  return Subspace::from_orthonormal(b);
}

Subspace haar_grassmann_inside(const Subspace& U, int k, RngStream& rng) {
  if (k < 0 || k > U.dim()) throw std::domain_error("haar_grassmann_inside: need 0 <= k <= dim U");
  if (k == 0) return Subspace::zero(U.ambient());
  const Subspace inner = haar_grassmann(U.dim(), k, rng);
  return Subspace::from_orthonormal(U.basis() * inner.basis());
}

Vec sphere_sample(const Subspace& S, RngStream& rng) {
  if (S.dim() < 1) throw std::domain_error("sphere_sample: subspace must have dim >= 1");
  const int k = S.dim();
  Vec g(k);
  double n;
  do {
    for (int i = 0; i < k; ++i) g[i] = rng.normal();
    n = g.norm();
  } while (n < 1e-12);
  return S.basis() * (g / n);
}

Vec sphere_sample(int d, RngStream& rng) {
  Vec g(d);
  double n;
  do {
    for (int i = 0; i < d; ++i) g[i] = rng.normal();
    n = g.norm();
  } while (n < 1e-12);
  return g / n;
}

Vec ball_sample(const Subspace& S, const Vec& center, double radius, RngStream& rng) {
  const int k = S.dim();
  if (k == 0) return center;
  const Vec dir = sphere_sample(S, rng);
  const double r = radius * std::pow(rng.uniform01(), 1.0 / k);
  return center + r * dir;
}

double grassmann_det2_moment(int n, int k, int m) {
  if (m < 0 || m > n - k) throw std::domain_error("grassmann_det2_moment: need 0 <= m <= n-k");
  return binomial(n - k, m) / binomial(n, m);
}

void parallel_chunks(int n_chunks, const std::function<void(int)>& fn, int threads) {
  if (threads <= 0) threads = config().threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  threads = std::min(threads, n_chunks);
  if (threads <= 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<bool> failed{false};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= n_chunks || failed.load()) return;
        try {
          fn(c);
        } catch (...) {
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("parallel_chunks: worker failed");
}

}  // namespace polyflag
