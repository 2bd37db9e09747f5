#pragma once

// Seeded generators for matrices, frames and jets used by the sampled
// property checks. Every report owns its own Sampler, so results depend
// only on the seed.

#include <cmath>
#include <cstdint>
#include <random>

#include "npt/jets.hpp"

namespace npt {

inline constexpr std::uint64_t kDefaultSeed = 20240611ULL;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return normal_(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// log-uniform magnitude in [lo, hi].
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  Vec gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Vec unit_vec(int n) {
    for (;;) {
      Vec v = gaussian_vec(n);
      const double nn = v.norm();
      if (nn > 1e-8) return v / nn;
    }
  }

  /// Symmetric matrix with N(0, scale^2) entries (GOE-style).
  SymMat symmetric(int n, double scale = 1.0) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = normal();
    return SymMat::symmetrize(Mat(scale * g));
  }

  /// Haar-distributed orthogonal matrix.
  Mat orthogonal(int n) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0.0) q.col(i) *= -1.0;
    return q;
  }

  /// Orthonormal n x k frame.
  Mat frame(int n, int k) { return orthogonal(n).leftCols(k); }

  /// Positive semidefinite matrix of the given rank (rank < 0 picks one at random).
  SymMat psd(int n, int rank = -1, double scale = 1.0) {
    if (rank < 0) rank = integer(0, n);
    Mat q = orthogonal(n);
    Mat d = Mat::Zero(n, n);
    for (int i = 0; i < rank; ++i) d(i, i) = scale * std::abs(normal());
    return SymMat::symmetrize(Mat(q * d * q.transpose()));
  }

  /// Symmetric matrix with prescribed eigenvalues in a random frame.
  SymMat with_spectrum(const Vec& lambdas) {
    const int n = static_cast<int>(lambdas.size());
    Mat q = orthogonal(n);
    return SymMat::symmetrize(Mat(q * lambdas.asDiagonal() * q.transpose()));
  }

  Jet2 jet(int n, double scale = 1.0) { return {scale * normal(), scale * gaussian_vec(n), symmetric(n, scale)}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace npt
