#pragma once

// Core 2-jet types: symmetric matrices with their ordered spectra, the jet
// triple (r, p, A), the jet norm and the trace pairing <A, P_W>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "npt/error.hpp"

namespace npt {

inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Real symmetric n x n matrix, 1 <= n <= 8. Every mutation writes both
/// triangles, so entries(i, j) == entries(j, i) holds bit-for-bit.
class SymMat {
 public:
  SymMat() = default;

  explicit SymMat(int n) : m_(Mat::Zero(check_dim(n), n)) {}

  /// Rows must be square and exactly symmetric.
  SymMat(std::initializer_list<std::initializer_list<double>> rows) {
    const int n = static_cast<int>(rows.size());
    m_ = Mat::Zero(check_dim(n), n);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n) fail(ErrorCode::DimensionMismatch, "matrix is not square");
      int j = 0;
      for (double v : row) m_(i, j++) = v;
      ++i;
    }
    require_symmetric();
  }

  static SymMat from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymMat s(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) fail(ErrorCode::DimensionMismatch, "matrix is not square");
      for (int j = 0; j < n; ++j) s.m_(i, j) = rows[i][j];
    }
    s.require_symmetric();
    return s;
  }

  /// Takes the symmetric part (M + M^T) / 2 of an arbitrary square matrix.
  template <typename Derived>
  static SymMat symmetrize(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "matrix is not square");
    SymMat s(static_cast<int>(m.rows()));
    s.m_ = 0.5 * (m + m.transpose());
    return s;
  }

  static SymMat identity(int n) {
    SymMat s(n);
    s.m_.setIdentity();
    return s;
  }

  static SymMat zero(int n) { return SymMat(n); }

  static SymMat diag(const std::vector<double>& d) {
    SymMat s(static_cast<int>(d.size()));
    for (int i = 0; i < s.dim(); ++i) s.m_(i, i) = d[i];
    return s;
  }

  /// Orthogonal projector v v^T / |v|^2 onto the line through v.
  template <typename Derived>
  static SymMat projector(const Eigen::MatrixBase<Derived>& v) {
    const double nn = v.squaredNorm();
    if (!(nn > 0.0)) fail(ErrorCode::BadParameters, "projector onto the zero vector");
    return symmetrize(Mat(v * v.transpose() / nn));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }

  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  const Mat& matrix() const { return m_; }

  double trace() const { return m_.trace(); }
  double max_abs_entry() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

  SymMat& operator+=(const SymMat& o) {
    same_dim(o);
    m_ += o.m_;
    return *this;
  }
  SymMat& operator-=(const SymMat& o) {
    same_dim(o);
    m_ -= o.m_;
    return *this;
  }
  SymMat& operator*=(double t) {
    m_ *= t;
    return *this;
  }

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double t, SymMat a) { return a *= t; }
  friend SymMat operator-(SymMat a) { return a *= -1.0; }

  /// A + t I.
  SymMat shifted(double t) const {
    SymMat s = *this;
    s.m_.diagonal().array() += t;
    return s;
  }

  /// Q^T A Q for a square Q.
  SymMat congruence(const Mat& q) const { return symmetrize(Mat(q.transpose() * m_ * q)); }

  friend bool operator==(const SymMat& a, const SymMat& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

 private:
  static int check_dim(int n) {
    if (n < 1 || n > kMaxDim) fail(ErrorCode::DimensionMismatch, "dimension " + std::to_string(n) + " outside 1..8");
    return n;
  }
  void same_dim(const SymMat& o) const {
    if (o.dim() != dim()) fail(ErrorCode::DimensionMismatch, "matrix dimensions differ");
  }
  void require_symmetric() const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i + 1; j < dim(); ++j)
        if (m_(i, j) != m_(j, i)) fail(ErrorCode::NotSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
  }

  Mat m_;
};

/// Ascending eigenvalues with an orthonormal eigenvector frame (columns).
struct Spectrum {
  Vec lambdas;
  Mat frame;

  int dim() const { return static_cast<int>(lambdas.size()); }
  double min() const { return lambdas(0); }
  double max() const { return lambdas(lambdas.size() - 1); }
  /// 1-based, matching lambda_1 <= ... <= lambda_n.
  double operator[](int k) const { return lambdas(k - 1); }
};

/// Symmetric eigendecomposition. Eigenvectors are sign-normalized so that
/// their first entry of magnitude above 1e-14 is positive.
inline Spectrum spectrum(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.matrix());
  Spectrum s{es.eigenvalues(), es.eigenvectors()};
  for (int c = 0; c < s.frame.cols(); ++c) {
    for (int r = 0; r < s.frame.rows(); ++r) {
      const double v = s.frame(r, c);
      if (std::abs(v) > 1e-14) {
        if (v < 0.0) s.frame.col(c) *= -1.0;
        break;
      }
    }
  }
  return s;
}

inline Vec eigenvalues(const SymMat& a) {
  return Eigen::SelfAdjointEigenSolver<Mat>(a.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
}

inline double lambda_min(const SymMat& a) { return eigenvalues(a)(0); }
inline double lambda_max(const SymMat& a) { return eigenvalues(a)(a.dim() - 1); }

/// Largest eigenvalue magnitude.
inline double spectral_norm(const SymMat& a) { return eigenvalues(a).cwiseAbs().maxCoeff(); }

/// A point (r, p, A) of the 2-jet space R x R^n x S(n).
struct Jet2 {
  double r = 0.0;
  Vec p;
  SymMat A;

  Jet2() = default;
  Jet2(double r_, Vec p_, SymMat a_) : r(r_), p(std::move(p_)), A(std::move(a_)) {
    if (p.size() != A.dim()) fail(ErrorCode::DimensionMismatch, "gradient length differs from Hessian dimension");
  }

  static Jet2 zero(int n) { return {0.0, Vec::Zero(n), SymMat::zero(n)}; }
  static Jet2 hessian(SymMat a) {
    const int n = a.dim();
    return {0.0, Vec::Zero(n), std::move(a)};
  }

  int dim() const { return A.dim(); }

  Jet2& operator+=(const Jet2& o) {
    r += o.r;
    p += o.p;
    A += o.A;
    return *this;
  }
  Jet2& operator*=(double t) {
    r *= t;
    p *= t;
    A *= t;
    return *this;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a += -1.0 * b; }
  friend Jet2 operator*(double t, Jet2 a) { return a *= t; }
  friend Jet2 operator-(Jet2 a) { return a *= -1.0; }
  friend bool operator==(const Jet2& a, const Jet2& b) { return a.r == b.r && a.p == b.p && a.A == b.A; }
};

/// max(|r|, |p|_2, max_k |lambda_k(A)|).
inline double jet_norm(const Jet2& j) {
  return std::max({std::abs(j.r), j.p.norm(), spectral_norm(j.A)});
}

/// Sum_i w_i^T A w_i for orthonormal columns w_i, i.e. <A, P_W>.
inline double trace_on_subspace(const SymMat& a, const Mat& w, double gram_tol = 1e-8) {
  if (w.rows() != a.dim()) fail(ErrorCode::DimensionMismatch, "frame rows differ from matrix dimension");
  const Mat gram = w.transpose() * w;
  const double dev = (gram - Mat::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff();
  if (dev > gram_tol) fail(ErrorCode::NonOrthonormalBasis, "Gram deviation " + std::to_string(dev));
  return (w.transpose() * a.matrix() * w).trace();
}

}  // namespace npt
