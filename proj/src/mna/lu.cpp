#include "pcf/mna/lu.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace pcf::mna {

ComplexLu::ComplexLu(Eigen::MatrixXcd a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const Eigen::Index n = lu_.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  // Zero test is relative to the largest entry of the original matrix.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(lu_(i, j)));
  }
  const double tiny = scale * static_cast<double>(std::max<Eigen::Index>(n, 1)) *
                      std::numeric_limits<double>::epsilon();

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(lu_(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {  // strict: ties keep the lowest index
        best = v;
        pivot = i;
      }
    }
    if (best <= tiny || best == 0.0) {
      singular_row_ = static_cast<std::size_t>(k);
      return;
    }
    if (pivot != k) {
      lu_.row(k).swap(lu_.row(pivot));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
    }
    const auto inv = 1.0 / lu_(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const auto f = lu_(i, k) * inv;
      lu_(i, k) = f;
      if (f == std::complex<double>{}) continue;
      for (Eigen::Index j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Eigen::VectorXcd ComplexLu::solve(const Eigen::VectorXcd& b) const {
  const Eigen::Index n = lu_.rows();
  Eigen::VectorXcd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto acc = b(static_cast<Eigen::Index>(perm_[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < i; ++j) acc -= lu_(i, j) * y(j);
    y(i) = acc;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    auto acc = y(i);
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= lu_(i, j) * y(j);
    y(i) = acc / lu_(i, i);
  }
  return y;
}

}  // namespace pcf::mna
