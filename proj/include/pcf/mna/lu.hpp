#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace pcf::mna {

/// Dense complex LU with partial pivoting. Ties in pivot magnitude go to
/// the lowest row index, so the factorization is reproducible bit for bit.
class ComplexLu {
 public:
  /// Factors `a` in place. If a pivot is (numerically) zero, factorization
  /// stops and singular_row() names the offending elimination step.
  explicit ComplexLu(Eigen::MatrixXcd a);

  bool singular() const noexcept { return singular_row_.has_value(); }
  std::optional<std::size_t> singular_row() const noexcept { return singular_row_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;

 private:
  Eigen::MatrixXcd lu_;
  std::vector<std::size_t> perm_;
  std::optional<std::size_t> singular_row_;
};

}  // namespace pcf::mna
