#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcf/mna/circuit.hpp"
#include "pcf/mna/system.hpp"

namespace pcf::mna {

struct AcSolution {
  double omega = 0.0;
  Eigen::VectorXcd x;  // full unknown vector, see MnaSystem
  double residual = 0.0;  // ||(G + jwC)x - b|| / ||b||

  std::complex<double> voltage(NodeId node) const {
    return node == kGround ? std::complex<double>{} : x(static_cast<Eigen::Index>(node - 1));
  }
};

/// AC solver over one stamped circuit. Immutable after construction; every
/// const member is safe to call from several threads.
class AcSolver {
 public:
  explicit AcSolver(Circuit circuit);

  const Circuit& circuit() const noexcept { return circuit_; }
  const MnaSystem& system() const noexcept { return system_; }

  /// Solve with all independent sources active.
  AcSolution solve(double omega) const;
  /// Solve with only `source` active.
  AcSolution solve(double omega, std::string_view source) const;

  /// H(jw) = (V(out_pos) - V(out_neg)) / magnitude(source).
  std::complex<double> transfer(std::string_view source, NodeId out_pos, NodeId out_neg,
                                double omega) const;

  /// Batch transfer, OpenMP-parallel over frequency points.
  std::vector<std::complex<double>> transfer(std::string_view source, NodeId out_pos,
                                             NodeId out_neg, std::span<const double> omegas) const;
  /// Serial reference for the batch kernel; results are bit-identical.
  std::vector<std::complex<double>> transfer_serial(std::string_view source, NodeId out_pos,
                                                    NodeId out_neg,
                                                    std::span<const double> omegas) const;

 private:
  AcSolution solve_rhs(double omega, const Eigen::VectorXcd& b) const;

  Circuit circuit_;
  MnaSystem system_;
};

/// Finite generalized eigenvalues of (G + sC) x = 0, ascending |s|.
/// Throws NumericError when C is identically zero, ConvergenceError when
/// the QZ iteration does not converge.
std::vector<std::complex<double>> poles_numeric(const MnaSystem& system);
std::vector<std::complex<double>> poles_numeric(const Circuit& circuit);

/// Transmission zeros of the transfer from `source` to V(out_pos) - V(out_neg),
/// from the bordered pencil [[G + sC, -b], [c^T, 0]]. Ascending |s|.
std::vector<std::complex<double>> zeros_numeric(const MnaSystem& system, std::string_view source,
                                                NodeId out_pos, NodeId out_neg);
std::vector<std::complex<double>> zeros_numeric(const Circuit& circuit, std::string_view source,
                                                NodeId out_pos, NodeId out_neg);

struct PoleZeroPair {
  std::complex<double> pole;
  std::complex<double> zero;
};

struct PoleZeroResult {
  std::vector<std::complex<double>> poles;
  std::vector<std::complex<double>> zeros;
  /// Poles and zeros that coincide. They are kept in both lists above.
  std::vector<PoleZeroPair> coincident;
};

PoleZeroResult pole_zero(const Circuit& circuit, std::string_view source, NodeId out_pos,
                         NodeId out_neg);

/// Eigenvalues with |s| above this are structural infinities (rad/s).
inline constexpr double kInfiniteEigenvalue = 1e15;

}  // namespace pcf::mna
