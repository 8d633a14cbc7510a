#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcf/mna/circuit.hpp"

namespace pcf::mna {

/// Stamped MNA system (G + sC) x = b.
///
/// Unknown layout: node voltages for nodes 1..n-1 (ground eliminated)
/// followed by one branch current per voltage source, in element order.
struct MnaSystem {
  Eigen::MatrixXd g;
  Eigen::MatrixXd c;
  std::vector<std::string> unknowns;
  std::size_t voltage_unknowns = 0;

  struct Excitation {
    std::string source;
    double magnitude = 0.0;
    // (row, value) entries of b for this source alone
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::vector<Excitation> excitations;

  std::size_t size() const noexcept { return static_cast<std::size_t>(g.rows()); }

  /// Right-hand side with only `source` active at its stated AC magnitude.
  Eigen::VectorXcd rhs(std::string_view source) const;
  /// Right-hand side with every independent source active.
  Eigen::VectorXcd rhs_all() const;
  const Excitation& excitation(std::string_view source) const;

  /// Row index of node `id` in x, or npos for ground.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static std::size_t row_of(NodeId id) noexcept { return id == kGround ? npos : id - 1; }
};

/// Builds G and C. Every element was validated when added to the circuit.
MnaSystem stamp(const Circuit& circuit);

/// Nodes with no path to ground through resistors or voltage sources.
std::vector<std::string> floating_nodes(const Circuit& circuit);

}  // namespace pcf::mna
