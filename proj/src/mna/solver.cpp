#include "pcf/mna/solver.hpp"

#include <cstdio>
#include <exception>
#include <optional>

#include "pcf/error.hpp"
#include "pcf/mna/lu.hpp"

namespace pcf::mna {
namespace {

constexpr double kResidualLimit = 1e-9;

std::string omega_tag(double omega) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", omega);
  return buf;
}

}  // namespace

AcSolver::AcSolver(Circuit circuit) : circuit_(std::move(circuit)), system_(stamp(circuit_)) {}

AcSolution AcSolver::solve(double omega) const { return solve_rhs(omega, system_.rhs_all()); }

AcSolution AcSolver::solve(double omega, std::string_view source) const {
  return solve_rhs(omega, system_.rhs(source));
}

AcSolution AcSolver::solve_rhs(double omega, const Eigen::VectorXcd& b) const {
  const std::complex<double> jw{0.0, omega};
  Eigen::MatrixXcd a = system_.g.cast<std::complex<double>>() + jw * system_.c;
  ComplexLu lu(a);
  if (auto row = lu.singular_row()) {
    const auto& name = system_.unknowns.at(*row);
    auto floating = floating_nodes(circuit_);
    std::string msg = "singular MNA matrix at omega=" + omega_tag(omega) +
                      " rad/s: near-zero pivot in row " + std::to_string(*row) + " (" + name + ")";
    if (!floating.empty()) {
      msg += "; no DC path to ground from:";
      for (const auto& f : floating) msg += " " + f;
    }
    throw SingularMatrixError(msg, *row, name, std::move(floating));
  }

  AcSolution sol;
  sol.omega = omega;
  sol.x = lu.solve(b);
  const double bnorm = b.norm();
  auto residual = [&] { return bnorm == 0.0 ? (a * sol.x).norm() : (a * sol.x - b).norm() / bnorm; };
  sol.residual = residual();
  if (sol.residual > kResidualLimit) {
    // one step of iterative refinement
    sol.x += lu.solve(b - a * sol.x);
    sol.residual = residual();
  }
  if (sol.residual > kResidualLimit) {
    throw NumericError("KCL residual " + omega_tag(sol.residual) + " exceeds limit at omega=" +
                       omega_tag(omega) + " rad/s");
  }
  return sol;
}

std::complex<double> AcSolver::transfer(std::string_view source, NodeId out_pos, NodeId out_neg,
                                        double omega) const {
  const auto mag = system_.excitation(source).magnitude;
  if (mag == 0.0) throw InputError("source '" + std::string(source) + "' has zero AC magnitude");
  const auto sol = solve(omega, source);
  return (sol.voltage(out_pos) - sol.voltage(out_neg)) / mag;
}

std::vector<std::complex<double>> AcSolver::transfer_serial(std::string_view source,
                                                            NodeId out_pos, NodeId out_neg,
                                                            std::span<const double> omegas) const {
  std::vector<std::complex<double>> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(transfer(source, out_pos, out_neg, w));
  return out;
}

std::vector<std::complex<double>> AcSolver::transfer(std::string_view source, NodeId out_pos,
                                                     NodeId out_neg,
                                                     std::span<const double> omegas) const {
  // validate once up front so worker threads only see numeric failures
  (void)system_.excitation(source);
  circuit_.node_name(out_pos);
  circuit_.node_name(out_neg);

  const auto n = static_cast<long>(omegas.size());
  std::vector<std::complex<double>> out(omegas.size());
  std::vector<std::exception_ptr> errors(omegas.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          transfer(source, out_pos, out_neg, omegas[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace pcf::mna
