#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "pcf/error.hpp"
#include "pcf/mna/solver.hpp"

namespace pcf::mna {
namespace {

using cplx = std::complex<double>;

constexpr int kMaxQzIterations = 400;

void sort_by_magnitude(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

// Power-of-two row/column equilibration of |a| + |b|. Exact in floating
// point and leaves the eigenvalues of the pencil untouched.
void equilibrate(Eigen::MatrixXd& a, Eigen::MatrixXd& b) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = (a.row(i).cwiseAbs() + b.row(i).cwiseAbs()).maxCoeff();
      if (m > 0.0) {
        const double f = std::ldexp(1.0, -std::ilogb(m));
        a.row(i) *= f;
        b.row(i) *= f;
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double m = (a.col(j).cwiseAbs() + b.col(j).cwiseAbs()).maxCoeff();
      if (m > 0.0) {
        const double f = std::ldexp(1.0, -std::ilogb(m));
        a.col(j) *= f;
        b.col(j) *= f;
      }
    }
  }
}

struct PencilEigen {
  std::vector<cplx> finite;
  bool degenerate = false;  // det(a - s b) vanishes identically
};

// Finite eigenvalues s of a x = s b x.
PencilEigen finite_eigenvalues(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  PencilEigen out;
  if (a.rows() == 0) return out;
  const double na = a.cwiseAbs().maxCoeff();
  const double nb = b.cwiseAbs().maxCoeff();
  if (nb == 0.0) return out;

  // frequency scaling s = k * s' so both matrices have comparable size
  const double k = na > 0.0 ? na / nb : 1.0;
  b *= k;
  equilibrate(a, b);

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.setMaxIterations(kMaxQzIterations);
  ges.compute(a, b, /*computeEigenvectors=*/false);
  if (ges.info() != Eigen::Success) {
    throw ConvergenceError("QZ iteration did not converge within " +
                               std::to_string(kMaxQzIterations) + " iterations",
                           kMaxQzIterations);
  }
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    const double beta = betas(i);
    if (std::abs(alphas(i)) <= tiny && std::abs(beta) <= tiny) {
      out.degenerate = true;
      continue;
    }
    if (beta == 0.0) continue;
    const cplx s = k * alphas(i) / beta;
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) continue;
    if (std::abs(s) > kInfiniteEigenvalue) continue;
    out.finite.push_back(s);
  }
  sort_by_magnitude(out.finite);
  return out;
}

}  // namespace

std::vector<cplx> poles_numeric(const MnaSystem& system) {
  if (system.size() == 0 || system.c.cwiseAbs().maxCoeff() == 0.0) {
    throw NumericError("pole extraction needs at least one capacitor (C matrix is zero)");
  }
  auto eig = finite_eigenvalues(-system.g, system.c);
  if (eig.degenerate) {
    throw NumericError("det(G + sC) vanishes for every s: the circuit has a floating subnetwork");
  }
  return eig.finite;
}

std::vector<cplx> poles_numeric(const Circuit& circuit) { return poles_numeric(stamp(circuit)); }

std::vector<cplx> zeros_numeric(const MnaSystem& system, std::string_view source, NodeId out_pos,
                                NodeId out_neg) {
  const auto& ex = system.excitation(source);
  if (ex.magnitude == 0.0) {
    throw InputError("source '" + std::string(source) + "' has zero AC magnitude");
  }
  if (out_pos == out_neg) throw NumericError("transfer function is identically zero (output pair shorted)");

  const auto n = static_cast<Eigen::Index>(system.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, n + 1);
  g.topLeftCorner(n, n) = system.g;
  c.topLeftCorner(n, n) = system.c;
  for (const auto& [row, value] : ex.entries) g(static_cast<Eigen::Index>(row), n) -= value / ex.magnitude;
  if (auto r = MnaSystem::row_of(out_pos); r != MnaSystem::npos) g(n, static_cast<Eigen::Index>(r)) += 1.0;
  if (auto r = MnaSystem::row_of(out_neg); r != MnaSystem::npos) g(n, static_cast<Eigen::Index>(r)) -= 1.0;

  if (c.cwiseAbs().maxCoeff() == 0.0) return {};
  auto eig = finite_eigenvalues(-g, c);
  if (eig.degenerate) {
    throw NumericError("transfer function from '" + std::string(source) +
                       "' to the output pair is identically zero or the circuit is singular");
  }
  return eig.finite;
}

std::vector<cplx> zeros_numeric(const Circuit& circuit, std::string_view source, NodeId out_pos,
                                NodeId out_neg) {
  return zeros_numeric(stamp(circuit), source, out_pos, out_neg);
}

PoleZeroResult pole_zero(const Circuit& circuit, std::string_view source, NodeId out_pos,
                         NodeId out_neg) {
  const auto sys = stamp(circuit);
  PoleZeroResult r;
  r.poles = poles_numeric(sys);
  r.zeros = zeros_numeric(sys, source, out_pos, out_neg);
  std::vector<bool> used(r.poles.size(), false);
  for (const auto z : r.zeros) {
    for (std::size_t i = 0; i < r.poles.size(); ++i) {
      if (used[i]) continue;
      const auto p = r.poles[i];
      const double tol = 1e-6 * std::max(std::abs(p), std::abs(z)) + 1e-9;
      if (std::abs(p - z) <= tol) {
        used[i] = true;
        r.coincident.push_back({p, z});
        break;
      }
    }
  }
  return r;
}

}  // namespace pcf::mna
