#include "pcf/mna/system.hpp"

#include <numeric>

#include "pcf/error.hpp"
#include "pcf/text.hpp"

namespace pcf::mna {
namespace {

void add(Eigen::MatrixXd& m, std::size_t r, std::size_t c, double v) {
  if (r == MnaSystem::npos || c == MnaSystem::npos) return;
  m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
}

void stamp_two_terminal(Eigen::MatrixXd& m, NodeId a, NodeId b, double v) {
  const auto ra = MnaSystem::row_of(a);
  const auto rb = MnaSystem::row_of(b);
  add(m, ra, ra, v);
  add(m, rb, rb, v);
  add(m, ra, rb, -v);
  add(m, rb, ra, -v);
}

}  // namespace

const MnaSystem::Excitation& MnaSystem::excitation(std::string_view source) const {
  for (const auto& e : excitations) {
    if (text::iequals(e.source, source)) return e;
  }
  throw InputError("no independent source named '" + std::string(source) + "'");
}

Eigen::VectorXcd MnaSystem::rhs(std::string_view source) const {
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(g.rows());
  for (const auto& [row, value] : excitation(source).entries) {
    b(static_cast<Eigen::Index>(row)) += value;
  }
  return b;
}

Eigen::VectorXcd MnaSystem::rhs_all() const {
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(g.rows());
  for (const auto& e : excitations) {
    for (const auto& [row, value] : e.entries) b(static_cast<Eigen::Index>(row)) += value;
  }
  return b;
}

MnaSystem stamp(const Circuit& circuit) {
  MnaSystem sys;
  sys.voltage_unknowns = circuit.node_count() - 1;
  std::size_t branches = 0;
  for (const auto& e : circuit.elements()) {
    if (e.kind == ElementKind::VoltageSource) ++branches;
  }
  const auto n = static_cast<Eigen::Index>(sys.voltage_unknowns + branches);
  sys.g = Eigen::MatrixXd::Zero(n, n);
  sys.c = Eigen::MatrixXd::Zero(n, n);
  for (NodeId id = 1; id < circuit.node_count(); ++id) {
    sys.unknowns.push_back("V(" + circuit.node_name(id) + ")");
  }

  std::size_t branch = sys.voltage_unknowns;
  for (const auto& e : circuit.elements()) {
    switch (e.kind) {
      case ElementKind::Resistor:
        stamp_two_terminal(sys.g, e.pos, e.neg, 1.0 / e.value);
        break;
      case ElementKind::Capacitor:
        stamp_two_terminal(sys.c, e.pos, e.neg, e.value);
        break;
      case ElementKind::Vccs: {
        const auto op = MnaSystem::row_of(e.pos);
        const auto on = MnaSystem::row_of(e.neg);
        const auto cp = MnaSystem::row_of(e.ctl_pos);
        const auto cn = MnaSystem::row_of(e.ctl_neg);
        add(sys.g, op, cp, e.value);
        add(sys.g, op, cn, -e.value);
        add(sys.g, on, cp, -e.value);
        add(sys.g, on, cn, e.value);
        break;
      }
      case ElementKind::CurrentSource: {
        MnaSystem::Excitation ex{e.name, e.value, {}};
        if (auto r = MnaSystem::row_of(e.pos); r != MnaSystem::npos) ex.entries.emplace_back(r, -e.value);
        if (auto r = MnaSystem::row_of(e.neg); r != MnaSystem::npos) ex.entries.emplace_back(r, e.value);
        sys.excitations.push_back(std::move(ex));
        break;
      }
      case ElementKind::VoltageSource: {
        const auto rp = MnaSystem::row_of(e.pos);
        const auto rn = MnaSystem::row_of(e.neg);
        add(sys.g, rp, branch, 1.0);
        add(sys.g, rn, branch, -1.0);
        add(sys.g, branch, rp, 1.0);
        add(sys.g, branch, rn, -1.0);
        sys.unknowns.push_back("I(" + e.name + ")");
        sys.excitations.push_back({e.name, e.value, {{branch, e.value}}});
        ++branch;
        break;
      }
    }
  }
  return sys;
}

std::vector<std::string> floating_nodes(const Circuit& circuit) {
  std::vector<NodeId> parent(circuit.node_count());
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : circuit.elements()) {
    if (e.kind == ElementKind::Resistor || e.kind == ElementKind::VoltageSource) {
      parent[find(e.pos)] = find(e.neg);
    }
  }
  std::vector<std::string> out;
  const auto root = find(kGround);
  for (NodeId id = 1; id < circuit.node_count(); ++id) {
    if (find(id) != root) out.push_back(circuit.node_name(id));
  }
  return out;
}

}  // namespace pcf::mna
