#include "pcf/mna/circuit.hpp"

#include <cmath>

#include "pcf/error.hpp"
#include "pcf/text.hpp"

namespace pcf::mna {

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Resistor: return "resistor";
    case ElementKind::Capacitor: return "capacitor";
    case ElementKind::Vccs: return "vccs";
    case ElementKind::CurrentSource: return "current source";
    case ElementKind::VoltageSource: return "voltage source";
  }
  return "?";
}

Circuit::Circuit() {
  node_names_.emplace_back("0");
  node_index_.emplace("0", kGround);
}

NodeId Circuit::add_node(std::string_view name) {
  if (name.empty()) throw InputError("empty node name");
  if (auto found = find_node(name)) return *found;
  const NodeId id = node_names_.size();
  node_names_.emplace_back(name);
  node_index_.emplace(std::string(name), id);
  return id;
}

std::optional<NodeId> Circuit::find_node(std::string_view name) const {
  if (auto it = node_index_.find(std::string(name)); it != node_index_.end()) return it->second;
  return std::nullopt;
}

NodeId Circuit::node(std::string_view name) const {
  if (auto id = find_node(name)) return *id;
  throw InputError("unknown node '" + std::string(name) + "'");
}

const std::string& Circuit::node_name(NodeId id) const {
  if (id >= node_names_.size()) throw InputError("node id " + std::to_string(id) + " out of range");
  return node_names_[id];
}

void Circuit::check_node(NodeId id, const std::string& element) const {
  if (id >= node_names_.size()) {
    throw InputError("element '" + element + "' references unknown node id " + std::to_string(id));
  }
}

void Circuit::add_element(Element element) {
  if (element.name.empty()) throw InputError("element without a name");
  const auto key = text::to_lower(element.name);
  if (element_index_.contains(key)) {
    throw InputError("duplicate element name '" + element.name + "'");
  }
  for (NodeId n : {element.pos, element.neg, element.ctl_pos, element.ctl_neg}) {
    check_node(n, element.name);
  }
  if (!std::isfinite(element.value)) {
    throw InputError("element '" + element.name + "' has a non-finite value");
  }
  element_index_.emplace(key, elements_.size());
  elements_.push_back(std::move(element));
}

void Circuit::add_resistor(std::string name, NodeId a, NodeId b, double ohms) {
  if (!(ohms > 0.0)) throw InputError("resistor '" + name + "' must be > 0 ohm");
  add_element({ElementKind::Resistor, std::move(name), a, b, kGround, kGround, ohms});
}

void Circuit::add_capacitor(std::string name, NodeId a, NodeId b, double farads) {
  if (!(farads > 0.0)) throw InputError("capacitor '" + name + "' must be > 0 F");
  add_element({ElementKind::Capacitor, std::move(name), a, b, kGround, kGround, farads});
}

void Circuit::add_vccs(std::string name, NodeId out_pos, NodeId out_neg, NodeId ctl_pos,
                       NodeId ctl_neg, double gm) {
  add_element({ElementKind::Vccs, std::move(name), out_pos, out_neg, ctl_pos, ctl_neg, gm});
}

void Circuit::add_current_source(std::string name, NodeId pos, NodeId neg, double ac_mag) {
  add_element({ElementKind::CurrentSource, std::move(name), pos, neg, kGround, kGround, ac_mag});
}

void Circuit::add_voltage_source(std::string name, NodeId pos, NodeId neg, double ac_mag) {
  if (pos == neg) throw InputError("voltage source '" + name + "' is shorted on itself");
  add_element({ElementKind::VoltageSource, std::move(name), pos, neg, kGround, kGround, ac_mag});
}

const Element* Circuit::find_element(std::string_view name) const {
  if (auto it = element_index_.find(text::to_lower(name)); it != element_index_.end()) {
    return &elements_[it->second];
  }
  return nullptr;
}

}  // namespace pcf::mna
