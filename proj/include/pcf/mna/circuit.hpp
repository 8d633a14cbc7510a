#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pcf::mna {

using NodeId = std::size_t;

/// Node 0 is always ground and is always present.
inline constexpr NodeId kGround = 0;

enum class ElementKind { Resistor, Capacitor, Vccs, CurrentSource, VoltageSource };

const char* to_string(ElementKind kind);

/// One linear element. `pos`/`neg` follow SPICE orientation: a current
/// source or VCCS drives its current out of `pos`, through the element, into
/// `neg`. `ctl_pos`/`ctl_neg` are only meaningful for a VCCS.
///
/// Values are SI: ohm, farad, siemens, or the AC magnitude of a source.
struct Element {
  ElementKind kind;
  std::string name;
  NodeId pos = kGround;
  NodeId neg = kGround;
  NodeId ctl_pos = kGround;
  NodeId ctl_neg = kGround;
  double value = 0.0;
};

/// Node/element graph for MNA stamping. Node ids are dense: ground is 0 and
/// named nodes get 1, 2, ... in order of first insertion.
class Circuit {
 public:
  Circuit();

  /// Returns the existing id when `name` is already known. "0" is ground.
  NodeId add_node(std::string_view name);
  std::optional<NodeId> find_node(std::string_view name) const;
  /// Throws InputError for an unknown node name.
  NodeId node(std::string_view name) const;
  const std::string& node_name(NodeId id) const;
  /// Number of nodes including ground.
  std::size_t node_count() const noexcept { return node_names_.size(); }

  void add_resistor(std::string name, NodeId a, NodeId b, double ohms);
  void add_capacitor(std::string name, NodeId a, NodeId b, double farads);
  /// Current gm * (V(ctl_pos) - V(ctl_neg)) flows from `out_pos` to `out_neg`
  /// through the source. Any finite gm, negative included.
  void add_vccs(std::string name, NodeId out_pos, NodeId out_neg, NodeId ctl_pos,
                NodeId ctl_neg, double gm);
  void add_current_source(std::string name, NodeId pos, NodeId neg, double ac_mag);
  void add_voltage_source(std::string name, NodeId pos, NodeId neg, double ac_mag);

  const std::vector<Element>& elements() const noexcept { return elements_; }
  /// Case-insensitive lookup.
  const Element* find_element(std::string_view name) const;

  bool empty() const noexcept { return elements_.empty(); }

 private:
  void add_element(Element element);
  void check_node(NodeId id, const std::string& element) const;

  std::vector<std::string> node_names_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<Element> elements_;
  std::unordered_map<std::string, std::size_t> element_index_;
};

}  // namespace pcf::mna
