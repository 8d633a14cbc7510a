#include "pcf/amp/builders.hpp"

#include <cmath>

#include "pcf/error.hpp"

namespace pcf::amp {
namespace {

using mna::Circuit;
using mna::kGround;
using mna::NodeId;

void check_resistance(double r, const char* which) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw LatchError(std::string(which) + " is not a finite positive resistance; the stage latches");
  }
}

// Drain current gm*vgs + gmb*vbs flows drain to source inside the device,
// i.e. out of the drain node.
void add_mos(Circuit& c, const MosSmallSignal& m, const std::string& tag, NodeId drain,
             NodeId gate, NodeId source, NodeId bulk) {
  if (m.gm != 0.0 && gate != source) c.add_vccs(tag + ".gm", drain, source, gate, source, m.gm);
  if (m.gmb != 0.0 && bulk != source) c.add_vccs(tag + ".gmb", drain, source, bulk, source, m.gmb);
  c.add_resistor(tag + ".ro", drain, source, m.ro);
}

}  // namespace

const char* to_string(HalfCircuitMode mode) {
  switch (mode) {
    case HalfCircuitMode::Dm: return "dm";
    case HalfCircuitMode::Cm: return "cm";
    case HalfCircuitMode::Psrr: return "psrr";
  }
  return "?";
}

HalfCircuit build_dm_half_circuit(const HalfCircuitParams& p) {
  check_resistance(p.r1, "R1");
  check_resistance(p.r2, "R2");
  HalfCircuit h;
  Circuit& c = h.circuit;
  const NodeId in = c.add_node("in");
  const NodeId n1 = c.add_node("n1");
  const NodeId outb = c.add_node("outb");
  c.add_voltage_source("VIN", in, kGround, 1.0);
  c.add_vccs("G1", n1, kGround, in, kGround, p.gm1);
  c.add_resistor("R1", n1, kGround, p.r1);
  if (p.c1 > 0.0) c.add_capacitor("C1", n1, kGround, p.c1);
  if (p.cc > 0.0) c.add_capacitor("CC", n1, outb, p.cc);
  c.add_vccs("G5", kGround, outb, n1, kGround, p.gm5);
  c.add_resistor("R2", outb, kGround, p.r2);
  if (p.c2 + p.cl > 0.0) c.add_capacitor("C2", outb, kGround, p.c2 + p.cl);
  h.source = "VIN";
  h.out_pos = kGround;
  h.out_neg = outb;
  return h;
}

HalfCircuit build_half_circuit(const AmpDesign& d, HalfCircuitMode mode) {
  if (mode == HalfCircuitMode::Dm) return build_dm_half_circuit(half_circuit_params(d));

  const auto [r1, r2] = stage_resistances(d);
  check_resistance(r1.ohms, "R1");
  check_resistance(r2.ohms, "R2");
  const auto caps = node_caps(d);

  HalfCircuit h;
  Circuit& c = h.circuit;
  const NodeId in = c.add_node("in");
  const NodeId vdd = c.add_node("vdd");
  const NodeId s1 = c.add_node("s1");
  const NodeId n1 = c.add_node("n1");
  const NodeId s5 = c.add_node("s5");
  const NodeId x = c.add_node("x");
  const NodeId out = c.add_node("out");

  const bool cm = mode == HalfCircuitMode::Cm;
  c.add_voltage_source("VIN", in, kGround, cm ? 1.0 : 0.0);
  c.add_voltage_source("VDD", vdd, kGround, cm ? 0.0 : 1.0);

  // first stage; in common mode both load gates follow n1
  add_mos(c, d.m1, "M1", n1, in, s1, vdd);
  c.add_resistor("RT1", s1, vdd, 2.0 * d.mt1.ro);
  add_mos(c, d.m3a, "M3A", n1, n1, kGround, kGround);
  add_mos(c, d.m3b, "M3B", n1, n1, kGround, kGround);
  if (caps.c1 > 0.0) c.add_capacitor("C1", n1, kGround, caps.c1);

  // cascoded second stage, M7 gate at AC ground
  add_mos(c, d.m5, "M5", x, n1, s5, kGround);
  c.add_resistor("RT2", s5, kGround, 2.0 * d.mt2.ro);
  add_mos(c, d.m7, "M7", out, kGround, x, kGround);
  add_mos(c, d.m9a, "M9A", out, out, vdd, vdd);
  add_mos(c, d.m9b, "M9B", out, out, vdd, vdd);
  if (caps.c2 + d.cl > 0.0) c.add_capacitor("C2", out, kGround, caps.c2 + d.cl);
  c.add_capacitor("CC", n1, out, d.cc);

  h.source = cm ? "VIN" : "VDD";
  h.out_pos = out;
  h.out_neg = kGround;
  return h;
}

}  // namespace pcf::amp
