#pragma once

#include <string>

#include "pcf/amp/design.hpp"
#include "pcf/amp/equations.hpp"
#include "pcf/mna/circuit.hpp"

namespace pcf::amp {

enum class HalfCircuitMode { Dm, Cm, Psrr };

const char* to_string(HalfCircuitMode mode);

/// A circuit plus the excitation and output pair whose ratio is the gain of
/// interest: V(out_pos) - V(out_neg) per unit of `source`.
struct HalfCircuit {
  mna::Circuit circuit;
  std::string source;
  mna::NodeId out_pos = mna::kGround;
  mna::NodeId out_neg = mna::kGround;
};

/// Differential half circuit with first-stage node n1 and second-stage
/// node outb. outb is the complementary output (V(outb) = -Vod), which is
/// where Cc from n1 lands; with that orientation every element value is
/// positive and the returned output pair reads +Vod.
HalfCircuit build_dm_half_circuit(const HalfCircuitParams& p);

/// DM: the network above. CM and PSRR: transistor-level half circuits with
/// each device as gm, gmb and r_o, both tails as 2 r_Ot, and Cc between the
/// stage outputs of the same side. CM drives the input gate, PSRR the
/// positive supply. Throws LatchError for a deck with a non-positive stage
/// resistance.
HalfCircuit build_half_circuit(const AmpDesign& d, HalfCircuitMode mode);

}  // namespace pcf::amp
