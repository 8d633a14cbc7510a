#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "pcf/device/mismatch.hpp"
#include "pcf/device/mos.hpp"

namespace pcf::amp {

using device::MosSmallSignal;

/// Full parameter deck of the two-stage amplifier with positive capacitive
/// feedback compensation. Side "a" of the differential circuit is
/// M1, M3a, M3b, M5, M7, M9a, M9b; the partners on side "b" are
/// M2, M4a, M4b, M6, M8, M10a, M10b. Mt1 and Mt2 are the stage tails.
struct AmpDesign {
  MosSmallSignal m1, m2;
  MosSmallSignal m3a, m4a, m3b, m4b;
  MosSmallSignal m5, m6;
  MosSmallSignal m7, m8;
  MosSmallSignal m9a, m10a, m9b, m10b;
  MosSmallSignal mt1, mt2;

  double cc = 0.0;      // F, per side
  double cl = 0.0;      // F, per output
  double supply = 0.0;  // V

  // Operating-point aggregates for the first/second stage output nodes.
  // When present they replace the device-capacitance sums.
  std::optional<double> c1_override;
  std::optional<double> c2_override;

  device::PelgromParams pelgrom;

  /// Throws InputError on a broken deck: bad device records, Cc <= 0,
  /// Cl < 0, or matched partners with different nominal parameters.
  void validate() const;
};

struct DeviceRole {
  std::string_view name;
  MosSmallSignal AmpDesign::*member;
};

/// All sixteen device roles in deck order.
const std::array<DeviceRole, 16>& device_roles();

/// (reference, partner) roles of every matched pair.
const std::array<std::pair<std::string_view, std::string_view>, 7>& matched_pairs();

MosSmallSignal& device(AmpDesign& design, std::string_view role);
const MosSmallSignal& device(const AmpDesign& design, std::string_view role);

/// The amplifier as sized in the reference 0.18 um design: 0.75 pF
/// compensation, 5 pF load, 1.8 V supply, 325 fF / 137 fF node
/// aggregates. Identical to data/default.deck.
AmpDesign reference_design();

}  // namespace pcf::amp
