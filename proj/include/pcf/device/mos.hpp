#pragma once

#include <string>

namespace pcf::device {

enum class Polarity { Nmos, Pmos };

const char* to_string(Polarity p);

/// Small-signal record of one transistor at its operating point.
///
/// Units are strict SI except geometry, which stays in micrometres because
/// that is how Pelgrom coefficients are quoted.
struct MosSmallSignal {
  std::string name;
  Polarity polarity = Polarity::Nmos;
  double gm = 0.0;    // S
  double gmb = 0.0;   // S
  double ro = 0.0;    // ohm
  double w_um = 0.0;
  double l_um = 0.0;
  double cgs = 0.0;   // F
  double cgd = 0.0;   // F
  double cdb = 0.0;   // F
  double id = 0.0;    // A, per device
  double vov = 0.0;   // V, V_GS - V_TH

  double gds() const noexcept { return 1.0 / ro; }
  /// Current factor consistent with the square law, I_D = beta/2 * Vov^2.
  double beta() const noexcept { return 2.0 * id / (vov * vov); }

  /// Throws InputError when a record invariant is violated.
  void validate() const;
};

/// Record built from gm and overdrive; I_D follows from gm = 2 I_D / Vov.
MosSmallSignal mos_from_vov(std::string name, Polarity polarity, double gm, double gmb, double ro,
                            double w_um, double l_um, double vov);

/// Record built from gm and drain current; Vov follows from gm = 2 I_D / Vov.
MosSmallSignal mos_from_id(std::string name, Polarity polarity, double gm, double gmb, double ro,
                           double w_um, double l_um, double id);

struct DrainCurrent {
  double id = 0.0;  // A
  bool cutoff = false;
};

/// Square-law saturation current I_D = beta/2 (V_GS - V_TH)^2. Returns zero
/// current flagged as cutoff when vgs <= vt.
DrainCurrent square_law_id(double beta, double vgs, double vt);

}  // namespace pcf::device
