#pragma once

#include <array>
#include <complex>
#include <utility>

#include "pcf/amp/design.hpp"

namespace pcf::amp {

using cplx = std::complex<double>;

/// a || b; an infinite argument returns the other one.
double parallel(double a, double b);

/// Signed stage output resistance. A zero denominator is reported as
/// marginal with `ohms` = +inf rather than dividing by zero.
struct StageResistance {
  double ohms = 0.0;
  double denominator = 0.0;  // S
  bool marginal = false;

  /// Negative or zero total conductance: the positive-feedback load wins
  /// and the stage latches.
  bool latched() const noexcept { return denominator <= 0.0; }
};

/// r_O1 || r_O3a/2
double r1_nominal(const AmpDesign& d);
StageResistance r1_mismatch(double gds1, double gds3a, double gds3b, double gm3a, double gm3b);

/// Resistance looking into the drain of the cascode M7 over M5.
double cascode_resistance(double ro5, double gm7, double gmb7, double ro7);
/// r_O9a/2 || R_O7
double r2_nominal(const AmpDesign& d);
StageResistance r2_mismatch(double gds5, double gm7, double gmb7, double gds7, double gds9a,
                            double gds9b, double gm9a, double gm9b);

/// Both stage resistances of a deck. Balanced loads use the parallel forms,
/// unbalanced ones the signed conductance sums.
std::pair<StageResistance, StageResistance> stage_resistances(const AmpDesign& d);

struct NodeCaps {
  double c1 = 0.0;  // F, first-stage output
  double c2 = 0.0;  // F, second-stage output, load excluded
  bool c1_overridden = false;
  bool c2_overridden = false;
};

NodeCaps node_caps(const AmpDesign& d);

struct DcGain {
  double stage1 = 0.0;  // |gm1 R1|
  double stage2 = 0.0;  // |gm5 R2|
  double total = 0.0;
  /// Product of the two inverting stages. Always +1 for a working design.
  int sign = 1;

  double stage1_db() const;
  double stage2_db() const;
  double db() const;
};

/// Throws LatchError when either resistance is non-positive.
DcGain dc_gain_dm(double gm1, const StageResistance& r1, double gm5, const StageResistance& r2);
DcGain dc_gain_dm(const AmpDesign& d);

/// Transconductance of a common-source device with source resistance rs.
double degenerated_gm(double gm, double gmb, double ro, double rs);

/// |A_v,CM| with 2 r_Ot degeneration in both stages.
double cm_gain(const AmpDesign& d);

/// 20 log10(A_d / A_v,CM); +inf when the CM gain is exactly zero.
double cmrr_db(const AmpDesign& d);

struct PsrrPlus {
  double psrr_db = 0.0;     // A_d in dB (V_out / V_dd taken as 1)
  double cm_path = 0.0;     // -A_v,CM
  double divider = 0.0;     // R_O7 / (R_O7 + 1/(2 gm9a))
  double vout_over_vdd = 0.0;
  /// Ratio using the decomposed V_out / V_dd instead of the unit approximation.
  double psrr_db_decomposed = 0.0;
};

PsrrPlus psrr_plus(const AmpDesign& d);

/// Element values of the differential half circuit.
struct HalfCircuitParams {
  double gm1 = 0.0;
  double r1 = 0.0;
  double c1 = 0.0;
  double gm5 = 0.0;
  double r2 = 0.0;
  double c2 = 0.0;
  double cc = 0.0;
  double cl = 0.0;
};

HalfCircuitParams half_circuit_params(const AmpDesign& d);

/// H(s) = a0 (1 + s/z) / (1 + alpha s + beta s^2)
struct ClosedFormTf {
  double a0 = 0.0;
  double z = 0.0;      // rad/s, magnitude of the LHP zero; +inf with no Cc
  double alpha = 0.0;  // s
  double beta = 0.0;   // s^2
  double alpha_r1 = 0.0;  // the (Cc + C1) R1 part of alpha

  cplx evaluate(cplx s) const;
  cplx at_omega(double omega) const { return evaluate(cplx(0.0, omega)); }
};

ClosedFormTf closed_form_tf(const HalfCircuitParams& p);
ClosedFormTf closed_form_tf(const AmpDesign& d);

struct ClosedFormPoles {
  double p1_approx = 0.0;      // -1/alpha
  double p1_simplified = 0.0;  // R1 term of alpha dropped
  double p2_approx = 0.0;      // -alpha/beta
  double p2_simplified = 0.0;  // -(alpha - alpha_r1)/beta
  std::array<cplx, 2> exact{};  // roots of 1 + alpha s + beta s^2, |p| ascending
};

/// Requires beta > 0 (throws NumericError otherwise).
ClosedFormPoles poles_closed_form(const ClosedFormTf& tf);

struct StabilityCheck {
  double lhs = 0.0;  // (C2 + CL) / Cc
  double rhs = 0.0;  // gm5 R1 - 1
  double margin = 0.0;
  bool stable = false;
  bool marginal = false;
};

StabilityCheck stability_check(const HalfCircuitParams& p);
StabilityCheck stability_check(const AmpDesign& d);

}  // namespace pcf::amp
