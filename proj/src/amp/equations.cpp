#include "pcf/amp/equations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcf/error.hpp"

namespace pcf::amp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_db(double x) { return 20.0 * std::log10(std::abs(x)); }

StageResistance from_conductance(double g) {
  StageResistance r;
  r.denominator = g;
  if (g == 0.0) {
    r.marginal = true;
    r.ohms = kInf;
  } else {
    r.ohms = 1.0 / g;
  }
  return r;
}

}  // namespace

double parallel(double a, double b) {
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  return a * b / (a + b);
}

double r1_nominal(const AmpDesign& d) { return parallel(d.m1.ro, d.m3a.ro / 2.0); }

StageResistance r1_mismatch(double gds1, double gds3a, double gds3b, double gm3a, double gm3b) {
  return from_conductance(gds1 + gds3a + gds3b + gm3a - gm3b);
}

double cascode_resistance(double ro5, double gm7, double gmb7, double ro7) {
  return ro7 + ro5 * (1.0 + (gm7 + gmb7) * ro7);
}

double r2_nominal(const AmpDesign& d) {
  return parallel(d.m9a.ro / 2.0, cascode_resistance(d.m5.ro, d.m7.gm, d.m7.gmb, d.m7.ro));
}

StageResistance r2_mismatch(double gds5, double gm7, double gmb7, double gds7, double gds9a,
                            double gds9b, double gm9a, double gm9b) {
  const double rcasc = cascode_resistance(1.0 / gds5, gm7, gmb7, 1.0 / gds7);
  return from_conductance(1.0 / rcasc + gds9a + gds9b + gm9a - gm9b);
}

NodeCaps node_caps(const AmpDesign& d) {
  NodeCaps caps;
  if (d.c1_override) {
    caps.c1 = *d.c1_override;
    caps.c1_overridden = true;
  } else {
    caps.c1 = 2 * d.m3a.cgs + 2 * d.m3a.cdb + 4 * d.m3b.cgd + d.m5.cgs + 2 * d.m5.cgd +
              d.m1.cdb + d.m1.cgd;
  }
  if (d.c2_override) {
    caps.c2 = *d.c2_override;
    caps.c2_overridden = true;
  } else {
    caps.c2 = 2 * d.m9a.cgs + 2 * d.m9a.cdb + 4 * d.m9b.cgd + d.m7.cdb + d.m7.cgd;
  }
  return caps;
}

double DcGain::stage1_db() const { return to_db(stage1); }
double DcGain::stage2_db() const { return to_db(stage2); }
double DcGain::db() const { return to_db(total); }

DcGain dc_gain_dm(double gm1, const StageResistance& r1, double gm5, const StageResistance& r2) {
  if (r1.latched() || r2.latched()) {
    std::string which = r1.latched() && r2.latched() ? "both stages"
                        : r1.latched()               ? "first stage"
                                                     : "second stage";
    throw LatchError("negative output conductance in " + which +
                     ": cross-coupled load transconductance exceeds the node conductance, the "
                     "output latches");
  }
  DcGain g;
  g.stage1 = gm1 * r1.ohms;
  g.stage2 = gm5 * r2.ohms;
  g.total = g.stage1 * g.stage2;
  g.sign = 1;
  return g;
}

std::pair<StageResistance, StageResistance> stage_resistances(const AmpDesign& d) {
  auto r1 = r1_mismatch(d.m1.gds(), d.m3a.gds(), d.m3b.gds(), d.m3a.gm, d.m3b.gm);
  auto r2 = r2_mismatch(d.m5.gds(), d.m7.gm, d.m7.gmb, d.m7.gds(), d.m9a.gds(), d.m9b.gds(),
                        d.m9a.gm, d.m9b.gm);
  // With balanced loads the parallel forms are the same quantity and avoid
  // the cancellation in the conductance sums.
  if (d.m3a.gm == d.m3b.gm && d.m3a.ro == d.m3b.ro) r1 = from_conductance(1.0 / r1_nominal(d));
  if (d.m9a.gm == d.m9b.gm && d.m9a.ro == d.m9b.ro) r2 = from_conductance(1.0 / r2_nominal(d));
  return {r1, r2};
}

DcGain dc_gain_dm(const AmpDesign& d) {
  const auto [r1, r2] = stage_resistances(d);
  return dc_gain_dm(d.m1.gm, r1, d.m5.gm, r2);
}

double degenerated_gm(double gm, double gmb, double ro, double rs) {
  if (rs < 0.0) throw InputError("source degeneration must be >= 0");
  if (std::isinf(rs)) return 0.0;
  return gm / (1.0 + rs / ro + rs * (gm + gmb));
}

double cm_gain(const AmpDesign& d) {
  const double stage1 =
      d.m1.gm / (2.0 * d.m3a.gm) /
      (1.0 + 2.0 * d.mt1.ro / d.m1.ro + 2.0 * d.mt1.ro * (d.m1.gm + d.m1.gmb));
  const double stage2 =
      d.m5.gm / (2.0 * d.m9a.gm) /
      (1.0 + 2.0 * d.mt2.ro / d.m5.ro + 2.0 * d.mt2.ro * (d.m5.gm + d.m5.gmb));
  return stage1 * stage2;
}

double cmrr_db(const AmpDesign& d) {
  const double acm = cm_gain(d);
  if (acm == 0.0) return kInf;
  return dc_gain_dm(d).db() - to_db(acm);
}

PsrrPlus psrr_plus(const AmpDesign& d) {
  PsrrPlus p;
  const double ad = dc_gain_dm(d).total;
  p.psrr_db = to_db(ad);
  p.cm_path = -cm_gain(d);
  const double ro7 = cascode_resistance(d.m5.ro, d.m7.gm, d.m7.gmb, d.m7.ro);
  p.divider = ro7 / (ro7 + 1.0 / (2.0 * d.m9a.gm));
  p.vout_over_vdd = p.cm_path + p.divider;
  p.psrr_db_decomposed = p.vout_over_vdd == 0.0 ? kInf : to_db(ad / p.vout_over_vdd);
  return p;
}

HalfCircuitParams half_circuit_params(const AmpDesign& d) {
  const auto caps = node_caps(d);
  HalfCircuitParams p;
  p.gm1 = d.m1.gm;
  const auto [r1, r2] = stage_resistances(d);
  p.r1 = r1.ohms;
  p.c1 = caps.c1;
  p.gm5 = d.m5.gm;
  p.r2 = r2.ohms;
  p.c2 = caps.c2;
  p.cc = d.cc;
  p.cl = d.cl;
  return p;
}

cplx ClosedFormTf::evaluate(cplx s) const {
  const cplx num = std::isinf(z) ? cplx(1.0) : 1.0 + s / z;
  return a0 * num / (1.0 + alpha * s + beta * s * s);
}

ClosedFormTf closed_form_tf(const HalfCircuitParams& p) {
  ClosedFormTf tf;
  tf.a0 = p.gm1 * p.r1 * p.gm5 * p.r2;
  tf.z = p.cc > 0.0 ? p.gm5 / p.cc : kInf;
  tf.alpha_r1 = (p.cc + p.c1) * p.r1;
  tf.alpha = p.r2 * (p.c2 + p.cl + p.cc * (1.0 - p.gm5 * p.r1)) + tf.alpha_r1;
  tf.beta = p.r1 * p.r2 * ((p.c2 + p.cl) * (p.c1 + p.cc) + p.c1 * p.cc);
  return tf;
}

ClosedFormTf closed_form_tf(const AmpDesign& d) { return closed_form_tf(half_circuit_params(d)); }

ClosedFormPoles poles_closed_form(const ClosedFormTf& tf) {
  if (!(tf.beta > 0.0)) throw NumericError("closed-form poles need beta > 0");
  ClosedFormPoles p;
  p.p1_approx = -1.0 / tf.alpha;
  p.p1_simplified = -1.0 / (tf.alpha - tf.alpha_r1);
  p.p2_approx = -tf.alpha / tf.beta;
  p.p2_simplified = -(tf.alpha - tf.alpha_r1) / tf.beta;

  // beta s^2 + alpha s + 1 = 0
  const double disc = tf.alpha * tf.alpha - 4.0 * tf.beta;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (tf.alpha + std::copysign(sq, tf.alpha));
    if (q == 0.0) {
      // alpha == 0 and disc == 0 cannot happen with beta > 0
      throw NumericError("degenerate closed-form denominator");
    }
    cplx a(q / tf.beta), b(1.0 / q);
    if (std::abs(a) > std::abs(b)) std::swap(a, b);
    p.exact = {a, b};
  } else {
    const double re = -tf.alpha / (2.0 * tf.beta);
    const double im = std::sqrt(-disc) / (2.0 * tf.beta);
    p.exact = {cplx(re, -im), cplx(re, im)};
  }
  return p;
}

StabilityCheck stability_check(const HalfCircuitParams& p) {
  StabilityCheck s;
  s.lhs = (p.c2 + p.cl) / p.cc;
  s.rhs = p.gm5 * p.r1 - 1.0;
  s.margin = s.lhs - s.rhs;
  const double scale = std::max({1.0, std::abs(s.lhs), std::abs(s.rhs)});
  s.marginal = std::abs(s.margin) <= 1e-12 * scale;
  s.stable = s.margin > 0.0 && !s.marginal;
  return s;
}

StabilityCheck stability_check(const AmpDesign& d) { return stability_check(half_circuit_params(d)); }

}  // namespace pcf::amp
