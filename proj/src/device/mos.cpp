#include "pcf/device/mos.hpp"

#include <cmath>

#include "pcf/error.hpp"

namespace pcf::device {

const char* to_string(Polarity p) { return p == Polarity::Nmos ? "nmos" : "pmos"; }

void MosSmallSignal::validate() const {
  auto fail = [&](const char* what) { throw InputError("device '" + name + "': " + what); };
  for (double v : {gm, gmb, ro, w_um, l_um, cgs, cgd, cdb, id, vov}) {
    if (!std::isfinite(v)) fail("non-finite parameter");
  }
  if (gm < 0.0) fail("gm must be >= 0");
  if (gmb < 0.0) fail("gmb must be >= 0");
  if (ro <= 0.0) fail("ro must be > 0");
  if (w_um <= 0.0 || l_um <= 0.0) fail("W and L must be > 0");
  if (cgs < 0.0 || cgd < 0.0 || cdb < 0.0) fail("capacitances must be >= 0");
  if (id < 0.0) fail("drain current must be >= 0");
  if (vov <= 0.0) fail("overdrive must be > 0 (saturation)");
}

MosSmallSignal mos_from_vov(std::string name, Polarity polarity, double gm, double gmb, double ro,
                            double w_um, double l_um, double vov) {
  MosSmallSignal m{std::move(name), polarity, gm, gmb, ro, w_um, l_um};
  m.vov = vov;
  m.id = gm * vov / 2.0;
  return m;
}

MosSmallSignal mos_from_id(std::string name, Polarity polarity, double gm, double gmb, double ro,
                           double w_um, double l_um, double id) {
  MosSmallSignal m{std::move(name), polarity, gm, gmb, ro, w_um, l_um};
  m.id = id;
  m.vov = gm > 0.0 ? 2.0 * id / gm : 0.0;
  return m;
}

DrainCurrent square_law_id(double beta, double vgs, double vt) {
  const double vov = vgs - vt;
  if (vov <= 0.0) return {0.0, true};
  return {0.5 * beta * vov * vov, false};
}

}  // namespace pcf::device
