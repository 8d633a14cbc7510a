#include "pcf/device/mismatch.hpp"

#include <cmath>

#include "pcf/error.hpp"

namespace pcf::device {

void PelgromParams::validate() const {
  for (double v : {avt_nmos, avt_pmos, abeta_nmos, abeta_pmos}) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("Pelgrom coefficients must be finite and >= 0");
  }
}

double pelgrom_sigma(double a, double w_um, double l_um) {
  if (!(w_um > 0.0) || !(l_um > 0.0)) {
    throw InputError("Pelgrom sigma needs W > 0 and L > 0");
  }
  return a / std::sqrt(w_um * l_um);
}

double sigma_vt(const MosSmallSignal& device, const PelgromParams& params) {
  return pelgrom_sigma(params.avt(device.polarity), device.w_um, device.l_um) * 1e-3;
}

double sigma_beta(const MosSmallSignal& device, const PelgromParams& params) {
  return pelgrom_sigma(params.abeta(device.polarity), device.w_um, device.l_um) * 1e-2;
}

MismatchSampler::MismatchSampler(std::uint64_t seed, std::uint64_t substream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32)};
  engine_.seed(seq);
}

MismatchDelta MismatchSampler::draw(const MosSmallSignal& device, const PelgromParams& params) {
  // Always consume two normals so the stream stays aligned even for zero sigma.
  const double zv = unit_(engine_);
  const double zb = unit_(engine_);
  return {device.name, zv * sigma_vt(device, params), zb * sigma_beta(device, params)};
}

std::vector<MismatchDelta> sample_mismatch(std::uint64_t seed, std::span<const MosSmallSignal> devices,
                                           const PelgromParams& params, std::uint64_t substream) {
  MismatchSampler sampler(seed, substream);
  std::vector<MismatchDelta> out;
  out.reserve(devices.size());
  for (const auto& d : devices) out.push_back(sampler.draw(d, params));
  return out;
}

MismatchedDevice apply_mismatch(const MosSmallSignal& device, const MismatchDelta& delta) {
  const double vov = device.vov - delta.dvt;
  if (!(vov > 0.0) || !(1.0 + delta.dbeta_rel > 0.0)) return {device, false};

  MosSmallSignal out = device;
  const double shrink = vov / device.vov;
  const double ratio = (1.0 + delta.dbeta_rel) * shrink * shrink;
  out.vov = vov;
  out.id = device.id * ratio;
  // gm' = 2 I_D'/Vov', written relative to the nominal gm
  out.gm = device.gm * (1.0 + delta.dbeta_rel) * shrink;
  out.ro = device.ro / ratio;
  out.gmb = device.gm > 0.0 ? device.gmb * (out.gm / device.gm) : device.gmb;
  return {out, true};
}

}  // namespace pcf::device
