#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pcf/device/mos.hpp"

namespace pcf::device {

/// Pelgrom matching coefficients. A_Vt in mV*um, A_beta in %*um.
struct PelgromParams {
  double avt_nmos = 6.0;
  double avt_pmos = 6.6;
  double abeta_nmos = 1.04;
  double abeta_pmos = 0.99;

  double avt(Polarity p) const noexcept { return p == Polarity::Nmos ? avt_nmos : avt_pmos; }
  double abeta(Polarity p) const noexcept { return p == Polarity::Nmos ? abeta_nmos : abeta_pmos; }
  /// All coefficients finite and non-negative (zero disables mismatch).
  void validate() const;
  PelgromParams scaled(double k) const noexcept {
    return {avt_nmos * k, avt_pmos * k, abeta_nmos * k, abeta_pmos * k};
  }
};

/// sigma = A / sqrt(W L), in the unit of A. Throws InputError unless W, L > 0.
double pelgrom_sigma(double a, double w_um, double l_um);

/// Threshold sigma in volts for one device.
double sigma_vt(const MosSmallSignal& device, const PelgromParams& params);
/// Relative current-factor sigma (dimensionless) for one device.
double sigma_beta(const MosSmallSignal& device, const PelgromParams& params);

struct MismatchDelta {
  std::string device;
  double dvt = 0.0;        // V, positive reduces the overdrive
  double dbeta_rel = 0.0;  // delta beta / beta
};

/// Gaussian mismatch draws from one reproducible stream. The stream is
/// keyed by (seed, substream) so campaign run i can own substream i.
class MismatchSampler {
 public:
  MismatchSampler(std::uint64_t seed, std::uint64_t substream = 0);

  MismatchDelta draw(const MosSmallSignal& device, const PelgromParams& params);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

/// One independent (dVt, dbeta) pair per device, in device order.
std::vector<MismatchDelta> sample_mismatch(std::uint64_t seed, std::span<const MosSmallSignal> devices,
                                           const PelgromParams& params, std::uint64_t substream = 0);

struct MismatchedDevice {
  MosSmallSignal device;
  bool saturated = true;  // false: dVt >= Vov, the record is the nominal one
};

/// Perturbed record at fixed V_GS. Current follows the square law, gm is
/// 2 I_D'/Vov', gds tracks I_D (lambda fixed), gmb keeps its ratio to gm,
/// capacitances are unchanged.
MismatchedDevice apply_mismatch(const MosSmallSignal& device, const MismatchDelta& delta);

}  // namespace pcf::device
