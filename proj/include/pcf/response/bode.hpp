#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "pcf/amp/equations.hpp"
#include "pcf/mna/solver.hpp"

namespace pcf::response {

using cplx = std::complex<double>;

struct ResponsePoint {
  double freq_hz = 0.0;
  double mag_db = 0.0;
  double phase_deg = 0.0;  // unwrapped
};

struct FrequencyResponse {
  std::vector<ResponsePoint> points;
};

struct Grid {
  double f_start = 1.0;  // Hz
  double f_stop = 10e9;  // Hz
  int points_per_decade = 100;
};

/// ceil(decades * ppd) + 1 log-spaced frequencies with both ends exact.
/// Throws InputError unless 0 < f_start < f_stop and ppd >= 1.
std::vector<double> log_grid(const Grid& grid);

/// Magnitude in dB and phase continued from point to point by the multiple
/// of 360 degrees that keeps each step smallest. The first phase is in
/// (-180, 180].
FrequencyResponse from_complex(std::span<const double> freqs_hz, std::span<const cplx> h);

FrequencyResponse bode(const amp::ClosedFormTf& tf, const Grid& grid);
/// MNA path; frequency points are solved in parallel.
FrequencyResponse bode(const mna::AcSolver& solver, std::string_view source, mna::NodeId out_pos,
                       mna::NodeId out_neg, const Grid& grid);

/// num/den point by point: dB difference and phase difference, re-unwrapped.
FrequencyResponse ratio(const FrequencyResponse& num, const FrequencyResponse& den);

struct UnityCrossing {
  double freq_hz = 0.0;
  double phase_deg = 0.0;
  /// More than one 0 dB crossing in the response.
  bool non_monotone = false;
};

/// Lowest-frequency downward 0 dB crossing, interpolated linearly in
/// (log f, dB) and (log f, deg). Throws NumericError when there is none.
UnityCrossing unity_crossing(const FrequencyResponse& r);
double gbw(const FrequencyResponse& r);
double phase_margin(const FrequencyResponse& r);

/// First frequency where the magnitude is 3.0103 dB below the first point;
/// nullopt when it never gets there.
std::optional<double> f_3db(const FrequencyResponse& r);

struct StabilityReport {
  std::optional<double> gbw_hz;
  std::optional<double> pm_deg;  // only with a unity crossing
  double dc_gain_db = 0.0;
  std::optional<double> f3db_hz;
  bool non_monotone = false;
  bool stable = false;
};

/// Metrics of one response. `stable` is left false; callers set it from
/// the stability condition they trust.
StabilityReport analyze(const FrequencyResponse& r);

/// header freq_hz,mag_db,phase_deg; decimal notation, 12 significant digits.
void write_csv(std::ostream& os, const FrequencyResponse& r);

}  // namespace pcf::response
