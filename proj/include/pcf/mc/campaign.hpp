#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pcf/amp/design.hpp"
#include "pcf/device/mismatch.hpp"
#include "pcf/response/bode.hpp"

namespace pcf::mc {

struct McConfig {
  int runs = 30;
  std::uint64_t seed = 1;
  amp::AmpDesign design;
  device::PelgromParams pelgrom;
  response::Grid grid{1.0, 10e9, 100};
  /// Out-of-saturation draws are redrawn up to this many times per run.
  int max_redraws = 1000;

  void validate() const;
};

/// Builds a config that takes its Pelgrom coefficients from the deck.
McConfig make_config(const amp::AmpDesign& design, int runs, std::uint64_t seed);

struct McRun {
  int index = 0;
  std::vector<device::MismatchDelta> deltas;
  double r1 = 0.0;  // ohm, signed; 0 for a zero denominator
  double r2 = 0.0;
  double av_db = 0.0;   // nan when latched
  double gbw_hz = 0.0;  // nan when latched or without a unity crossing
  double pm_deg = 0.0;
  double offset_v = 0.0;
  bool latched = false;
  int redraws = 0;  // draws rejected because a device left saturation
};

/// Roles that receive a mismatch delta: the reference device of every
/// matched pair. The partner stays nominal, so the drawn sigma is the
/// sigma of the pair difference.
const std::vector<std::string>& sampled_roles();

/// One run on substream `index`.
McRun simulate_run(const McConfig& config, int index);

/// Input-referred offset of the two stages. Each device contributes
/// e = dVt - (Vov/2) dbeta; pair differences are weighted by gm ratios and
/// the second stage is divided by the first-stage gain. Devices missing from
/// `deltas` count as nominal.
double input_referred_offset(std::span<const device::MismatchDelta> deltas,
                             const amp::AmpDesign& design);

struct Stats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  int count = 0;
};

struct McSummary {
  int runs = 0;
  int latch_count = 0;
  int redraws = 0;
  Stats r1, r2, av_db, gbw_hz, pm_deg, offset_v;
  double av_spread_db = 0.0;
  double offset_max_abs = 0.0;
  double av_nominal_db = 0.0;
  double gbw_nominal_hz = 0.0;
  /// max over functional runs of max(x, 1/x), x = R1 R2 / (R1 R2)_nominal.
  double r1r2_max_ratio = 0.0;
  /// largest |gbw / gbw_nominal - 1|
  double gbw_max_rel_dev = 0.0;
};

struct McResult {
  std::vector<McRun> runs;
  McSummary summary;
};

/// OpenMP-parallel over runs; bit-identical to run_campaign_serial.
McResult run_campaign(const McConfig& config);
McResult run_campaign_serial(const McConfig& config);

/// Latched runs count toward r1, r2, offset and latch_count only.
McSummary summarize(std::span<const McRun> runs, const amp::AmpDesign& nominal,
                    const response::Grid& grid);

/// header run,r1_ohm,r2_ohm,av_db,gbw_hz,pm_deg,offset_v,latched
void write_runs_csv(std::ostream& os, std::span<const McRun> runs);
void write_summary(std::ostream& os, const McConfig& config, const McSummary& summary);

}  // namespace pcf::mc
