#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "pcf/amp/design.hpp"
#include "pcf/amp/equations.hpp"
#include "pcf/response/bode.hpp"

namespace pcf::response {

struct ClSweepRow {
  double cl = 0.0;  // F
  StabilityReport report;
  amp::StabilityCheck condition;
};

/// One closed-form evaluation per load, in input order. `stable` follows
/// the stability condition on C_L. Throws InputError for a non-positive
/// load. OpenMP-parallel over loads.
std::vector<ClSweepRow> cl_sweep(const amp::AmpDesign& design, std::span<const double> cl_values,
                                 const Grid& grid = {});
std::vector<ClSweepRow> cl_sweep_serial(const amp::AmpDesign& design,
                                        std::span<const double> cl_values, const Grid& grid = {});

/// header cl_farad,gbw_hz,pm_deg,dc_gain_db,stable. With `with_margin` two
/// columns follow: lhs and margin of the stability condition.
void write_sweep_csv(std::ostream& os, std::span<const ClSweepRow> rows, bool with_margin = false);

struct RejectionResponse {
  FrequencyResponse cmrr;
  FrequencyResponse psrr;
};

/// |H_dm| / |H_cm| and |H_dm| / |H_vdd|, all three from MNA solves.
RejectionResponse cmrr_psrr_vs_freq(const amp::AmpDesign& design, const Grid& grid);

}  // namespace pcf::response
