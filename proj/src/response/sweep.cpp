#include "pcf/response/sweep.hpp"

#include <exception>
#include <numbers>

#include "pcf/amp/builders.hpp"
#include "pcf/error.hpp"
#include "pcf/io/format.hpp"

namespace pcf::response {
namespace {

ClSweepRow sweep_point(const amp::AmpDesign& design, double cl, const Grid& grid) {
  if (!(cl > 0.0)) throw InputError("load capacitance must be > 0");
  auto params = amp::half_circuit_params(design);
  params.cl = cl;
  ClSweepRow row;
  row.cl = cl;
  row.report = analyze(bode(amp::closed_form_tf(params), grid));
  row.condition = amp::stability_check(params);
  row.report.stable = row.condition.stable;
  return row;
}

std::string opt(const std::optional<double>& v) {
  return v ? io::format_decimal(*v) : std::string("nan");
}

}  // namespace

std::vector<ClSweepRow> cl_sweep_serial(const amp::AmpDesign& design,
                                        std::span<const double> cl_values, const Grid& grid) {
  std::vector<ClSweepRow> rows;
  rows.reserve(cl_values.size());
  for (double cl : cl_values) rows.push_back(sweep_point(design, cl, grid));
  return rows;
}

std::vector<ClSweepRow> cl_sweep(const amp::AmpDesign& design, std::span<const double> cl_values,
                                 const Grid& grid) {
  (void)log_grid(grid);
  const auto n = static_cast<long>(cl_values.size());
  std::vector<ClSweepRow> rows(cl_values.size());
  std::vector<std::exception_ptr> errors(cl_values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      rows[k] = sweep_point(design, cl_values[k], grid);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const ClSweepRow> rows, bool with_margin) {
  os << "cl_farad,gbw_hz,pm_deg,dc_gain_db,stable";
  if (with_margin) os << ",lhs,margin";
  os << '\n';
  for (const auto& r : rows) {
    os << io::format_decimal(r.cl) << ',' << opt(r.report.gbw_hz) << ',' << opt(r.report.pm_deg)
       << ',' << io::format_decimal(r.report.dc_gain_db) << ',' << (r.report.stable ? 1 : 0);
    if (with_margin) {
      os << ',' << io::format_decimal(r.condition.lhs) << ','
         << io::format_decimal(r.condition.margin);
    }
    os << '\n';
  }
}

RejectionResponse cmrr_psrr_vs_freq(const amp::AmpDesign& design, const Grid& grid) {
  auto dm = amp::build_half_circuit(design, amp::HalfCircuitMode::Dm);
  auto cm = amp::build_half_circuit(design, amp::HalfCircuitMode::Cm);
  auto ps = amp::build_half_circuit(design, amp::HalfCircuitMode::Psrr);
  const mna::AcSolver dms(std::move(dm.circuit));
  const mna::AcSolver cms(std::move(cm.circuit));
  const mna::AcSolver pss(std::move(ps.circuit));
  const auto hdm = bode(dms, dm.source, dm.out_pos, dm.out_neg, grid);
  const auto hcm = bode(cms, cm.source, cm.out_pos, cm.out_neg, grid);
  const auto hps = bode(pss, ps.source, ps.out_pos, ps.out_neg, grid);
  return {ratio(hdm, hcm), ratio(hdm, hps)};
}

}  // namespace pcf::response
