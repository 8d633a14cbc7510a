#include "pcf/io/report.hpp"

#include <cmath>

#include "pcf/amp/equations.hpp"
#include "pcf/error.hpp"
#include "pcf/io/format.hpp"
#include "pcf/response/bode.hpp"
#include "pcf/text.hpp"

namespace pcf::io {

std::vector<ReportEntry> closed_form_report(const amp::AmpDesign& d) {
  d.validate();
  std::vector<ReportEntry> out;
  auto fixed = [&](std::string key, double v, int decimals) {
    out.push_back({std::move(key), format_fixed(v, decimals)});
  };
  auto sig = [&](std::string key, double v, int digits) {
    out.push_back({std::move(key), format_decimal(v, digits)});
  };
  auto flag = [&](std::string key, bool v) { out.push_back({std::move(key), v ? "yes" : "no"}); };

  const auto [r1, r2] = amp::stage_resistances(d);
  const auto caps = amp::node_caps(d);
  const auto gain = amp::dc_gain_dm(d);
  const auto p = amp::half_circuit_params(d);
  const auto tf = amp::closed_form_tf(p);
  const auto poles = amp::poles_closed_form(tf);
  const auto check = amp::stability_check(p);
  const auto psrr = amp::psrr_plus(d);
  const double acm = amp::cm_gain(d);
  constexpr double kMega = 1e6;

  sig("R1_ohm", r1.ohms, 6);
  sig("R2_ohm", r2.ohms, 6);
  fixed("C1_fF", caps.c1 * 1e15, 1);
  fixed("C2_fF", caps.c2 * 1e15, 1);
  sig("CC_pF", d.cc * 1e12, 6);
  sig("CL_pF", d.cl * 1e12, 6);
  fixed("A1_dB", gain.stage1_db(), 2);
  fixed("A2_dB", gain.stage2_db(), 2);
  fixed("Av_dB", gain.db(), 2);
  sig("ACM", acm, 4);
  fixed("CMRR_dB", amp::cmrr_db(d), 1);
  fixed("PSRR_dB", psrr.psrr_db, 2);
  sig("PSRR_divider", psrr.divider, 4);
  fixed("PSRR_decomposed_dB", psrr.psrr_db_decomposed, 2);
  sig("alpha_us", tf.alpha * 1e6, 6);
  sig("beta_us2", tf.beta * 1e12, 6);
  fixed("p1_Mrad_s", -poles.p1_approx / kMega, 3);
  fixed("p1_simplified_Mrad_s", -poles.p1_simplified / kMega, 3);
  fixed("p1_exact_Mrad_s", std::abs(poles.exact[0]) / kMega, 3);
  fixed("p2_Mrad_s", -poles.p2_approx / kMega, 1);
  fixed("p2_simplified_Mrad_s", -poles.p2_simplified / kMega, 1);
  fixed("p2_exact_Mrad_s", std::abs(poles.exact[1]) / kMega, 1);
  flag("poles_complex", poles.exact[0].imag() != 0.0);
  fixed("z_Mrad_s", tf.z / kMega, 0);

  // closed-form open-loop response on the default grid
  const auto report = response::analyze(response::bode(tf, response::Grid{}));
  out.push_back({"GBW_MHz", report.gbw_hz ? format_fixed(*report.gbw_hz / 1e6, 2) : "none"});
  out.push_back({"PM_deg", report.pm_deg ? format_fixed(*report.pm_deg, 1) : "none"});

  sig("stability_lhs", check.lhs, 6);
  sig("stability_rhs", check.rhs, 6);
  sig("stability_margin", check.margin, 6);
  flag("stable", check.stable);
  return out;
}

void write_report(std::ostream& os, const std::vector<ReportEntry>& entries) {
  for (const auto& e : entries) os << e.key << '=' << e.value << '\n';
}

std::map<std::string, std::string> parse_report(std::string_view input) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < input.size()) {
    const auto nl = input.find('\n', pos);
    const auto line = text::trim(
        input.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? input.size() : nl + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("report line without '=': " + std::string(line));
    out[std::string(text::trim(line.substr(0, eq)))] = std::string(text::trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace pcf::io
