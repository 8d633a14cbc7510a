#include "pcf/response/bode.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pcf/error.hpp"
#include "pcf/io/format.hpp"

namespace pcf::response {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double db(cplx h) { return 20.0 * std::log10(std::abs(h)); }

double unwrap_step(double prev, double raw) {
  return raw + 360.0 * std::round((prev - raw) / 360.0);
}

std::vector<double> omegas(const std::vector<double>& f) {
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = kTwoPi * f[i];
  return w;
}

std::string range_text(const FrequencyResponse& r) {
  return io::format_decimal(r.points.front().freq_hz, 6) + " Hz to " +
         io::format_decimal(r.points.back().freq_hz, 6) + " Hz";
}

}  // namespace

std::vector<double> log_grid(const Grid& grid) {
  if (!(grid.f_start > 0.0) || !(grid.f_stop > grid.f_start) || !std::isfinite(grid.f_stop)) {
    throw InputError("frequency grid needs 0 < f_start < f_stop");
  }
  if (grid.points_per_decade < 1) throw InputError("points per decade must be >= 1");
  const double decades = std::log10(grid.f_stop / grid.f_start);
  const auto n = static_cast<std::size_t>(std::ceil(decades * grid.points_per_decade - 1e-9)) + 1;
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = grid.f_start * std::pow(10.0, decades * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  f.front() = grid.f_start;
  f.back() = grid.f_stop;
  return f;
}

FrequencyResponse from_complex(std::span<const double> freqs_hz, std::span<const cplx> h) {
  if (freqs_hz.size() != h.size()) throw InputError("frequency and response lengths differ");
  FrequencyResponse r;
  r.points.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i > 0 && !(freqs_hz[i] > freqs_hz[i - 1])) {
      throw InputError("frequencies must be strictly increasing");
    }
    double phase = std::arg(h[i]) * kRadToDeg;
    if (phase == -180.0) phase = 180.0;
    if (i > 0) phase = unwrap_step(r.points.back().phase_deg, phase);
    r.points.push_back({freqs_hz[i], db(h[i]), phase});
  }
  return r;
}

FrequencyResponse bode(const amp::ClosedFormTf& tf, const Grid& grid) {
  const auto f = log_grid(grid);
  std::vector<cplx> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = tf.at_omega(kTwoPi * f[i]);
  return from_complex(f, h);
}

FrequencyResponse bode(const mna::AcSolver& solver, std::string_view source, mna::NodeId out_pos,
                       mna::NodeId out_neg, const Grid& grid) {
  const auto f = log_grid(grid);
  const auto w = omegas(f);
  const auto h = solver.transfer(source, out_pos, out_neg, w);
  return from_complex(f, h);
}

FrequencyResponse ratio(const FrequencyResponse& num, const FrequencyResponse& den) {
  if (num.points.size() != den.points.size()) throw InputError("responses on different grids");
  FrequencyResponse r;
  r.points.reserve(num.points.size());
  for (std::size_t i = 0; i < num.points.size(); ++i) {
    const auto& a = num.points[i];
    const auto& b = den.points[i];
    if (a.freq_hz != b.freq_hz) throw InputError("responses on different grids");
    double phase = a.phase_deg - b.phase_deg;
    if (i == 0) {
      phase = std::remainder(phase, 360.0);
      if (phase == -180.0) phase = 180.0;
    } else {
      phase = unwrap_step(r.points.back().phase_deg, phase);
    }
    r.points.push_back({a.freq_hz, a.mag_db - b.mag_db, phase});
  }
  return r;
}

UnityCrossing unity_crossing(const FrequencyResponse& r) {
  const auto& p = r.points;
  if (p.size() < 2) throw InputError("response needs at least two points");
  int crossings = 0;
  std::optional<std::size_t> first_down;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const bool above = p[k].mag_db >= 0.0;
    const bool next_above = p[k + 1].mag_db >= 0.0;
    if (above != next_above) {
      ++crossings;
      if (above && !first_down) first_down = k;
    }
  }
  if (!first_down) {
    throw NumericError("no downward 0 dB crossing between " + range_text(r));
  }
  const auto& a = p[*first_down];
  const auto& b = p[*first_down + 1];
  const double t = a.mag_db / (a.mag_db - b.mag_db);
  const double la = std::log10(a.freq_hz);
  const double lb = std::log10(b.freq_hz);
  UnityCrossing c;
  c.freq_hz = std::pow(10.0, la + t * (lb - la));
  c.phase_deg = a.phase_deg + t * (b.phase_deg - a.phase_deg);
  c.non_monotone = crossings > 1;
  return c;
}

double gbw(const FrequencyResponse& r) { return unity_crossing(r).freq_hz; }

double phase_margin(const FrequencyResponse& r) { return 180.0 + unity_crossing(r).phase_deg; }

std::optional<double> f_3db(const FrequencyResponse& r) {
  const auto& p = r.points;
  if (p.empty()) return std::nullopt;
  const double level = p.front().mag_db - 20.0 * std::log10(std::sqrt(2.0));
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    if (p[k].mag_db >= level && p[k + 1].mag_db < level) {
      const double t = (p[k].mag_db - level) / (p[k].mag_db - p[k + 1].mag_db);
      const double la = std::log10(p[k].freq_hz);
      const double lb = std::log10(p[k + 1].freq_hz);
      return std::pow(10.0, la + t * (lb - la));
    }
  }
  return std::nullopt;
}

StabilityReport analyze(const FrequencyResponse& r) {
  StabilityReport s;
  if (r.points.empty()) throw InputError("empty response");
  s.dc_gain_db = r.points.front().mag_db;
  s.f3db_hz = f_3db(r);
  try {
    const auto c = unity_crossing(r);
    s.gbw_hz = c.freq_hz;
    s.pm_deg = 180.0 + c.phase_deg;
    s.non_monotone = c.non_monotone;
  } catch (const NumericError&) {
    // no crossing: gbw and pm stay undefined
  }
  return s;
}

void write_csv(std::ostream& os, const FrequencyResponse& r) {
  os << "freq_hz,mag_db,phase_deg\n";
  for (const auto& p : r.points) {
    os << io::format_decimal(p.freq_hz) << ',' << io::format_decimal(p.mag_db) << ','
       << io::format_decimal(p.phase_deg) << '\n';
  }
}

}  // namespace pcf::response
