#include "pcf/mc/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "pcf/amp/equations.hpp"
#include "pcf/error.hpp"
#include "pcf/io/format.hpp"
#include "pcf/text.hpp"

namespace pcf::mc {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const device::MismatchDelta* find_delta(std::span<const device::MismatchDelta> deltas,
                                        std::string_view role) {
  for (const auto& d : deltas) {
    if (text::iequals(d.device, role)) return &d;
  }
  return nullptr;
}

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  s.count = static_cast<int>(v.size());
  if (v.empty()) {
    s.min = s.max = s.mean = s.stddev = kNan;
    return s;
  }
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  if (s.min == s.max) {
    s.mean = s.min;
    s.stddev = 0.0;
    return s;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(v.size()));
  // keep min <= mean <= max under rounding
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

double signed_ohms(const amp::StageResistance& r) { return r.marginal ? 0.0 : r.ohms; }

}  // namespace

void McConfig::validate() const {
  if (runs < 1) throw InputError("Monte Carlo needs at least one run");
  if (max_redraws < 0) throw InputError("max_redraws must be >= 0");
  design.validate();
  pelgrom.validate();
  (void)response::log_grid(grid);
}

McConfig make_config(const amp::AmpDesign& design, int runs, std::uint64_t seed) {
  McConfig c;
  c.runs = runs;
  c.seed = seed;
  c.design = design;
  c.pelgrom = design.pelgrom;
  return c;
}

const std::vector<std::string>& sampled_roles() {
  static const std::vector<std::string> roles = [] {
    std::vector<std::string> r;
    for (const auto& [ref, partner] : amp::matched_pairs()) r.emplace_back(ref);
    return r;
  }();
  return roles;
}

double input_referred_offset(std::span<const device::MismatchDelta> deltas,
                             const amp::AmpDesign& d) {
  auto e = [&](std::string_view role) {
    const auto* delta = find_delta(deltas, role);
    if (!delta) return 0.0;
    const auto& m = amp::device(d, role);
    return delta->dvt - 0.5 * m.vov * delta->dbeta_rel;
  };
  auto pair = [&](std::string_view a, std::string_view b) { return e(a) - e(b); };

  const double first = pair("m1", "m2") + d.m3a.gm / d.m1.gm * pair("m3a", "m4a") +
                       d.m3b.gm / d.m1.gm * pair("m3b", "m4b");
  const double second = pair("m5", "m6") + d.m9a.gm / d.m5.gm * pair("m9a", "m10a") +
                        d.m9b.gm / d.m5.gm * pair("m9b", "m10b");
  return first + second / (d.m1.gm * amp::r1_nominal(d));
}

McRun simulate_run(const McConfig& config, int index) {
  const auto& nominal = config.design;
  McRun run;
  run.index = index;

  device::MismatchSampler sampler(config.seed, static_cast<std::uint64_t>(index));
  amp::AmpDesign d = nominal;
  for (int attempt = 0;; ++attempt) {
    if (attempt > config.max_redraws) {
      throw NumericError("run " + std::to_string(index) + ": no in-saturation draw after " +
                         std::to_string(config.max_redraws) + " redraws");
    }
    d = nominal;
    run.deltas.clear();
    bool saturated = true;
    for (const auto& role : sampled_roles()) {
      const auto& dev = amp::device(nominal, role);
      run.deltas.push_back(sampler.draw(dev, config.pelgrom));
      auto m = device::apply_mismatch(dev, run.deltas.back());
      saturated = saturated && m.saturated;
      amp::device(d, role) = m.device;
    }
    if (saturated) break;
    ++run.redraws;
  }

  const auto r1 = amp::r1_mismatch(d.m1.gds(), d.m3a.gds(), d.m3b.gds(), d.m3a.gm, d.m3b.gm);
  const auto r2 = amp::r2_mismatch(d.m5.gds(), d.m7.gm, d.m7.gmb, d.m7.gds(), d.m9a.gds(),
                                   d.m9b.gds(), d.m9a.gm, d.m9b.gm);
  run.r1 = signed_ohms(r1);
  run.r2 = signed_ohms(r2);
  run.latched = run.r1 <= 0.0 || run.r2 <= 0.0;
  run.offset_v = input_referred_offset(run.deltas, nominal);

  run.av_db = run.gbw_hz = run.pm_deg = kNan;
  if (!run.latched) {
    run.av_db = amp::dc_gain_dm(d.m1.gm, r1, d.m5.gm, r2).db();
    auto p = amp::half_circuit_params(nominal);
    p.gm1 = d.m1.gm;
    p.gm5 = d.m5.gm;
    p.r1 = run.r1;
    p.r2 = run.r2;
    const auto rep = response::analyze(response::bode(amp::closed_form_tf(p), config.grid));
    if (rep.gbw_hz) {
      run.gbw_hz = *rep.gbw_hz;
      run.pm_deg = *rep.pm_deg;
    }
  }
  return run;
}

McSummary summarize(std::span<const McRun> runs, const amp::AmpDesign& nominal,
                    const response::Grid& grid) {
  if (runs.empty()) throw InputError("nothing to summarize");
  std::vector<const McRun*> ordered;
  for (const auto& r : runs) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const McRun* a, const McRun* b) { return a->index < b->index; });

  McSummary s;
  s.runs = static_cast<int>(runs.size());
  s.av_nominal_db = amp::dc_gain_dm(nominal).db();
  const auto nominal_report = response::analyze(response::bode(amp::closed_form_tf(nominal), grid));
  s.gbw_nominal_hz = nominal_report.gbw_hz.value_or(kNan);
  const double r1r2_nominal = amp::r1_nominal(nominal) * amp::r2_nominal(nominal);

  std::vector<double> r1, r2, av, gbw, pm, off;
  for (const McRun* r : ordered) {
    r1.push_back(r->r1);
    r2.push_back(r->r2);
    off.push_back(r->offset_v);
    s.offset_max_abs = std::max(s.offset_max_abs, std::abs(r->offset_v));
    s.redraws += r->redraws;
    if (r->latched) {
      ++s.latch_count;
      continue;
    }
    av.push_back(r->av_db);
    const double x = r->r1 * r->r2 / r1r2_nominal;
    s.r1r2_max_ratio = std::max({s.r1r2_max_ratio, x, 1.0 / x});
    if (!std::isnan(r->gbw_hz)) {
      gbw.push_back(r->gbw_hz);
      pm.push_back(r->pm_deg);
      s.gbw_max_rel_dev = std::max(s.gbw_max_rel_dev, std::abs(r->gbw_hz / s.gbw_nominal_hz - 1.0));
    }
  }
  s.r1 = stats_of(r1);
  s.r2 = stats_of(r2);
  s.av_db = stats_of(av);
  s.gbw_hz = stats_of(gbw);
  s.pm_deg = stats_of(pm);
  s.offset_v = stats_of(off);
  s.av_spread_db = av.empty() ? kNan : s.av_db.max - s.av_db.min;
  return s;
}

McResult run_campaign_serial(const McConfig& config) {
  config.validate();
  McResult out;
  out.runs.reserve(static_cast<std::size_t>(config.runs));
  for (int i = 0; i < config.runs; ++i) out.runs.push_back(simulate_run(config, i));
  out.summary = summarize(out.runs, config.design, config.grid);
  return out;
}

McResult run_campaign(const McConfig& config) {
  config.validate();
  McResult out;
  out.runs.resize(static_cast<std::size_t>(config.runs));
  std::vector<std::exception_ptr> errors(out.runs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < config.runs; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out.runs[k] = simulate_run(config, i);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  out.summary = summarize(out.runs, config.design, config.grid);
  return out;
}

void write_runs_csv(std::ostream& os, std::span<const McRun> runs) {
  os << "run,r1_ohm,r2_ohm,av_db,gbw_hz,pm_deg,offset_v,latched\n";
  for (const auto& r : runs) {
    os << r.index << ',' << io::format_decimal(r.r1) << ',' << io::format_decimal(r.r2) << ','
       << io::format_decimal(r.av_db) << ',' << io::format_decimal(r.gbw_hz) << ','
       << io::format_decimal(r.pm_deg) << ',' << io::format_decimal(r.offset_v) << ','
       << (r.latched ? 1 : 0) << '\n';
  }
}

void write_summary(std::ostream& os, const McConfig& config, const McSummary& s) {
  auto kv = [&](const char* key, double v) { os << key << '=' << io::format_decimal(v, 9) << '\n'; };
  auto stats = [&](const std::string& key, const Stats& st) {
    kv((key + "_min").c_str(), st.min);
    kv((key + "_max").c_str(), st.max);
    kv((key + "_mean").c_str(), st.mean);
    kv((key + "_std").c_str(), st.stddev);
  };
  os << "# mismatch: one delta per matched pair on the reference device, sigma = A/sqrt(WL)\n";
  os << "runs=" << s.runs << '\n';
  os << "seed=" << config.seed << '\n';
  os << "latched=" << s.latch_count << '\n';
  os << "redraws=" << s.redraws << '\n';
  kv("av_nominal_db", s.av_nominal_db);
  kv("gbw_nominal_hz", s.gbw_nominal_hz);
  stats("r1_ohm", s.r1);
  stats("r2_ohm", s.r2);
  stats("av_db", s.av_db);
  stats("gbw_hz", s.gbw_hz);
  stats("pm_deg", s.pm_deg);
  stats("offset_v", s.offset_v);
  kv("av_spread_db", s.av_spread_db);
  kv("gbw_max_rel_dev", s.gbw_max_rel_dev);
  kv("r1r2_max_ratio", s.r1r2_max_ratio);
  kv("offset_max_abs_v", s.offset_max_abs);
}

}  // namespace pcf::mc
