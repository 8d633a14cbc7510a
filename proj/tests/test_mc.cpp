#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pcf/amp/design.hpp"
#include "pcf/amp/equations.hpp"
#include "pcf/mc/campaign.hpp"

using namespace pcf;
using namespace pcf::mc;

namespace {

std::string csv(const McResult& r, const McConfig& c) {
  std::ostringstream os;
  write_runs_csv(os, r.runs);
  write_summary(os, c, r.summary);
  return os.str();
}

// Analytic sigma of the offset formula under one delta per pair.
double offset_sigma(const amp::AmpDesign& d, const device::PelgromParams& p) {
  auto var = [&](const device::MosSmallSignal& m, double w) {
    const double sv = device::sigma_vt(m, p);
    const double sb = 0.5 * m.vov * device::sigma_beta(m, p);
    return w * w * (sv * sv + sb * sb);
  };
  const double k2 = 1.0 / (d.m1.gm * amp::r1_nominal(d));
  return std::sqrt(var(d.m1, 1) + var(d.m3a, d.m3a.gm / d.m1.gm) + var(d.m3b, d.m3b.gm / d.m1.gm) +
                   var(d.m5, k2) + var(d.m9a, k2 * d.m9a.gm / d.m5.gm) +
                   var(d.m9b, k2 * d.m9b.gm / d.m5.gm));
}

}  // namespace

TEST_CASE("offset referral") {
  auto d = amp::reference_design();
  std::vector<device::MismatchDelta> none;
  CHECK(input_referred_offset(none, d) == 0.0);
  std::vector<device::MismatchDelta> zeros{{"m1", 0, 0}, {"m3a", 0, 0}, {"m5", 0, 0}};
  CHECK(input_referred_offset(zeros, d) == 0.0);
  std::vector<device::MismatchDelta> m1{{"m1", 1e-3, 0}};
  CHECK(input_referred_offset(m1, d) == 1e-3);
  std::vector<device::MismatchDelta> m2{{"m2", 1e-3, 0}};
  CHECK(input_referred_offset(m2, d) == -1e-3);
  // a load threshold step refers through gm3/gm1
  std::vector<device::MismatchDelta> m3{{"m3a", 1e-3, 0}};
  CHECK(input_referred_offset(m3, d) == doctest::Approx(1e-3 * d.m3a.gm / d.m1.gm));
  // a current-factor step acts like -(Vov/2) dbeta of threshold
  std::vector<device::MismatchDelta> b1{{"m1", 0, 0.01}};
  CHECK(input_referred_offset(b1, d) == doctest::Approx(-0.5 * d.m1.vov * 0.01));
}

TEST_CASE("campaign determinism") {
  auto c = make_config(amp::reference_design(), 30, 1);
  auto a = run_campaign(c);
  auto b = run_campaign(c);
  auto s = run_campaign_serial(c);
  CHECK(csv(a, c) == csv(b, c));
  CHECK(csv(a, c) == csv(s, c));
  REQUIRE(a.runs.size() == 30);
  for (int i = 0; i < 30; ++i) CHECK(a.runs[static_cast<std::size_t>(i)].index == i);

  c.seed = 2;
  CHECK(csv(run_campaign(c), c) != csv(a, c));

  std::istringstream is(csv(a, c));
  std::string header;
  std::getline(is, header);
  CHECK(header == "run,r1_ohm,r2_ohm,av_db,gbw_hz,pm_deg,offset_v,latched");
}

TEST_CASE("zero mismatch reproduces the nominal design") {
  auto c = make_config(amp::reference_design(), 20, 5);
  c.pelgrom = {0, 0, 0, 0};
  auto r = run_campaign(c);
  for (const auto& run : r.runs) {
    CHECK_FALSE(run.latched);
    CHECK(run.offset_v == 0.0);
    CHECK(std::abs(run.av_db - r.summary.av_nominal_db) < 1e-9);
    CHECK(std::abs(run.gbw_hz / r.summary.gbw_nominal_hz - 1) < 1e-9);
  }
  CHECK(r.summary.av_spread_db == 0.0);
  CHECK(r.summary.gbw_hz.stddev == 0.0);
}

TEST_CASE("latch predicate is the resistance sign") {
  auto c = make_config(amp::reference_design(), 400, 3);
  c.pelgrom = c.pelgrom.scaled(6.0);
  auto r = run_campaign(c);
  int latched = 0;
  for (const auto& run : r.runs) {
    CHECK(run.latched == (run.r1 <= 0 || run.r2 <= 0));
    if (run.latched) {
      ++latched;
      CHECK(std::isnan(run.av_db));
      CHECK(std::isnan(run.gbw_hz));
    } else {
      CHECK(std::isfinite(run.av_db));
    }
  }
  CHECK(latched > 0);
  CHECK(r.summary.latch_count == latched);
  CHECK(r.summary.av_db.count == 400 - latched);
}

TEST_CASE("summary statistics") {
  auto c = make_config(amp::reference_design(), 1, 9);
  auto one = run_campaign(c);
  CHECK(one.summary.av_db.min == one.summary.av_db.max);
  CHECK(one.summary.av_db.mean == one.summary.av_db.min);
  CHECK(one.summary.av_db.stddev == 0.0);

  c.runs = 200;
  auto many = run_campaign(c);
  for (const Stats* s : {&many.summary.r1, &many.summary.r2, &many.summary.av_db,
                         &many.summary.gbw_hz, &many.summary.pm_deg, &many.summary.offset_v}) {
    CHECK(s->min <= s->mean);
    CHECK(s->mean <= s->max);
  }

  c.runs = 0;
  CHECK_THROWS(run_campaign(c));
}

TEST_CASE("offset sigma and scaling") {
  auto d = amp::reference_design();
  auto c = make_config(d, 10000, 1);
  auto base = run_campaign(c);
  const double sigma = base.summary.offset_v.stddev;
  CHECK(std::abs(sigma / offset_sigma(d, c.pelgrom) - 1) < 0.03);

  c.pelgrom = c.pelgrom.scaled(2.0);
  auto doubled = run_campaign(c);
  CHECK(std::abs(doubled.summary.offset_v.stddev / sigma / 2 - 1) < 0.05);
}
