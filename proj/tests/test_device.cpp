#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pcf/amp/design.hpp"
#include "pcf/device/mismatch.hpp"
#include "pcf/device/mos.hpp"
#include "pcf/error.hpp"

using namespace pcf;
using namespace pcf::device;

TEST_CASE("square law") {
  auto r = square_law_id(2e-3, 0.7, 0.5);
  CHECK(r.id == doctest::Approx(40e-6).epsilon(1e-12));
  CHECK_FALSE(r.cutoff);
  r = square_law_id(123.0, 0.5, 0.5);
  CHECK(r.id == 0.0);
  CHECK(r.cutoff);

  // gm = 1 mS at 0.2 V: I = 100 uA, beta = 5 mA/V^2
  auto m = mos_from_vov("m", Polarity::Nmos, 1e-3, 0.0, 1e5, 10, 0.5, 0.2);
  CHECK(m.id == doctest::Approx(100e-6).epsilon(1e-14));
  CHECK(m.beta() == doctest::Approx(5e-3).epsilon(1e-14));
  CHECK(std::sqrt(2 * m.beta() * m.id) == doctest::Approx(m.gm).epsilon(1e-14));
  CHECK(square_law_id(m.beta(), 0.7, 0.5).id == doctest::Approx(m.id).epsilon(1e-14));
}

TEST_CASE("gm identities agree for constructed records") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lg(-6.0, -2.0), lv(-2.0, 0.0), li(-7.0, -3.0);
  for (int i = 0; i < 1000; ++i) {
    const double gm = std::pow(10.0, lg(rng));
    auto a = mos_from_vov("a", Polarity::Pmos, gm, 0.0, 1e4, 1, 1, std::pow(10.0, lv(rng)));
    auto b = mos_from_id("b", Polarity::Nmos, gm, 0.0, 1e4, 1, 1, std::pow(10.0, li(rng)));
    for (const auto& m : {a, b}) {
      CHECK(std::abs(2 * m.id / m.vov / m.gm - 1) < 1e-12);
      CHECK(std::abs(std::sqrt(2 * m.beta() * m.id) / m.gm - 1) < 1e-12);
    }
  }
}

TEST_CASE("record validation") {
  auto m = mos_from_vov("m", Polarity::Nmos, 1e-3, 0.0, 1e5, 10, 0.5, 0.2);
  CHECK_NOTHROW(m.validate());
  auto bad = m;
  bad.ro = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = m;
  bad.gm = -1e-3;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = m;
  bad.w_um = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = m;
  bad.cgd = -1e-15;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("pelgrom sigma") {
  CHECK(pelgrom_sigma(6.6, 200, 0.18) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(pelgrom_sigma(1.04, 10, 0.5) == doctest::Approx(0.4651).epsilon(1e-3));
  CHECK(pelgrom_sigma(6.0, 40, 1) == doctest::Approx(pelgrom_sigma(6.0, 10, 1) / 2).epsilon(1e-14));
  CHECK_THROWS_AS(pelgrom_sigma(6.0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(pelgrom_sigma(6.0, 1.0, -1.0), InputError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 100.0), uk(0.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    const double w = u(rng), l = u(rng), k = uk(rng), a = u(rng);
    CHECK(pelgrom_sigma(a, k * w, k * l) == doctest::Approx(pelgrom_sigma(a, w, l) / k).epsilon(1e-13));
  }

  auto d = amp::reference_design();
  PelgromParams p;
  CHECK(sigma_vt(d.m1, p) == doctest::Approx(1.1e-3).epsilon(1e-12));
  CHECK(sigma_beta(d.m3a, p) == doctest::Approx(1.04e-2 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("sampling") {
  auto d = amp::reference_design();
  std::vector<MosSmallSignal> devs{d.m1, d.m3a, d.m5, d.m9a};
  PelgromParams p;
  auto a = sample_mismatch(42, devs, p);
  auto b = sample_mismatch(42, devs, p);
  REQUIRE(a.size() == devs.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].device == devs[i].name);
    CHECK(a[i].dvt == b[i].dvt);
    CHECK(a[i].dbeta_rel == b[i].dbeta_rel);
  }
  auto c = sample_mismatch(42, devs, p, 1);
  CHECK(c[0].dvt != a[0].dvt);

  auto zero = sample_mismatch(42, devs, PelgromParams{0, 0, 0, 0});
  for (const auto& z : zero) {
    CHECK(z.dvt == 0.0);
    CHECK(z.dbeta_rel == 0.0);
  }

  MismatchSampler s(9);
  const int n = 10000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = s.draw(d.m1, p).dvt;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt((sum2 - n * mean * mean) / (n - 1));
  CHECK(std::abs(sd / 1.1e-3 - 1) < 0.03);
}

TEST_CASE("apply mismatch") {
  auto d = amp::reference_design();
  const auto& m3 = d.m3a;

  auto same = apply_mismatch(m3, {"m3a", 0.0, 0.0});
  CHECK(same.saturated);
  CHECK(same.device.gm == m3.gm);
  CHECK(same.device.ro == m3.ro);
  CHECK(same.device.id == m3.id);
  CHECK(same.device.vov == m3.vov);

  auto beta = apply_mismatch(m3, {"m3a", 0.0, 0.01});
  CHECK(beta.device.id / m3.id == doctest::Approx(1.01).epsilon(1e-14));
  CHECK(beta.device.gm / m3.gm == doctest::Approx(1.01).epsilon(1e-14));
  CHECK(beta.device.gds() / m3.gds() == doctest::Approx(1.01).epsilon(1e-14));

  // brute force: beta' = beta, I' from the square law, gm' = sqrt(2 beta' I')
  auto vt = apply_mismatch(m3, {"m3a", 2e-3, 0.0});
  const double id2 = 0.5 * m3.beta() * 0.198 * 0.198;
  CHECK(vt.device.id == doctest::Approx(id2).epsilon(1e-12));
  CHECK(vt.device.gm == doctest::Approx(std::sqrt(2 * m3.beta() * id2)).epsilon(1e-12));
  CHECK(vt.device.gm == doctest::Approx(2 * id2 / 0.198).epsilon(1e-12));
  CHECK(vt.device.vov == doctest::Approx(0.198).epsilon(1e-12));
  CHECK(vt.device.cgs == m3.cgs);

  auto tiny = apply_mismatch(m3, {"m3a", 1e-12, 1e-12});
  CHECK(std::abs(tiny.device.gm / m3.gm - 1) < 1e-10);
  CHECK(std::abs(tiny.device.ro / m3.ro - 1) < 1e-10);

  auto off = apply_mismatch(m3, {"m3a", 0.2, 0.0});
  CHECK_FALSE(off.saturated);
}
