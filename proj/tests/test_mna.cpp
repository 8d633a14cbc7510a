#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "pcf/amp/builders.hpp"
#include "pcf/amp/design.hpp"
#include "pcf/error.hpp"
#include "pcf/mna/lu.hpp"
#include "pcf/mna/solver.hpp"

using namespace pcf;
using namespace pcf::mna;
using cplx = std::complex<double>;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

Circuit rc_lowpass(double r, double c) {
  Circuit ckt;
  auto in = ckt.add_node("in");
  auto out = ckt.add_node("out");
  ckt.add_voltage_source("V1", in, kGround, 1.0);
  ckt.add_resistor("R1", in, out, r);
  ckt.add_capacitor("C1", out, kGround, c);
  return ckt;
}

// Polynomial in s, lowest order first.
using Poly = std::vector<double>;

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly add(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

// A(s) of the ABCD chain [series R][shunt sC]... of an unloaded ladder.
// Its roots are the poles of Vout/Vin.
Poly ladder_denominator(const std::vector<double>& r, const std::vector<double>& c) {
  Poly A{1.0}, B{0.0}, C{0.0}, D{1.0};
  for (std::size_t k = 0; k < r.size(); ++k) {
    // times [[1, R], [0, 1]]
    Poly nB = add(mul(A, {r[k]}), B);
    Poly nD = add(mul(C, {r[k]}), D);
    B = nB;
    D = nD;
    // times [[1, 0], [sC, 1]]
    Poly nA = add(A, mul(B, {0.0, c[k]}));
    Poly nC = add(C, mul(D, {0.0, c[k]}));
    A = nA;
    C = nC;
  }
  return A;
}

// Ladder poles are real, negative and simple: bracket sign changes of A(-x)
// on a fine log grid and bisect each bracket.
std::vector<cplx> ladder_roots(const Poly& p) {
  auto eval = [&](long double x) {
    long double v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * -x + static_cast<long double>(p[i]);
    return v;
  };
  std::vector<cplx> r;
  const int steps = 12000;
  long double lo = 1e-4L, flo = eval(lo);
  for (int k = 1; k <= steps; ++k) {
    long double hi = std::pow(10.0L, -4.0L + 24.0L * k / steps), fhi = eval(hi);
    if ((flo < 0) != (fhi < 0)) {
      long double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && b - a > 1e-17L * b; ++it) {
        const long double m = 0.5L * (a + b), fm = eval(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      r.emplace_back(-static_cast<double>(0.5L * (a + b)), 0.0);
    }
    lo = hi;
    flo = fhi;
  }
  return r;
}

}  // namespace

TEST_CASE("circuit bookkeeping") {
  Circuit c;
  CHECK(c.node_count() == 1);
  CHECK(c.add_node("0") == kGround);
  auto a = c.add_node("a");
  CHECK(a == 1);
  CHECK(c.add_node("a") == a);
  CHECK_THROWS_AS(c.node("nope"), InputError);
  CHECK_THROWS_AS(c.add_resistor("R1", a, kGround, 0.0), InputError);
  CHECK_THROWS_AS(c.add_capacitor("C1", a, kGround, -1e-12), InputError);
  CHECK_THROWS_AS(c.add_resistor("R1", a, 7, 1.0), InputError);
  c.add_vccs("G1", a, kGround, a, kGround, -1e-3);  // negative gm is legal
  CHECK_THROWS_AS(c.add_resistor("g1", a, kGround, 1.0), InputError);
  CHECK(c.find_element("g1") != nullptr);
}

TEST_CASE("resistive divider") {
  Circuit c;
  auto in = c.add_node("in");
  auto mid = c.add_node("mid");
  c.add_voltage_source("V1", in, kGround, 1.0);
  c.add_resistor("R1", in, mid, 1e3);
  c.add_resistor("R2", mid, kGround, 1e3);
  AcSolver s(c);
  auto sol = s.solve(0.0);
  CHECK(sol.voltage(mid).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sol.residual <= 1e-9);
  CHECK(zeros_numeric(c, "V1", mid, kGround).empty());
}

TEST_CASE("capacitor branch current") {
  Circuit c;
  auto in = c.add_node("in");
  c.add_voltage_source("V1", in, kGround, 1.0);
  c.add_capacitor("C1", in, kGround, 1.0);
  AcSolver s(c);
  auto sol = s.solve(1.0);
  CHECK(std::abs(sol.x(1)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("current source orientation") {
  // 1 A leaves pos through the source into neg: V(neg) = +R
  Circuit c;
  auto a = c.add_node("a");
  c.add_current_source("I1", kGround, a, 1.0);
  c.add_resistor("R1", a, kGround, 2.0);
  AcSolver s(c);
  CHECK(s.solve(0.0).voltage(a).real() == doctest::Approx(2.0));
}

TEST_CASE("rc low-pass") {
  AcSolver s(rc_lowpass(1e3, 1e-6));
  auto out = s.circuit().node("out");
  auto h = s.transfer("V1", out, kGround, 1000.0);
  CHECK(std::abs(h) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::arg(h) * 180.0 / std::numbers::pi == doctest::Approx(-45.0).epsilon(1e-12));
  CHECK(std::abs(s.transfer("V1", out, kGround, 1e-3)) == doctest::Approx(1.0).epsilon(1e-9));

  auto p = poles_numeric(s.circuit());
  REQUIRE(p.size() == 1);
  CHECK(rel(p[0], -1000.0) < 1e-12);
}

TEST_CASE("voltage follower is identity") {
  Circuit c;
  auto out = c.add_node("out");
  c.add_voltage_source("V1", out, kGround, 1.0);
  c.add_resistor("RL", out, kGround, 1e3);
  AcSolver s(c);
  for (double w : {0.0, 1.0, 1e6, 1e12}) CHECK(s.transfer("V1", out, kGround, w) == cplx(1.0, 0.0));
}

TEST_CASE("two decoupled rc sections") {
  Circuit c;
  auto a = c.add_node("a");
  auto b = c.add_node("b");
  c.add_resistor("R1", a, kGround, 1e3);
  c.add_capacitor("C1", a, kGround, 1e-6);
  c.add_resistor("R2", b, kGround, 1e3);
  c.add_capacitor("C2", b, kGround, 1e-9);
  auto p = poles_numeric(c);
  REQUIRE(p.size() == 2);
  CHECK(rel(p[0], -1e3) < 1e-12);
  CHECK(rel(p[1], -1e6) < 1e-12);
}

TEST_CASE("rc high-pass zero at the origin") {
  Circuit c;
  auto in = c.add_node("in");
  auto out = c.add_node("out");
  c.add_voltage_source("V1", in, kGround, 1.0);
  c.add_capacitor("C1", in, out, 1e-6);
  c.add_resistor("R1", out, kGround, 1e3);
  auto z = zeros_numeric(c, "V1", out, kGround);
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0]) < 1e-9);
}

TEST_CASE("floating subgraph is reported") {
  Circuit c;
  auto in = c.add_node("in");
  auto f1 = c.add_node("f1");
  auto f2 = c.add_node("f2");
  c.add_voltage_source("V1", in, kGround, 1.0);
  c.add_resistor("R1", in, kGround, 1e3);
  c.add_resistor("R2", f1, f2, 1e3);
  AcSolver s(c);
  try {
    (void)s.solve(1e3);
    FAIL("expected singular matrix");
  } catch (const SingularMatrixError& e) {
    CHECK(e.floating_nodes() == std::vector<std::string>{"f1", "f2"});
    CHECK(std::string(e.what()).find("omega=1000") != std::string::npos);
  }
  std::vector<double> ws{1.0, 2.0};
  CHECK_THROWS_AS((void)s.transfer("V1", in, kGround, ws), SingularMatrixError);
}

TEST_CASE("lu pivot ties go to the lowest row") {
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, 2.0, -1.0, 3.0;
  ComplexLu lu(a);
  Eigen::VectorXcd b(2);
  b << 3.0, 2.0;
  auto x = lu.solve(b);
  CHECK(std::abs(x(0) - 1.0) < 1e-15);
  CHECK(std::abs(x(1) - 1.0) < 1e-15);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
  CHECK(ComplexLu(z).singular());
}

TEST_CASE("half-circuit oracle network") {
  auto d = amp::reference_design();
  auto h = amp::build_half_circuit(d, amp::HalfCircuitMode::Dm);
  AcSolver s(h.circuit);
  CHECK(s.system().size() == 4);

  const double a0 = std::abs(s.transfer(h.source, h.out_pos, h.out_neg, 0.0));
  CHECK(20 * std::log10(a0) == doctest::Approx(82.98).epsilon(0.01 / 82.98));

  // just past the dominant pole the gain is about 3 dB down
  auto hp = s.transfer(h.source, h.out_pos, h.out_neg, 0.139e6);
  CHECK(std::abs(hp) / a0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));

  auto p = poles_numeric(h.circuit);
  REQUIRE(p.size() == 2);
  CHECK(std::abs(p[0].real() / -0.130e6 - 1.0) < 0.02);
  CHECK(std::abs(p[1].real() / -83.855e6 - 1.0) < 0.02);

  auto z = zeros_numeric(h.circuit, h.source, h.out_pos, h.out_neg);
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0].real() / -277.72e6 - 1.0) < 0.02);
}

TEST_CASE("rc ladder poles match the expanded characteristic polynomial") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lr(2.0, 5.0), lc(-12.0, -6.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<double> r, cap;
    Circuit ckt;
    NodeId prev = ckt.add_node("in");
    ckt.add_voltage_source("V1", prev, kGround, 1.0);
    for (int k = 0; k < n; ++k) {
      r.push_back(std::pow(10.0, lr(rng)));
      cap.push_back(std::pow(10.0, lc(rng)));
      NodeId nk = ckt.add_node("n" + std::to_string(k));
      ckt.add_resistor("R" + std::to_string(k), prev, nk, r.back());
      ckt.add_capacitor("C" + std::to_string(k), nk, kGround, cap.back());
      prev = nk;
    }
    auto expected = ladder_roots(ladder_denominator(r, cap));
    auto got = poles_numeric(ckt);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(rel(got[i], expected[i]) < 1e-8);
  }
}

TEST_CASE("rational reconstruction from poles and zeros") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(2.0, 5.0), lc(-12.0, -6.0), lg(-5.0, -2.0);
  for (int trial = 0; trial < 100; ++trial) {
    // in -R1- a -R2- b, caps on a and b, Cf bridging a to b, VCCS from a into b
    Circuit c;
    auto in = c.add_node("in");
    auto a = c.add_node("a");
    auto b = c.add_node("b");
    c.add_voltage_source("V1", in, kGround, 1.0);
    c.add_resistor("R1", in, a, std::pow(10.0, lr(rng)));
    c.add_capacitor("C1", a, kGround, std::pow(10.0, lc(rng)));
    c.add_resistor("R2", a, b, std::pow(10.0, lr(rng)));
    c.add_capacitor("C2", b, kGround, std::pow(10.0, lc(rng)));
    c.add_resistor("R3", b, kGround, std::pow(10.0, lr(rng)));
    c.add_capacitor("CF", in, b, std::pow(10.0, lc(rng)));
    c.add_vccs("G1", kGround, b, a, kGround, std::pow(10.0, lg(rng)));

    AcSolver s(c);
    auto pz = pole_zero(c, "V1", b, kGround);
    REQUIRE(pz.poles.size() <= 3);
    auto shape = [&](cplx sv) {
      cplx v(1.0);
      for (auto z : pz.zeros) v *= (sv - z);
      for (auto p : pz.poles) v /= (sv - p);
      return v;
    };
    const double w0 = 1.0;
    const cplx k = s.transfer("V1", b, kGround, w0) / shape(cplx(0.0, w0));
    for (double w : {1e2, 1e4, 1e6, 1e8, 1e10}) {
      const cplx h = s.transfer("V1", b, kGround, w);
      CHECK(rel(k * shape(cplx(0.0, w)), h) < 1e-6);
    }
  }
}

TEST_CASE("solves are deterministic and batch matches serial") {
  auto h = amp::build_half_circuit(amp::reference_design(), amp::HalfCircuitMode::Dm);
  AcSolver s(h.circuit);
  std::vector<double> ws;
  for (int i = 0; i < 257; ++i) ws.push_back(2 * std::numbers::pi * std::pow(10.0, 2 + i * 8.0 / 256));
  auto par = s.transfer(h.source, h.out_pos, h.out_neg, ws);
  auto ser = s.transfer_serial(h.source, h.out_pos, h.out_neg, ws);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(par[i] == ser[i]);
    auto sol1 = s.solve(ws[i], h.source);
    auto sol2 = s.solve(ws[i], h.source);
    CHECK((sol1.x.array() == sol2.x.array()).all());
    CHECK(sol1.residual <= 1e-9);
  }
}

TEST_CASE("coincident pole and zero are reported, not cancelled") {
  // the RC branch hangs off the driven node, so its mode never reaches the output
  Circuit c;
  auto in = c.add_node("in");
  auto a = c.add_node("a");
  c.add_voltage_source("V1", in, kGround, 1.0);
  c.add_resistor("R1", in, a, 1e3);
  c.add_capacitor("C1", a, kGround, 1e-9);
  auto pz = pole_zero(c, "V1", in, kGround);
  REQUIRE(pz.poles.size() == 1);
  REQUIRE(pz.zeros.size() == 1);
  REQUIRE(pz.coincident.size() == 1);
  CHECK(rel(pz.coincident[0].pole, -1e6) < 1e-12);
}
