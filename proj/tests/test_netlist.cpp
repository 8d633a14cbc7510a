#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "pcf/amp/equations.hpp"
#include "pcf/error.hpp"
#include "pcf/io/deck.hpp"
#include "pcf/io/netlist.hpp"
#include "pcf/io/si.hpp"
#include "pcf/mna/solver.hpp"
#include "fuzz_inputs.hpp"

using namespace pcf;
using namespace pcf::io;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = PCF_DATA_DIR;

const ElementCard& element(const NetlistAst& ast, std::size_t i) {
  return std::get<ElementCard>(ast.cards.at(i));
}

ParseError parse_error(const std::string& text) {
  try {
    parse_netlist(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no error for: " << text);
  throw;
}

bool same_design(const amp::AmpDesign& a, const amp::AmpDesign& b) {
  for (const auto& r : amp::device_roles()) {
    const auto& x = a.*r.member;
    const auto& y = b.*r.member;
    if (x.name != y.name || x.polarity != y.polarity || x.gm != y.gm || x.gmb != y.gmb ||
        x.ro != y.ro || x.w_um != y.w_um || x.l_um != y.l_um || x.cgs != y.cgs ||
        x.cgd != y.cgd || x.cdb != y.cdb || x.id != y.id || x.vov != y.vov) {
      return false;
    }
  }
  return a.cc == b.cc && a.cl == b.cl && a.supply == b.supply && a.c1_override == b.c1_override &&
         a.c2_override == b.c2_override && a.pelgrom.avt_nmos == b.pelgrom.avt_nmos &&
         a.pelgrom.avt_pmos == b.pelgrom.avt_pmos && a.pelgrom.abeta_nmos == b.pelgrom.abeta_nmos &&
         a.pelgrom.abeta_pmos == b.pelgrom.abeta_pmos;
}

}  // namespace

TEST_CASE("SI suffixes") {
  CHECK(parse_si("10.95k") == 10950.0);
  CHECK(parse_si("0.75p") == 7.5e-13);
  CHECK(parse_si("5meg") == 5e6);
  CHECK(parse_si("5m") == 5e-3);
  CHECK(parse_si("5MEG") == 5e6);
  CHECK(parse_si("5M") == 5e-3);
  CHECK(parse_si("1f") == 1e-15);
  CHECK(parse_si("3n") == 3e-9);
  CHECK(parse_si("2u") == 2e-6);
  CHECK(parse_si("1g") == 1e9);
  CHECK(parse_si("+4") == 4.0);
  CHECK(parse_si("-4.5") == -4.5);
  CHECK(parse_si("1e3k") == 1e6);
  CHECK(parse_si("1.5E-3m") == 1.5e-6);
  CHECK(parse_si("4.56m") == 4.56e-3);
  CHECK(parse_si("228u") == 228e-6);

  for (const char* bad : {"", "k", "1x", "1 k", "1kk", "1mega", "++1", "+-1", "inf", "nan", "1e",
                          "1e999", "0x10", "1megx", "--1"}) {
    CHECK_MESSAGE(!parse_si(bad), bad);
  }
}

TEST_CASE("SI round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(1.0, 10.0);
  std::uniform_int_distribution<int> exp(-20, 14);
  for (int i = 0; i < 20000; ++i) {
    const double v = mant(rng) * std::pow(10.0, exp(rng)) * (i % 2 ? -1.0 : 1.0);
    const auto text = format_si(v);
    const auto back = parse_si(text);
    REQUIRE_MESSAGE(back, text);
    CHECK_MESSAGE(std::abs(*back - v) <= 1e-13 * std::abs(v), text);

    // shortest decimal text reads back bit-exact, with or without a suffix
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    CHECK(parse_si(std::string(buf, end)) == v);
  }
  CHECK(format_si(7.5e-13) == "750f");
  CHECK(format_si(10950) == "10.95k");
  CHECK(format_si(5e6) == "5meg");
  CHECK(format_si(0) == "0");
}

TEST_CASE("element and directive cards") {
  const auto ast = parse_netlist(
      "title line\n"
      "R1 1 0 10.95k\n"
      "* comment\n"
      "c1 2 0 0.75p\n"
      "\n"
      "G1 2 0 1 0 4.22m\n"
      "i1 0 1 ac 1\n"
      "V9 3 0 AC 2\n"
      "  Rx 3 2 5meg\n"
      ".ac dec 10 1 1g\n"
      ".PZ V9 2 0\n"
      ".end\n");
  CHECK(ast.title == "title line");
  REQUIRE(ast.cards.size() == 9);
  CHECK(element(ast, 0).kind == 'R');
  CHECK(element(ast, 0).nodes == std::vector<std::string>{"1", "0"});
  CHECK(element(ast, 0).value == 10950.0);
  CHECK(element(ast, 0).span.line == 2);
  CHECK(element(ast, 1).kind == 'C');
  CHECK(element(ast, 1).value == 7.5e-13);
  CHECK(element(ast, 2).nodes.size() == 4);
  CHECK(element(ast, 3).kind == 'I');
  CHECK(element(ast, 5).value == 5e6);
  CHECK(element(ast, 5).span.column == 3);
  const auto& ac = std::get<AcCard>(ast.cards[6]);
  CHECK(ac.points_per_decade == 10);
  CHECK(ac.f_stop == 1e9);
  CHECK(std::get<PzCard>(ast.cards[7]).source == "V9");
}

TEST_CASE("parse diagnostics") {
  auto e = parse_error("t\nR1 1 0 10k\nr1 2 0 1k\n.END\n");
  CHECK(e.span().line == 3);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  e = parse_error("t\nQ1 1 2 3\n.END\n");
  CHECK(e.span().line == 2);
  CHECK(e.span().column == 1);
  CHECK(e.token() == "Q1");

  e = parse_error("t\nR1 1 0 10x\n.END\n");
  CHECK(e.span().column == 8);
  CHECK(e.token() == "10x");

  CHECK(parse_error("t\nR1 1 0 1k\n").span().line >= 2);             // missing .END
  CHECK(parse_error("t\n.END\nR1 1 0 1k\n").span().line == 3);       // after .END
  CHECK(parse_error("t\n.END\n.END\n").span().line == 3);
  CHECK(parse_error("t\nR1 1 0\n.END\n").span().line == 2);           // too few
  CHECK(parse_error("t\nR1 1 0 1k 2\n.END\n").token() == "2");        // extra token
  CHECK(parse_error("t\nR1 1 0 -1k\n.END\n").span().line == 2);
  CHECK(parse_error("t\nC1 1 0 0\n.END\n").span().line == 2);
  CHECK(parse_error("t\nV1 1 0 DC 1\n.END\n").token() == "DC");
  CHECK(parse_error("t\nR 1 0 1\n.END\n").token() == "R");
  CHECK(parse_error("t\n.AC LIN 10 1 10\n.END\n").token() == "LIN");
  CHECK(parse_error("t\n.AC DEC 10 10 1\n.END\n").span().line == 2);
  CHECK(parse_error("t\n.AC DEC 10 1 10\n.AC DEC 10 1 10\n.END\n").span().line == 3);
  CHECK(parse_error("t\n.TRAN 1 2\n.END\n").token() == ".TRAN");
  CHECK(parse_error("").span().line == 1);
}

TEST_CASE("print then parse is the identity") {
  const auto text = read_file(kData + "/dm_half.sp");
  const auto ast = parse_netlist(text);
  const auto printed = print_netlist(ast);
  const auto again = parse_netlist(printed);
  CHECK(again == ast);
  CHECK(print_netlist(again) == printed);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-15, 9);
  for (int k = 0; k < 200; ++k) {
    std::string s = "random\n";
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const double v = std::pow(10.0, u(rng));
      const int a = static_cast<int>(rng() % 5), b = static_cast<int>(rng() % 5);
      switch (rng() % 5) {
        case 0: s += "R" + std::to_string(i) + " " + std::to_string(a) + " " + std::to_string(b); break;
        case 1: s += "C" + std::to_string(i) + " " + std::to_string(a) + " " + std::to_string(b); break;
        case 2: s += "G" + std::to_string(i) + " " + std::to_string(a) + " " + std::to_string(b) + " 1 0"; break;
        case 3: s += "I" + std::to_string(i) + " " + std::to_string(a) + " " + std::to_string(b) + " AC"; break;
        default: s += "V" + std::to_string(i) + " n" + std::to_string(a) + " m" + std::to_string(b) + " AC"; break;
      }
      s += " " + format_si(v, 17) + "\n";
    }
    s += ".END\n";
    const auto parsed = parse_netlist(s);
    CHECK(parse_netlist(print_netlist(parsed)) == parsed);
  }
}

TEST_CASE("elaboration") {
  SUBCASE("first-appearance node order") {
    const auto el = elaborate(parse_netlist("t\nR1 b a 1k\nR2 a 0 1k\nC1 c b 1p\n.END\n"));
    const auto& c = el.circuit;
    REQUIRE(c.node_count() == 4);
    CHECK(c.node_name(1) == "b");
    CHECK(c.node_name(2) == "a");
    CHECK(c.node_name(3) == "c");
    REQUIRE(el.warnings.size() == 1);
    CHECK(el.warnings[0].find("'c'") != std::string::npos);
  }
  SUBCASE("empty circuit") {
    CHECK_THROWS_AS(elaborate(parse_netlist("title only\n.END\n")), ParseError);
  }
  SUBCASE("no ground") {
    CHECK_THROWS_AS(elaborate(parse_netlist("t\nR1 1 2 1k\nR2 2 1 1k\n.END\n")), ParseError);
  }
  SUBCASE(".PZ references") {
    CHECK_THROWS_AS(elaborate(parse_netlist("t\nV1 1 0 AC 1\nR1 1 0 1k\n.PZ V2 1 0\n.END\n")), ParseError);
    CHECK_THROWS_AS(elaborate(parse_netlist("t\nV1 1 0 AC 1\nR1 1 0 1k\n.PZ R1 1 0\n.END\n")), ParseError);
    CHECK_THROWS_AS(elaborate(parse_netlist("t\nV1 1 0 AC 1\nR1 1 0 1k\n.PZ V1 7 0\n.END\n")), ParseError);
    CHECK_NOTHROW(elaborate(parse_netlist("t\nV1 1 0 AC 1\nR1 1 0 1k\n.PZ V1 1 0\n.END\n")));
  }
}

TEST_CASE("shipped half-circuit netlist reproduces the stage-gain product") {
  const auto el = elaborate(parse_netlist(read_file(kData + "/dm_half.sp")));
  CHECK(el.warnings.empty());
  REQUIRE(el.ac);
  REQUIRE(el.pz);
  const mna::AcSolver solver(el.circuit);
  const auto out_pos = *el.circuit.find_node(el.pz->node_pos);
  const auto out_neg = *el.circuit.find_node(el.pz->node_neg);
  const double h0 = std::abs(solver.transfer(el.pz->source, out_pos, out_neg, 1e-3));
  const auto d = amp::reference_design();
  const auto g = amp::dc_gain_dm(d);
  CHECK(h0 == doctest::Approx(g.total).epsilon(1e-10));
  CHECK(20 * std::log10(h0) == doctest::Approx(82.98).epsilon(1e-4));

  // the netlist carries R1, R2 at 12 digits
  const auto cf = amp::closed_form_tf(d);
  for (double f : {1e3, 1e5, 1e7, 1e9}) {
    const auto h = solver.transfer(el.pz->source, out_pos, out_neg, 2 * M_PI * f);
    CHECK(std::abs(h - cf.at_omega(2 * M_PI * f)) <= 1e-9 * std::abs(h));
  }
}

TEST_CASE("parser fuzz: every input yields an AST or a diagnostic") {
  const std::string seed_text = read_file(kData + "/dm_half.sp");
  std::mt19937_64 rng(12345);
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    const std::string input = fuzz_input(rng, seed_text, i);
    try {
      const auto ast = parse_netlist(input);
      ++parsed;
      try {
        elaborate(ast);
      } catch (const InputError&) {
      }
    } catch (const ParseError& e) {
      ++rejected;
      REQUIRE(e.span().line >= 1);
      REQUIRE(e.span().column >= 1);
    }
  }
  CHECK(parsed + rejected == 100000);
  CHECK(parsed > 0);
}

TEST_CASE("shipped deck is the reference design") {
  const auto d = load_deck(kData + "/default.deck");
  CHECK(same_design(d, amp::reference_design()));
}

TEST_CASE("deck diagnostics") {
  const auto base = read_file(kData + "/default.deck");
  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_deck(text);
    } catch (const InputError& e) {
      return e.what();
    }
    return {};
  };
  CHECK(error_of(base + "m1.gm = 1m S\n").find("duplicate") != std::string::npos);
  CHECK(error_of(base + "m1.gain = 1\n").find("unknown key") != std::string::npos);
  CHECK(error_of(base + "m99.gm = 1m S\n").find("unknown section") != std::string::npos);
  CHECK(error_of(base + "amp.vdd = 1 V\n").find("unknown key") != std::string::npos);
  CHECK(error_of("amp.cc = 1p V\n").find("wrong unit") != std::string::npos);
  CHECK(error_of("amp.cc = 1p\n").find("missing unit") != std::string::npos);
  CHECK(error_of("amp.cc 1p F\n").find("1:1") != std::string::npos);

  // line number of the offending key
  const auto dup = error_of(base + "\nm5.ro = 1k ohm\n");
  const auto lines = 1 + std::count(base.begin(), base.end(), '\n') + 1;
  CHECK(dup.rfind(std::to_string(lines) + ":", 0) == 0);

  // removing a role
  std::string no_mt2;
  std::istringstream in(base);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("mt2.", 0) != 0) no_mt2 += line + "\n";
  }
  CHECK(error_of(no_mt2).find("mt2") != std::string::npos);

  // like cycles and unknown targets
  std::string cyc = base;
  cyc.replace(cyc.find("m1.polarity"), 0, "m1.like = m2\n");
  CHECK(error_of(cyc).find("cyclic") != std::string::npos);
  CHECK(error_of(base + "\nm6.like = m77\n").find("duplicate") != std::string::npos);

  // a partner that differs from its reference fails design validation
  std::string skew = base;
  skew.replace(skew.find("m2.like = m1"), 12, "m2.like = m1\nm2.ro = 11k ohm");
  CHECK(error_of(skew).find("matched") != std::string::npos);
}
