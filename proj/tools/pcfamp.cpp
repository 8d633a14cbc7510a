// pcfamp: small-signal workbench for the two-stage PCF amplifier.
//
// exit codes: 0 ok, 1 usage, 2 bad input, 3 numeric failure

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "pcf/amp/builders.hpp"
#include "pcf/amp/design.hpp"
#include "pcf/error.hpp"
#include "pcf/io/deck.hpp"
#include "pcf/io/format.hpp"
#include "pcf/io/netlist.hpp"
#include "pcf/io/report.hpp"
#include "pcf/io/si.hpp"
#include "pcf/mc/campaign.hpp"
#include "pcf/mna/solver.hpp"
#include "pcf/response/bode.hpp"
#include "pcf/response/sweep.hpp"
#include "pcf/text.hpp"

using namespace pcf;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double si_arg(const std::string& text, const char* option) {
  auto v = io::parse_si(text);
  if (!v) throw UsageError(std::string(option) + ": not a number: '" + text + "'");
  return *v;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

// write-temp-then-rename, or stdout for an empty path or "-"
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot rename onto '" + path + "'");
  }
}

amp::AmpDesign deck_or_default(const std::string& path) {
  if (path.empty()) return amp::reference_design();
  return io::load_deck(path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::Elaborated load_netlist(const std::string& path) {
  io::Elaborated el;
  try {
    el = io::elaborate(io::parse_netlist(read_text(path)));
  } catch (const io::ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  for (const auto& w : el.warnings) std::cerr << path << ":" << w << " (warning)\n";
  return el;
}

mna::NodeId node_of(const mna::Circuit& c, const std::string& name) {
  auto id = c.find_node(name);
  if (!id) throw InputError("unknown node '" + name + "'");
  return *id;
}

struct Port {
  std::string source;
  mna::NodeId pos = mna::kGround;
  mna::NodeId neg = mna::kGround;
};

// --in/--out-nodes, falling back to the .PZ card
Port port_of(const io::Elaborated& el, std::string in, const std::string& out_nodes) {
  std::string pos, neg;
  if (!out_nodes.empty()) {
    const auto parts = text::split(out_nodes, ',');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
      throw UsageError("--out-nodes expects n+,n-");
    }
    pos = parts[0];
    neg = parts[1];
  } else if (el.pz) {
    pos = el.pz->node_pos;
    neg = el.pz->node_neg;
  }
  if (in.empty() && el.pz) in = el.pz->source;
  if (in.empty() || pos.empty()) throw UsageError("need --in and --out-nodes (or a .PZ card)");
  const auto* src = el.circuit.find_element(in);
  if (!src || (src->kind != mna::ElementKind::VoltageSource &&
               src->kind != mna::ElementKind::CurrentSource)) {
    throw InputError("'" + in + "' is not an independent source");
  }
  return {in, node_of(el.circuit, pos), node_of(el.circuit, neg)};
}

response::Grid grid_of(const std::string& fstart, const std::string& fstop, int ppd) {
  response::Grid g{si_arg(fstart, "--fstart"), si_arg(fstop, "--fstop"), ppd};
  if (!(g.f_start > 0.0) || !(g.f_stop > g.f_start) || ppd < 1) {
    throw UsageError("need 0 < fstart < fstop and ppd >= 1");
  }
  return g;
}

std::string optional_text(const std::optional<double>& v, int decimals) {
  return v ? io::format_fixed(*v, decimals) : "none";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pcfamp: small-signal workbench for a two-stage amplifier with positive "
               "capacitive feedback compensation"};
  app.require_subcommand(1);

  std::string deck, out, fstart = "1", fstop = "10g", netlist, in, out_nodes, cl_list, freq,
                         summary_path;
  int ppd = 100;
  int runs = 30;
  std::uint64_t seed = 1;
  bool use_closed = false, use_mna = false, with_margin = false;

  auto* report = app.add_subcommand("report", "closed-form report of a design deck");
  report->add_option("--deck", deck, "design deck (default: built-in reference deck)");
  report->add_option("--out", out, "output file (default stdout)");

  auto* bode = app.add_subcommand("bode", "open-loop differential response as CSV");
  bode->add_option("--deck", deck, "design deck (default: built-in reference deck)");
  auto* mna_flag = bode->add_flag("--mna", use_mna, "solve the half circuit by MNA (default)");
  bode->add_flag("--closed", use_closed, "evaluate the closed-form transfer function")
      ->excludes(mna_flag);
  bode->add_option("--fstart", fstart, "start frequency [Hz]")->capture_default_str();
  bode->add_option("--fstop", fstop, "stop frequency [Hz]")->capture_default_str();
  bode->add_option("--ppd", ppd, "points per decade")->capture_default_str();
  bode->add_option("--out", out, "CSV file (default stdout)");

  auto* pz = app.add_subcommand("pz", "numeric poles and zeros of a netlist");
  pz->add_option("--netlist", netlist, "netlist file")->required();
  pz->add_option("--in", in, "input source (default from .PZ)");
  pz->add_option("--out-nodes", out_nodes, "output nodes n+,n- (default from .PZ)");
  pz->add_option("--out", out, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep-cl", "load-capacitance sweep as CSV");
  sweep->add_option("--deck", deck, "design deck (default: built-in reference deck)");
  sweep->add_option("--cl", cl_list, "comma-separated loads, e.g. 5p,10p")->required();
  sweep->add_flag("--with-margin", with_margin, "append the stability-condition columns");
  sweep->add_option("--out", out, "CSV file (default stdout)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo mismatch campaign");
  mc->add_option("--deck", deck, "design deck (default: built-in reference deck)");
  mc->add_option("--runs", runs, "number of runs")->capture_default_str()->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "RNG seed")->capture_default_str();
  mc->add_option("--out", out, "per-run CSV file (default stdout)");
  mc->add_option("--summary", summary_path, "summary file (default stderr when --out is stdout)");

  auto* ac = app.add_subcommand("ac", "single-frequency solve of a netlist");
  ac->add_option("--netlist", netlist, "netlist file")->required();
  ac->add_option("--freq", freq, "frequency [Hz]")->required();
  ac->add_option("--in", in, "report the transfer from this source");
  ac->add_option("--out-nodes", out_nodes, "transfer output nodes n+,n-");
  ac->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ostringstream os;
    if (*report) {
      io::write_report(os, io::closed_form_report(deck_or_default(deck)));
      emit(out, os.str());
    } else if (*bode) {
      const auto d = deck_or_default(deck);
      d.validate();
      const auto grid = grid_of(fstart, fstop, ppd);
      response::FrequencyResponse r;
      if (use_closed) {
        r = response::bode(amp::closed_form_tf(d), grid);
      } else {
        const auto h = amp::build_half_circuit(d, amp::HalfCircuitMode::Dm);
        const mna::AcSolver solver(h.circuit);
        r = response::bode(solver, h.source, h.out_pos, h.out_neg, grid);
      }
      response::write_csv(os, r);
      emit(out, os.str());
      const auto a = response::analyze(r);
      std::cerr << "dc_gain_db=" << io::format_fixed(a.dc_gain_db, 2)
                << " gbw_mhz=" << optional_text(a.gbw_hz ? std::optional(*a.gbw_hz / 1e6) : std::nullopt, 2)
                << " pm_deg=" << optional_text(a.pm_deg, 1) << '\n';
    } else if (*pz) {
      const auto el = load_netlist(netlist);
      const auto port = port_of(el, in, out_nodes);
      const auto res = mna::pole_zero(el.circuit, port.source, port.pos, port.neg);
      os << "kind,re_rad_s,im_rad_s,freq_hz\n";
      for (const auto& [kind, list] : {std::pair{"pole", &res.poles}, std::pair{"zero", &res.zeros}}) {
        for (const auto& s : *list) {
          os << kind << ',' << shortest(s.real()) << ',' << shortest(s.imag()) << ','
             << shortest(std::abs(s) / (2 * M_PI)) << '\n';
        }
      }
      emit(out, os.str());
      for (const auto& c : res.coincident) {
        std::cerr << "note: pole " << shortest(c.pole.real()) << " cancels a zero\n";
      }
    } else if (*sweep) {
      const auto d = deck_or_default(deck);
      std::vector<double> loads;
      for (const auto& part : text::split(cl_list, ',')) loads.push_back(si_arg(part, "--cl"));
      const auto rows = response::cl_sweep(d, loads);
      response::write_sweep_csv(os, rows, with_margin);
      emit(out, os.str());
    } else if (*mc) {
      const auto config = mc::make_config(deck_or_default(deck), runs, seed);
      const auto result = mc::run_campaign(config);
      mc::write_runs_csv(os, result.runs);
      std::ostringstream summary;
      mc::write_summary(summary, config, result.summary);
      emit(out, os.str());
      if (!summary_path.empty()) {
        emit(summary_path, summary.str());
      } else if (out.empty() || out == "-") {
        std::cerr << summary.str();
      } else {
        std::cout << summary.str();
      }
    } else if (*ac) {
      const auto el = load_netlist(netlist);
      const double f = si_arg(freq, "--freq");
      if (!(f >= 0.0)) throw UsageError("--freq must be >= 0");
      const double w = 2 * M_PI * f;
      const mna::AcSolver solver(el.circuit);
      const auto sol = solver.solve(w);
      os << "node,re,im,mag_db,phase_deg\n";
      for (mna::NodeId n = 1; n < el.circuit.node_count(); ++n) {
        const auto v = sol.voltage(n);
        os << el.circuit.node_name(n) << ',' << shortest(v.real()) << ',' << shortest(v.imag())
           << ',' << io::format_fixed(20 * std::log10(std::abs(v)), 6) << ','
           << io::format_fixed(std::arg(v) * 180 / M_PI, 6) << '\n';
      }
      if (!in.empty() || !out_nodes.empty()) {
        const auto port = port_of(el, in, out_nodes);
        const auto h = solver.transfer(port.source, port.pos, port.neg, w);
        os << "H," << shortest(h.real()) << ',' << shortest(h.imag()) << ','
           << io::format_fixed(20 * std::log10(std::abs(h)), 6) << ','
           << io::format_fixed(std::arg(h) * 180 / M_PI, 6) << '\n';
      }
      emit(out, os.str());
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
