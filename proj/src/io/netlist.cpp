#include "pcf/io/netlist.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "pcf/io/si.hpp"
#include "pcf/text.hpp"

namespace pcf::io {
namespace {

struct Token {
  std::string_view text;
  int column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (i < line.size()) {
    while (i < line.size() && space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !space(line[i])) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// Printable form of an arbitrary token for diagnostics.
std::string printable(std::string_view s) {
  std::string out;
  for (char c : s.substr(0, 40)) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isprint(u)) {
      out += c;
    } else {
      static const char* hex = "0123456789abcdef";
      out += "\\x";
      out += hex[u >> 4];
      out += hex[u & 15];
    }
  }
  if (s.size() > 40) out += "...";
  return out;
}

std::string located(Span span, const std::string& message, const std::string& token) {
  std::string m = std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
  if (!token.empty()) m += " '" + token + "'";
  return m;
}

class LineParser {
 public:
  LineParser(int line, std::vector<Token> tokens) : line_(line), tokens_(std::move(tokens)) {}

  [[noreturn]] void fail(std::size_t index, const std::string& message) const {
    if (index < tokens_.size()) {
      throw ParseError({line_, tokens_[index].column}, message, printable(tokens_[index].text));
    }
    const int col = tokens_.empty() ? 1
                                    : tokens_.back().column +
                                          static_cast<int>(tokens_.back().text.size());
    throw ParseError({line_, col}, message);
  }

  void expect_count(std::size_t n, const std::string& usage) const {
    if (tokens_.size() < n) fail(tokens_.size(), "too few fields, expected " + usage);
    if (tokens_.size() > n) fail(n, "unexpected extra field");
  }

  std::string_view text(std::size_t i) const { return tokens_[i].text; }
  Span span(std::size_t i) const { return {line_, tokens_[i].column}; }

  double number(std::size_t i, const char* what) const {
    auto v = parse_si(tokens_[i].text);
    if (!v) fail(i, std::string("malformed ") + what);
    return *v;
  }

  int integer(std::size_t i, const char* what) const {
    int v = 0;
    const auto t = tokens_[i].text;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) fail(i, std::string("malformed ") + what);
    return v;
  }

  bool keyword(std::size_t i, std::string_view kw) const { return text::iequals(tokens_[i].text, kw); }

 private:
  int line_;
  std::vector<Token> tokens_;
};

ElementCard parse_element(const LineParser& p, char kind, std::size_t ntokens) {
  ElementCard card;
  card.kind = kind;
  card.name = std::string(p.text(0));
  card.span = p.span(0);
  if (card.name.size() < 2) p.fail(0, "element name needs an id after the leader");
  switch (kind) {
    case 'R':
    case 'C': {
      p.expect_count(4, std::string(1, kind) + "<id> n1 n2 value");
      card.nodes = {std::string(p.text(1)), std::string(p.text(2))};
      card.value = p.number(3, "value");
      if (!(card.value > 0.0)) p.fail(3, kind == 'R' ? "resistance must be > 0" : "capacitance must be > 0");
      break;
    }
    case 'G': {
      p.expect_count(6, "G<id> n+ n- nc+ nc- gm");
      for (std::size_t i = 1; i <= 4; ++i) card.nodes.emplace_back(p.text(i));
      card.value = p.number(5, "transconductance");
      break;
    }
    default: {  // I, V
      p.expect_count(5, std::string(1, kind) + "<id> n+ n- AC mag");
      card.nodes = {std::string(p.text(1)), std::string(p.text(2))};
      if (!p.keyword(3, "ac")) p.fail(3, "expected AC");
      card.value = p.number(4, "AC magnitude");
      if (kind == 'V' && card.nodes[0] == card.nodes[1]) p.fail(1, "voltage source shorted onto one node");
      break;
    }
  }
  (void)ntokens;
  return card;
}

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

}  // namespace

ParseError::ParseError(Span span, const std::string& message, std::string token)
    : InputError(located(span, message, token)), span_(span), token_(std::move(token)) {}

bool operator==(const NetlistAst& a, const NetlistAst& b) {
  if (a.title != b.title || a.cards.size() != b.cards.size()) return false;
  for (std::size_t i = 0; i < a.cards.size(); ++i) {
    const auto& x = a.cards[i];
    const auto& y = b.cards[i];
    if (x.index() != y.index()) return false;
    const bool same = std::visit(
        overloaded{
            [&](const ElementCard& e) {
              const auto& f = std::get<ElementCard>(y);
              return e.kind == f.kind && e.name == f.name && e.nodes == f.nodes && e.value == f.value;
            },
            [&](const AcCard& e) {
              const auto& f = std::get<AcCard>(y);
              return e.points_per_decade == f.points_per_decade && e.f_start == f.f_start &&
                     e.f_stop == f.f_stop;
            },
            [&](const PzCard& e) {
              const auto& f = std::get<PzCard>(y);
              return e.source == f.source && e.node_pos == f.node_pos && e.node_neg == f.node_neg;
            },
            [&](const EndCard&) { return true; },
        },
        x);
    if (!same) return false;
  }
  return true;
}

NetlistAst parse_netlist(std::string_view input) {
  NetlistAst ast;
  std::set<std::string> names;
  bool have_ac = false, have_pz = false;
  std::optional<Span> end;
  int line_no = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= input.size()) {
    const auto nl = input.find('\n', pos);
    std::string_view line = input.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (first) {
      first = false;
      ast.title = std::string(text::trim(line));
      continue;
    }
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().text.front() == '*') continue;
    LineParser p(line_no, tokens);
    if (end) p.fail(0, "card after .END");

    const char lead = static_cast<char>(std::toupper(static_cast<unsigned char>(tokens[0].text.front())));
    if (lead == '.') {
      if (p.keyword(0, ".end")) {
        p.expect_count(1, ".END");
        end = p.span(0);
        ast.cards.emplace_back(EndCard{*end});
      } else if (p.keyword(0, ".ac")) {
        if (have_ac) p.fail(0, "duplicate .AC card");
        p.expect_count(5, ".AC DEC ppd fstart fstop");
        if (!p.keyword(1, "dec")) p.fail(1, "only DEC sweeps are supported");
        AcCard ac;
        ac.span = p.span(0);
        ac.points_per_decade = p.integer(2, "points per decade");
        if (ac.points_per_decade < 1) p.fail(2, "points per decade must be >= 1");
        ac.f_start = p.number(3, "start frequency");
        ac.f_stop = p.number(4, "stop frequency");
        if (!(ac.f_start > 0.0)) p.fail(3, "start frequency must be > 0");
        if (!(ac.f_stop > ac.f_start)) p.fail(4, "stop frequency must exceed start frequency");
        have_ac = true;
        ast.cards.emplace_back(ac);
      } else if (p.keyword(0, ".pz")) {
        if (have_pz) p.fail(0, "duplicate .PZ card");
        p.expect_count(4, ".PZ src n+ n-");
        have_pz = true;
        ast.cards.emplace_back(PzCard{std::string(p.text(1)), std::string(p.text(2)),
                                      std::string(p.text(3)), p.span(0)});
      } else {
        p.fail(0, "unknown directive");
      }
      continue;
    }
    if (lead != 'R' && lead != 'C' && lead != 'G' && lead != 'I' && lead != 'V') {
      p.fail(0, "unknown card leader");
    }
    auto card = parse_element(p, lead, tokens.size());
    if (!names.insert(text::to_lower(card.name)).second) p.fail(0, "duplicate element name");
    ast.cards.emplace_back(std::move(card));
  }
  if (first) throw ParseError({1, 1}, "empty netlist");
  if (!end) throw ParseError({line_no, 1}, "missing .END");
  return ast;
}

std::string print_netlist(const NetlistAst& ast) {
  auto num = [](double v) {
    // shortest text that reads back to the same double
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
  };
  std::string out = ast.title + "\n";
  for (const auto& card : ast.cards) {
    std::visit(overloaded{
                   [&](const ElementCard& e) {
                     out += e.name;
                     for (const auto& n : e.nodes) out += " " + n;
                     if (e.kind == 'I' || e.kind == 'V') out += " AC";
                     out += " " + num(e.value) + "\n";
                   },
                   [&](const AcCard& a) {
                     out += ".AC DEC " + std::to_string(a.points_per_decade) + " " + num(a.f_start) +
                            " " + num(a.f_stop) + "\n";
                   },
                   [&](const PzCard& z) {
                     out += ".PZ " + z.source + " " + z.node_pos + " " + z.node_neg + "\n";
                   },
                   [&](const EndCard&) { out += ".END\n"; },
               },
               card);
  }
  return out;
}

Elaborated elaborate(const NetlistAst& ast) {
  Elaborated out;
  auto& c = out.circuit;
  std::map<std::string, int> degree;
  std::map<std::string, Span> first_seen;
  bool touches_ground = false;
  std::optional<Span> last_span;

  for (const auto& card : ast.cards) {
    if (const auto* ac = std::get_if<AcCard>(&card)) out.ac = *ac;
    if (const auto* pz = std::get_if<PzCard>(&card)) out.pz = *pz;
    if (const auto* e = std::get_if<EndCard>(&card)) last_span = e->span;
    const auto* e = std::get_if<ElementCard>(&card);
    if (!e) continue;
    std::vector<mna::NodeId> ids;
    for (const auto& n : e->nodes) {
      ids.push_back(c.add_node(n));
      if (n == "0") touches_ground = true;
      ++degree[n];
      first_seen.emplace(n, e->span);
    }
    try {
      switch (e->kind) {
        case 'R': c.add_resistor(e->name, ids[0], ids[1], e->value); break;
        case 'C': c.add_capacitor(e->name, ids[0], ids[1], e->value); break;
        case 'G': c.add_vccs(e->name, ids[0], ids[1], ids[2], ids[3], e->value); break;
        case 'I': c.add_current_source(e->name, ids[0], ids[1], e->value); break;
        case 'V': c.add_voltage_source(e->name, ids[0], ids[1], e->value); break;
        default: throw ParseError(e->span, "unknown element kind", e->name);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& err) {
      throw ParseError(e->span, err.what(), e->name);
    }
  }
  const Span where = last_span.value_or(Span{1, 1});
  if (c.empty()) throw ParseError(where, "empty circuit: no element cards");
  if (!touches_ground) throw ParseError(where, "no ground reference: no element connects to node 0");

  for (mna::NodeId id = 1; id < c.node_count(); ++id) {
    const auto& name = c.node_name(id);
    if (degree[name] == 1) {
      const Span s = first_seen[name];
      out.warnings.push_back(std::to_string(s.line) + ":" + std::to_string(s.column) +
                             ": node '" + name + "' has a single connection");
    }
  }

  if (out.pz) {
    const auto& pz = *out.pz;
    const auto* el = c.find_element(pz.source);
    if (!el || (el->kind != mna::ElementKind::VoltageSource &&
                el->kind != mna::ElementKind::CurrentSource)) {
      throw ParseError(pz.span, ".PZ input is not an independent source", pz.source);
    }
    for (const auto& n : {pz.node_pos, pz.node_neg}) {
      if (!c.find_node(n)) throw ParseError(pz.span, ".PZ names an unknown node", n);
    }
  }
  return out;
}

}  // namespace pcf::io
