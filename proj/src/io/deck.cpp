#include "pcf/io/deck.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "pcf/io/netlist.hpp"
#include "pcf/io/si.hpp"
#include "pcf/text.hpp"

namespace pcf::io {
namespace {

using device::Polarity;

struct Entry {
  std::string value;  // raw value token
  std::string unit;
  Span span;
  Span value_span;
};

using Section = std::map<std::string, Entry>;

struct KeySpec {
  std::string_view key;
  std::string_view unit;  // empty: no unit allowed
};

constexpr KeySpec kDeviceKeys[] = {
    {"polarity", ""}, {"like", ""},   {"gm", "S"},   {"gmb", "S"},  {"ro", "ohm"},
    {"w", "um"},      {"l", "um"},    {"cgs", "F"},  {"cgd", "F"},  {"cdb", "F"},
    {"id", "A"},      {"vov", "V"},
};

constexpr KeySpec kAmpKeys[] = {
    {"cc", "F"}, {"cl", "F"}, {"c1", "F"}, {"c2", "F"}, {"supply", "V"},
};

constexpr KeySpec kPelgromKeys[] = {
    {"avt_nmos", "mV*um"},
    {"avt_pmos", "mV*um"},
    {"abeta_nmos", "%*um"},
    {"abeta_pmos", "%*um"},
};

template <std::size_t N>
const KeySpec* find_key(const KeySpec (&keys)[N], std::string_view key) {
  for (const auto& k : keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

bool is_role(std::string_view s) {
  for (const auto& r : amp::device_roles()) {
    if (r.name == s) return true;
  }
  return false;
}

double number(const Entry& e, const std::string& what) {
  auto v = parse_si(e.value);
  if (!v) throw ParseError(e.value_span, "malformed value for " + what, e.value);
  return *v;
}

class DeckBuilder {
 public:
  explicit DeckBuilder(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

  amp::AmpDesign build() {
    amp::AmpDesign d;
    for (const auto& r : amp::device_roles()) d.*r.member = resolve(std::string(r.name));
    if (auto it = sections_.find("amp"); it != sections_.end()) {
      const auto& s = it->second;
      d.cc = required(s, "amp", "cc");
      d.cl = required(s, "amp", "cl");
      d.supply = required(s, "amp", "supply");
      if (auto c = optional(s, "amp", "c1")) d.c1_override = *c;
      if (auto c = optional(s, "amp", "c2")) d.c2_override = *c;
    } else {
      throw ParseError({1, 1}, "missing amp section (amp.cc, amp.cl, amp.supply)");
    }
    if (auto it = sections_.find("pelgrom"); it != sections_.end()) {
      const auto& s = it->second;
      if (auto v = optional(s, "pelgrom", "avt_nmos")) d.pelgrom.avt_nmos = *v;
      if (auto v = optional(s, "pelgrom", "avt_pmos")) d.pelgrom.avt_pmos = *v;
      if (auto v = optional(s, "pelgrom", "abeta_nmos")) d.pelgrom.abeta_nmos = *v;
      if (auto v = optional(s, "pelgrom", "abeta_pmos")) d.pelgrom.abeta_pmos = *v;
    }
    d.validate();
    return d;
  }

 private:
  static std::optional<double> optional(const Section& s, const std::string& section,
                                        const std::string& key) {
    auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    return number(it->second, section + "." + key);
  }

  double required(const Section& s, const std::string& section, const std::string& key) {
    auto v = optional(s, section, key);
    if (!v) throw ParseError(first_span(s), "missing key " + section + "." + key);
    return *v;
  }

  static Span first_span(const Section& s) {
    Span best{1, 1};
    bool set = false;
    for (const auto& [k, e] : s) {
      if (!set || e.span.line < best.line) best = e.span;
      set = true;
    }
    return best;
  }

  device::MosSmallSignal resolve(const std::string& role) {
    if (auto it = done_.find(role); it != done_.end()) return it->second;
    auto sit = sections_.find(role);
    if (sit == sections_.end()) throw ParseError({1, 1}, "missing device section", role);
    const Section& s = sit->second;
    if (!active_.insert(role).second) {
      throw ParseError(s.at("like").span, "cyclic 'like' chain through", role);
    }

    device::MosSmallSignal m;
    bool have_base = false;
    if (auto it = s.find("like"); it != s.end()) {
      const auto base = text::to_lower(it->second.value);
      if (!is_role(base)) throw ParseError(it->second.value_span, "unknown device in like", it->second.value);
      m = resolve(base);
      have_base = true;
    }
    m.name = role;
    const std::string p = role + ".";
    auto need = [&](const char* key) -> std::optional<double> {
      auto v = optional(s, role, key);
      if (!v && !have_base) throw ParseError(first_span(s), "missing key " + p + key);
      return v;
    };
    if (auto it = s.find("polarity"); it != s.end()) {
      const auto v = text::to_lower(it->second.value);
      if (v == "nmos") m.polarity = Polarity::Nmos;
      else if (v == "pmos") m.polarity = Polarity::Pmos;
      else throw ParseError(it->second.value_span, "polarity must be nmos or pmos", it->second.value);
    } else if (!have_base) {
      throw ParseError(first_span(s), "missing key " + p + "polarity");
    }
    if (auto v = need("gm")) m.gm = *v;
    if (auto v = need("gmb")) m.gmb = *v;
    if (auto v = need("ro")) m.ro = *v;
    if (auto v = need("w")) m.w_um = *v;
    if (auto v = need("l")) m.l_um = *v;
    for (auto [key, field] : {std::pair{"cgs", &device::MosSmallSignal::cgs},
                              std::pair{"cgd", &device::MosSmallSignal::cgd},
                              std::pair{"cdb", &device::MosSmallSignal::cdb}}) {
      if (auto v = optional(s, role, key)) m.*field = *v;
    }
    const auto id = optional(s, role, "id");
    const auto vov = optional(s, role, "vov");
    const double cgs = m.cgs, cgd = m.cgd, cdb = m.cdb;
    if (id && vov) {
      m.id = *id;
      m.vov = *vov;
    } else if (id) {
      m = device::mos_from_id(m.name, m.polarity, m.gm, m.gmb, m.ro, m.w_um, m.l_um, *id);
    } else if (vov) {
      m = device::mos_from_vov(m.name, m.polarity, m.gm, m.gmb, m.ro, m.w_um, m.l_um, *vov);
    } else if (!have_base) {
      throw ParseError(first_span(s), "device " + role + " needs id or vov");
    }
    m.cgs = cgs;
    m.cgd = cgd;
    m.cdb = cdb;
    active_.erase(role);
    done_.emplace(role, m);
    return m;
  }

  std::map<std::string, Section> sections_;
  std::map<std::string, device::MosSmallSignal> done_;
  std::set<std::string> active_;
};

}  // namespace

amp::AmpDesign parse_deck(std::string_view input) {
  std::map<std::string, Section> sections;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < input.size()) {
    const auto nl = input.find('\n', pos);
    const std::string_view raw =
        input.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? input.size() : nl + 1;
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == '*') continue;
    const int indent = static_cast<int>(line.data() - raw.data()) + 1;
    auto col = [&](std::string_view part) {
      return Span{line_no, static_cast<int>(part.data() - raw.data()) + 1};
    };

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError({line_no, indent}, "expected section.key = value", std::string(line.substr(0, 40)));
    }
    const auto lhs = text::trim(line.substr(0, eq));
    const auto dot = lhs.find('.');
    if (lhs.empty() || dot == std::string_view::npos || dot == 0 || dot + 1 == lhs.size()) {
      throw ParseError({line_no, indent}, "expected section.key", std::string(lhs));
    }
    const auto section = text::to_lower(lhs.substr(0, dot));
    const auto key = text::to_lower(lhs.substr(dot + 1));

    const auto rhs = line.substr(eq + 1);
    std::vector<std::string_view> fields;
    for (std::size_t i = 0; i < rhs.size();) {
      while (i < rhs.size() && std::isspace(static_cast<unsigned char>(rhs[i]))) ++i;
      const std::size_t start = i;
      while (i < rhs.size() && !std::isspace(static_cast<unsigned char>(rhs[i]))) ++i;
      if (i > start) fields.push_back(rhs.substr(start, i - start));
    }
    if (fields.empty()) throw ParseError({line_no, static_cast<int>(eq) + indent + 1}, "missing value");

    const KeySpec* spec = nullptr;
    if (section == "amp") spec = find_key(kAmpKeys, key);
    else if (section == "pelgrom") spec = find_key(kPelgromKeys, key);
    else if (is_role(section)) spec = find_key(kDeviceKeys, key);
    else throw ParseError(col(lhs), "unknown section", std::string(lhs.substr(0, dot)));
    if (!spec) throw ParseError(col(lhs), "unknown key", std::string(lhs));

    if (spec->unit.empty()) {
      if (fields.size() > 1) throw ParseError(col(fields[1]), "unexpected token", std::string(fields[1]));
    } else {
      if (fields.size() < 2) {
        throw ParseError(col(fields[0]), "missing unit, expected " + std::string(spec->unit),
                         std::string(fields[0]));
      }
      if (!text::iequals(fields[1], spec->unit)) {
        throw ParseError(col(fields[1]), "wrong unit, expected " + std::string(spec->unit),
                         std::string(fields[1]));
      }
      if (fields.size() > 2) throw ParseError(col(fields[2]), "unexpected token", std::string(fields[2]));
    }

    Entry e{std::string(fields[0]), fields.size() > 1 ? std::string(fields[1]) : "", col(lhs),
            col(fields[0])};
    if (!spec->unit.empty() && !parse_si(e.value)) {
      throw ParseError(e.value_span, "malformed number", e.value);
    }
    auto [it, inserted] = sections[section].emplace(key, e);
    if (!inserted) {
      throw ParseError(e.span, "duplicate key (first set on line " + std::to_string(it->second.span.line) + ")",
                       std::string(lhs));
    }
  }
  return DeckBuilder(std::move(sections)).build();
}

amp::AmpDesign load_deck(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open deck '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_deck(ss.str());
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

}  // namespace pcf::io
