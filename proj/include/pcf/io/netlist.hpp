#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pcf/error.hpp"
#include "pcf/mna/circuit.hpp"

namespace pcf::io {

struct Span {
  int line = 0;    // 1-based
  int column = 0;  // 1-based, in bytes
};

/// Syntax or semantic error in a netlist or deck, with its location.
class ParseError : public InputError {
 public:
  ParseError(Span span, const std::string& message, std::string token = {});
  Span span() const noexcept { return span_; }
  const std::string& token() const noexcept { return token_; }

 private:
  Span span_;
  std::string token_;
};

/// R, C, G, I or V card. `nodes` holds 2 names, or 4 for a VCCS
/// (out+, out-, ctl+, ctl-). Sources keep their AC magnitude in `value`.
struct ElementCard {
  char kind = 'R';  // upper case leader
  std::string name;
  std::vector<std::string> nodes;
  double value = 0.0;
  Span span;
};

struct AcCard {
  int points_per_decade = 0;
  double f_start = 0.0;
  double f_stop = 0.0;
  Span span;
};

struct PzCard {
  std::string source;
  std::string node_pos;
  std::string node_neg;
  Span span;
};

struct EndCard {
  Span span;
};

using Card = std::variant<ElementCard, AcCard, PzCard, EndCard>;

struct NetlistAst {
  std::string title;
  std::vector<Card> cards;
};

/// Structural equality; spans are ignored.
bool operator==(const NetlistAst& a, const NetlistAst& b);

/// Parses the SPICE subset
///   R<id> n1 n2 value | C<id> n1 n2 value | G<id> n+ n- nc+ nc- gm
///   I<id> n+ n- AC mag | V<id> n+ n- AC mag
///   .AC DEC ppd fstart fstop | .PZ src n+ n- | .END
/// The first line is the title, '*' starts a comment line. Throws ParseError.
NetlistAst parse_netlist(std::string_view text);

/// Text that parses back to an equal AST.
std::string print_netlist(const NetlistAst& ast);

struct Elaborated {
  mna::Circuit circuit;
  std::optional<AcCard> ac;
  std::optional<PzCard> pz;
  std::vector<std::string> warnings;
};

/// Circuit with nodes numbered in order of first appearance. Throws
/// ParseError for an empty circuit, a circuit that never touches node 0,
/// or a .PZ card naming an unknown source or node.
Elaborated elaborate(const NetlistAst& ast);

}  // namespace pcf::io
