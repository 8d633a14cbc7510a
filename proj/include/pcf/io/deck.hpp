#pragma once

#include <string>
#include <string_view>

#include "pcf/amp/design.hpp"

namespace pcf::io {

/// Reads a design deck: one `section.key = value unit` per line, `#` or `*`
/// comments, blank lines ignored.
///
/// Device sections are the sixteen roles (m1 ... mt2) with keys
///   polarity (nmos|pmos), gm [S], gmb [S], ro [ohm], w [um], l [um],
///   cgs/cgd/cdb [F], id [A], vov [V], like (another role)
/// Either id or vov is required; the other follows from gm = 2 id / vov.
/// `like` copies every field of another role before local keys apply.
/// Globals: amp.cc, amp.cl, amp.c1, amp.c2 [F], amp.supply [V],
///   pelgrom.avt_nmos/avt_pmos [mV*um], pelgrom.abeta_nmos/abeta_pmos [%*um].
///
/// Throws ParseError (line:column) on syntax, unit or key errors, and
/// InputError when the assembled design fails validation.
amp::AmpDesign parse_deck(std::string_view text);

amp::AmpDesign load_deck(const std::string& path);

}  // namespace pcf::io
