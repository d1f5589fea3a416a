#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "imagearc/maps.hpp"

namespace imagearc {

inline constexpr std::size_t kMaxSourceBytes = 64 * 1024;

/// Help text for --func; keep in sync with the parser.
inline constexpr std::string_view kGrammar = R"(Function specs (--func):
  expr    := term { ('*' | '/') term }
  term    := atom { '.' atom }            '.' is composition: f . g = f(g(z))
  atom    := call | '(' expr ')'
  call    := NAME '(' [args] ')'
  args    := value { ',' value }
  value   := complex | list | expr
  complex := REAL [('+' | '-') REAL 'i'] | REAL 'i'
  list    := '[' [value { ',' value }] ']'
NAMEs: z, const(c), scale(c), shift(c), mobius(a, b, c, d), koebe, exp, log,
  powerseries([c0, c1, ...]), blaschke_disc([a, ...]),
  blaschke_hp([y, ...] [, [s, ...]]), cayley, inv_cayley
Composition binds tighter than '*' and '/'. Example:
  blaschke_hp([1,4,9,16]) . shift(1+0i) / blaschke_hp([1,4,9,16]) . shift(-1+0i)
)";

/// Parses the kGrammar language; whitespace between tokens is ignored.
/// Throws ParseError (byte offset of the first offending byte, or the start
/// of an unknown name) and CompositionError for mismatched tags.
MapExpr parse(std::string_view source);

/// Text that parses back to a structurally equal tree.
std::string unparse(const MapExpr& f);

/// A complete complex literal, e.g. "0.5+0i", "-2i", "3".
Complex parse_complex(std::string_view text);

/// Shortest round-trip "re+imi" form.
std::string format_complex(Complex z);

}  // namespace imagearc
