#pragma once

#include <string>

#include "pdiv/isocrystal.hpp"

namespace pdiv {

/// Shape grammar: comma list of `m:n` or `m:n^l` with coprime (m, m+n);
/// `0:1^r` is the etale part, `1:0^s` the multiplicative part. Entries are
/// sorted by slope and equal slopes merged. ParseError carries the offset.
ShapePtr parse_shape(const std::string& text);

/// Field-element literal: polynomial in `x` over the prime field, e.g.
/// "x^2+2*x+1", "x+1", "2", "0". The `*` is optional.
FFElement parse_field_element(const std::string& text, const FieldPtr& field);

/// Vector literal: terms `[c]e(j,i,l)` joined by `+`; simple shapes may
/// write `e_l`. `[c]` may be omitted for coefficient 1; j, i are 1-based.
IsoVector parse_vector(const std::string& text, const ShapePtr& shape, const RingPtr& ring);

} // namespace pdiv
