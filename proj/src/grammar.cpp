#include "pdiv/grammar.hpp"

#include <cctype>

namespace pdiv {

namespace {

struct Scanner {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    bool peek(char c) {
        skip_ws();
        return i < s.size() && s[i] == c;
    }
    bool eat(char c) {
        if (peek(c)) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", i);
    }
    long integer() {
        skip_ws();
        size_t start = i;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
            throw ParseError("expected an integer", start);
        long v = 0;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) {
            v = v * 10 + (s[i] - '0');
            if (v > 1000000000L) throw ParseError("integer out of range", start);
            ++i;
        }
        return neg ? -v : v;
    }
};

} // namespace

ShapePtr parse_shape(const std::string& text) {
    Scanner sc{text};
    std::vector<Summand> summands;
    for (;;) {
        long m = sc.integer();
        sc.expect(':');
        long n = sc.integer();
        long mult = 1;
        if (sc.eat('^')) mult = sc.integer();
        if (m < 0 || n < 0 || mult < 1) throw ParseError("summand values out of range", sc.i);
        summands.push_back(Summand{m, n, mult});
        if (sc.done()) break;
        sc.expect(',');
    }
    try {
        return IsocrystalShape::make(std::move(summands));
    } catch (const Error& e) {
        throw ParseError(e.what(), text.size());
    }
}

FFElement parse_field_element(const std::string& text, const FieldPtr& field) {
    Scanner sc{text};
    FFElement acc = field->zero();
    bool any = false;
    for (;;) {
        sc.skip_ws();
        long coeff = 1;
        bool have_coeff = false;
        if (sc.i < text.size() && std::isdigit((unsigned char)text[sc.i])) {
            coeff = sc.integer();
            have_coeff = true;
            sc.eat('*');
        }
        long expo = 0;
        if (sc.eat('x')) {
            expo = 1;
            if (sc.eat('^')) expo = sc.integer();
        } else if (!have_coeff) {
            throw ParseError("expected a coefficient or 'x'", sc.i);
        }
        if (expo < 0) throw ParseError("negative exponent", sc.i);
        std::vector<uint64_t> mono((size_t)expo + 1, 0);
        mono[(size_t)expo] = (uint64_t)(coeff % (long)field->p() + (long)field->p()) % field->p();
        acc = acc + field->from_coeffs(std::move(mono));
        any = true;
        if (sc.done()) break;
        sc.expect('+');
    }
    if (!any) throw ParseError("empty field element", 0);
    return acc;
}

IsoVector parse_vector(const std::string& text, const ShapePtr& shape, const RingPtr& ring) {
    Scanner sc{text};
    IsoVector acc = IsoVector::zero(shape, ring);
    for (;;) {
        sc.skip_ws();
        FFElement coeff = ring->base()->one();
        if (sc.eat('[')) {
            size_t start = sc.i;
            size_t depth = 1;
            std::string inner;
            while (sc.i < text.size() && depth > 0) {
                if (text[sc.i] == ']')
                    --depth;
                else
                    inner += text[sc.i];
                ++sc.i;
            }
            if (depth != 0) throw ParseError("unterminated '['", start);
            coeff = parse_field_element(inner, ring->base());
        }
        sc.skip_ws();
        if (!sc.eat('e')) throw ParseError("expected a basis term 'e'", sc.i);
        BasisIndex idx{};
        if (sc.eat('(')) {
            long j = sc.integer();
            sc.expect(',');
            long i = sc.integer();
            sc.expect(',');
            long l = sc.integer();
            sc.expect(')');
            if (j < 1 || (size_t)j > shape->summands().size())
                throw ParseError("summand index out of range", sc.i);
            if (i < 1 || i > shape->summands()[(size_t)j - 1].mult)
                throw ParseError("copy index out of range", sc.i);
            idx = BasisIndex{(size_t)(j - 1), i - 1, l};
        } else if (sc.eat('_')) {
            if (!shape->is_simple())
                throw ParseError("e_l shorthand needs a simple shape; use e(j,i,l)", sc.i);
            idx = BasisIndex{0, 0, sc.integer()};
        } else {
            throw ParseError("expected 'e_l' or 'e(j,i,l)'", sc.i);
        }
        acc = acc + IsoVector::basis(shape, ring, idx).teich_mul(coeff);
        if (sc.done()) break;
        sc.expect('+');
    }
    return acc;
}

} // namespace pdiv
