#include "pdiv/shape.hpp"

#include <algorithm>
#include <sstream>

namespace pdiv {

namespace {

// extended gcd: returns (g, x, y) with a*x + b*y = g
std::tuple<long, long, long> ext_gcd(long a, long b) {
    if (b == 0) return {a, 1, 0};
    auto [g, x, y] = ext_gcd(b, a % b);
    return {g, y, x - (a / b) * y};
}

} // namespace

IsocrystalShape::IsocrystalShape(std::vector<Summand> summands)
    : summands_(std::move(summands)) {
    if (summands_.empty()) throw Error("shape must have at least one summand");
    for (size_t j = 0; j < summands_.size(); ++j) {
        const auto& s = summands_[j];
        if (s.m < 0 || s.n < 0 || s.h() < 1) throw Error("invalid summand (m, n)");
        if (s.n == 0 && s.m != 1)
            throw NonCoprime("slope-1 summand must be 1:0");
        if (s.m == 0 && s.n != 1)
            throw NonCoprime("slope-0 summand must be 0:1");
        if (std::gcd(s.m, s.h()) != 1)
            throw NonCoprime("summand " + std::to_string(s.m) + ":" + std::to_string(s.n) +
                             " has gcd(m, m+n) != 1");
        if (s.mult < 1) throw Error("multiplicity must be >= 1");
        if (j > 0) {
            // lambda_j strictly increasing: m/h cross-compare
            const auto& t = summands_[j - 1];
            if (t.m * s.h() >= s.m * t.h())
                throw Error("summand slopes must be strictly increasing");
        }
        auto [g, a, b] = ext_gcd(s.h(), s.m);
        (void)g;
        bezout_.emplace_back(a, b);
        for (long i = 0; i < s.mult; ++i)
            copies_.push_back(Copy{j, i, s.m, s.n, s.h()});
        height_ += s.mult * s.h();
    }
    // Bezout identity holds exactly
    for (size_t j = 0; j < summands_.size(); ++j) {
        auto [a, b] = bezout_[j];
        if (a * summands_[j].h() + b * summands_[j].m != 1)
            throw Error("Bezout identity failed"); // unreachable
    }
}

ShapePtr IsocrystalShape::make(std::vector<Summand> summands) {
    std::stable_sort(summands.begin(), summands.end(), [](const Summand& a, const Summand& b) {
        return a.m * b.h() < b.m * a.h();
    });
    std::vector<Summand> merged;
    for (const auto& s : summands) {
        if (!merged.empty() && merged.back().m == s.m && merged.back().n == s.n)
            merged.back().mult += s.mult;
        else
            merged.push_back(s);
    }
    return std::make_shared<const IsocrystalShape>(std::move(merged));
}

ShapePtr IsocrystalShape::simple(long m, long n) { return make({Summand{m, n, 1}}); }

size_t IsocrystalShape::copy_index(size_t j, long i) const {
    for (size_t c = 0; c < copies_.size(); ++c)
        if (copies_[c].j == j && copies_[c].i == i) return c;
    throw Error("no such summand copy");
}

bool IsocrystalShape::is_bi_infinitesimal() const {
    return std::all_of(summands_.begin(), summands_.end(),
                       [](const Summand& s) { return s.bi_infinitesimal(); });
}

bool IsocrystalShape::is_ordinary() const {
    return std::all_of(summands_.begin(), summands_.end(),
                       [](const Summand& s) { return s.m == 0 || s.n == 0; });
}

long IsocrystalShape::lcm_heights() const {
    long l = 1;
    for (const auto& s : summands_) l = std::lcm(l, s.h());
    return l;
}

long IsocrystalShape::summand_count() const {
    long c = 0;
    for (const auto& s : summands_) c += s.mult;
    return c;
}

std::string IsocrystalShape::str() const {
    std::ostringstream os;
    for (size_t j = 0; j < summands_.size(); ++j) {
        if (j) os << ",";
        os << summands_[j].m << ":" << summands_[j].n;
        if (summands_[j].mult > 1) os << "^" << summands_[j].mult;
    }
    return os.str();
}

bool IsocrystalShape::same_as(const IsocrystalShape& o) const {
    if (summands_.size() != o.summands_.size()) return false;
    for (size_t j = 0; j < summands_.size(); ++j) {
        if (summands_[j].m != o.summands_[j].m || summands_[j].n != o.summands_[j].n ||
            summands_[j].mult != o.summands_[j].mult)
            return false;
    }
    return true;
}

} // namespace pdiv
