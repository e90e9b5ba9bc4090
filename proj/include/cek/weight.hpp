#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <string>
#include <string_view>

#include "cek/errors.hpp"

namespace cek {

// Edit-cost value. Finite weights are stored as exact fixed-point integers
// in millionths (micro units), so sums and threshold comparisons such as
// "c_X - c_Y >= 1" are exact in every mode; +inf is a sentinel that absorbs
// addition and compares greater than any finite value. Costs and budgets
// may go negative (a merge in real mode can hand budget back), so the type
// is signed; the >= 1 lower bound on pair weights is enforced where
// instances are built, not here.
class Weight {
public:
    static constexpr int64_t kScale = 1'000'000;

    constexpr Weight() : micro_(0) {}

    static constexpr Weight zero() { return Weight(); }
    static constexpr Weight one() { return from_units(1); }

    static constexpr Weight infinity() {
        Weight w;
        w.micro_ = kInfMicro;
        return w;
    }

    static constexpr Weight from_units(int64_t units) {
        Weight w;
        w.micro_ = units * kScale;
        return w;
    }

    static constexpr Weight from_micro(int64_t micro) {
        Weight w;
        w.micro_ = micro;
        return w;
    }

    // Accepts "inf", integers ("3") and decimals ("1.5"). Fractions beyond
    // six digits are rounded to the nearest micro unit.
    static Weight parse(std::string_view text);

    constexpr bool infinite() const { return micro_ == kInfMicro; }
    constexpr bool finite() const { return micro_ != kInfMicro; }

    constexpr int64_t micro() const { return micro_; }

    // Whole-unit value; only meaningful for finite multiples of one.
    constexpr int64_t units() const { return micro_ / kScale; }
    constexpr bool integral() const { return finite() && micro_ % kScale == 0; }

    double as_double() const {
        return infinite() ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(micro_) / kScale;
    }

    std::string str() const;

    // Sums that overflow the 63-bit micro range saturate to +inf; they are
    // beyond any budget such a sum could be compared against.
    friend constexpr Weight operator+(Weight a, Weight b) {
        if (a.infinite() || b.infinite()) return infinity();
        int64_t m = 0;
        if (__builtin_add_overflow(a.micro_, b.micro_, &m)) return infinity();
        return from_micro(m);
    }

    Weight& operator+=(Weight o) { return *this = *this + o; }

    // a - b with finite b; an infinite a stays infinite.
    friend constexpr Weight operator-(Weight a, Weight b) {
        if (a.infinite()) return infinity();
        if (b.infinite()) throw ContractViolation("cannot subtract +inf");
        return from_micro(a.micro_ - b.micro_);
    }

    friend constexpr Weight operator*(int64_t s, Weight w) {
        if (w.infinite()) return infinity();
        int64_t m = 0;
        if (__builtin_mul_overflow(s, w.micro_, &m)) return infinity();
        return from_micro(m);
    }

    friend constexpr bool operator==(Weight a, Weight b) { return a.micro_ == b.micro_; }
    friend constexpr auto operator<=>(Weight a, Weight b) { return a.micro_ <=> b.micro_; }

private:
    static constexpr int64_t kInfMicro = std::numeric_limits<int64_t>::max();
    int64_t micro_;
};

inline Weight Weight::parse(std::string_view text) {
    constexpr int64_t kMaxUnits = 1'000'000'000'000;  // 1e12, far above any sane cost
    if (text == "inf" || text == "+inf") return infinity();
    if (text.empty()) throw UsageError("empty weight");
    size_t i = 0;
    int64_t whole = 0;
    bool any = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
        whole = whole * 10 + (text[i] - '0');
        if (whole > kMaxUnits) throw UsageError("weight exceeds 1e12");
        any = true;
    }
    int64_t frac = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        int digits = 0;
        bool round_up = false;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
            if (digits < 6) {
                frac = frac * 10 + (text[i] - '0');
            } else if (digits == 6) {
                round_up = text[i] >= '5';
            }
            any = true;
        }
        while (digits < 6) {
            frac *= 10;
            ++digits;
        }
        if (round_up) ++frac;
    }
    if (!any || i != text.size()) throw UsageError("bad weight '" + std::string(text) + "'");
    return from_micro(whole * kScale + frac);
}

inline std::string Weight::str() const {
    if (infinite()) return "inf";
    int64_t m = micro_;
    std::string sign;
    if (m < 0) {
        sign = "-";
        m = -m;
    }
    std::string s = sign + std::to_string(m / kScale);
    int64_t frac = m % kScale;
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(0, 6 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        s += "." + f;
    }
    return s;
}

}  // namespace cek
