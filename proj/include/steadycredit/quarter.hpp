#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace steadycredit {

/// Calendar quarter, ordered lexicographically by (year, q).
class Quarter {
public:
    constexpr Quarter() = default;
    Quarter(int year, int q) : year_(year), q_(q) {
        if (q < 1 || q > 4)
            throw Error(ErrorKind::Domain, "quarter index must be in 1..4, got " + std::to_string(q));
    }

    constexpr int year() const noexcept { return year_; }
    constexpr int q() const noexcept { return q_; }

    /// Linear index; successive quarters differ by exactly 1.
    constexpr std::int64_t ordinal() const noexcept {
        return static_cast<std::int64_t>(year_) * 4 + (q_ - 1);
    }

    static Quarter from_ordinal(std::int64_t ord) {
        auto y = ord >= 0 ? ord / 4 : -((-ord + 3) / 4);
        return Quarter(static_cast<int>(y), static_cast<int>(ord - y * 4) + 1);
    }

    Quarter next() const { return from_ordinal(ordinal() + 1); }
    Quarter prev() const { return from_ordinal(ordinal() - 1); }

    constexpr auto operator<=>(const Quarter&) const = default;

    /// Rendered as `YYYY-Qn`.
    std::string str() const { return std::to_string(year_) + "-Q" + std::to_string(q_); }

    static Quarter parse(std::string_view text) {
        auto bad = [&] {
            return Error(ErrorKind::Parse, "invalid quarter '" + std::string(text) + "', expected YYYY-Qn");
        };
        auto dash = text.find("-Q");
        if (dash == std::string_view::npos || dash == 0 || dash + 3 != text.size()) throw bad();
        int year = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + dash, year);
        if (ec != std::errc{} || p != text.data() + dash) throw bad();
        char qc = text[dash + 2];
        if (qc < '1' || qc > '4') throw bad();
        return Quarter(year, qc - '0');
    }

private:
    int year_ = 1970;
    int q_ = 1;
};

}  // namespace steadycredit
