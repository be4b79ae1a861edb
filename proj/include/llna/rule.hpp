#pragma once

#include "error.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace llna {

inline constexpr int density_bins = 9;
inline constexpr std::uint32_t rule_count = 1U << 18;

/// Life-like transition rule: the density bins (0..8) in which a dead node is
/// born and an alive node survives. Index layout: bits 0-8 born, bits 9-17
/// survive.
class Rule {
  public:
    constexpr Rule() = default;
    constexpr Rule(std::uint16_t born_mask, std::uint16_t survive_mask)
        : born_(born_mask & 0x1FF), survive_(survive_mask & 0x1FF) {}

    static constexpr Rule from_index(std::uint32_t index) {
        if (index >= rule_count) throw Error(ErrorKind::usage, "rule index out of range: " + std::to_string(index));
        return Rule(static_cast<std::uint16_t>(index & 0x1FF), static_cast<std::uint16_t>(index >> 9));
    }

    constexpr std::uint32_t index() const noexcept { return born_ | (std::uint32_t{survive_} << 9); }

    constexpr std::uint16_t born_mask() const noexcept { return born_; }
    constexpr std::uint16_t survive_mask() const noexcept { return survive_; }
    constexpr bool born(int bin) const noexcept { return (born_ >> bin) & 1U; }
    constexpr bool survives(int bin) const noexcept { return (survive_ >> bin) & 1U; }

    /// Next state for a node in `state` whose neighborhood falls in `bin`.
    constexpr bool next(bool state, int bin) const noexcept { return state ? survives(bin) : born(bin); }

    /// "B<digits>-S<digits>", digits ascending.
    std::string to_string() const {
        std::string s = "B";
        for (int d = 0; d < density_bins; ++d)
            if (born(d)) s.push_back(static_cast<char>('0' + d));
        s += "-S";
        for (int d = 0; d < density_bins; ++d)
            if (survives(d)) s.push_back(static_cast<char>('0' + d));
        return s;
    }

    /// Accepts "B<digits>-S<digits>" with each digit 0-8 at most once per part.
    static Rule parse(std::string_view text) {
        auto fail = [&](const char* why) {
            return Error(ErrorKind::parse, "invalid rule '" + std::string(text) + "': " + why);
        };
        const auto dash = text.find('-');
        if (text.size() < 3 || text.front() != 'B' || dash == std::string_view::npos ||
            dash + 1 >= text.size() || text[dash + 1] != 'S')
            throw fail("expected B<digits>-S<digits>");
        auto digits = [&](std::string_view part) {
            std::uint16_t mask = 0;
            for (char c : part) {
                if (c < '0' || c > '9') throw fail("non-digit character");
                if (c == '9') throw fail("digit 9 is outside the 9 density bins");
                const auto bit = static_cast<std::uint16_t>(1U << (c - '0'));
                if (mask & bit) throw fail("duplicate digit");
                mask |= bit;
            }
            return mask;
        };
        const auto born = digits(text.substr(1, dash - 1));
        const auto survive = digits(text.substr(dash + 2));
        return Rule(born, survive);
    }

    friend constexpr bool operator==(const Rule&, const Rule&) = default;

  private:
    std::uint16_t born_ = 0;
    std::uint16_t survive_ = 0;
};

}  // namespace llna
