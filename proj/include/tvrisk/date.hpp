#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace tvrisk {

/// Calendar date, ISO-8601 (YYYY-MM-DD) in and out. No calendar arithmetic
/// beyond ordering; trading calendars are the data supplier's problem.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::string to_string() const;

    /// Parses strict YYYY-MM-DD. Throws std::invalid_argument on anything
    /// else, including out-of-range month/day combinations.
    static Date parse(std::string_view text);
};

}  // namespace tvrisk
