#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tkge {

// A possibly partial date. Granularity is a prefix of year -> month -> day:
// day requires month, month requires year, and at least the year is present.
struct Timestamp {
    std::optional<int> year;   // signed; serialized as 4 digits when in 0..9999
    std::optional<int> month;  // 1..12
    std::optional<int> day;    // 1..31

    bool operator==(const Timestamp&) const = default;

    // Throws std::invalid_argument when the granularity prefix rule or the
    // field ranges are violated.
    void validate() const;

    // Canonical "YYYY-MM-DD" form with "##" for absent components, used for
    // distinct-timestamp counting and timestamp-embedding keys.
    std::string canonical() const;
};

enum class TemporalModifier { None, OccursSince, OccursUntil };

const char* modifier_token_name(TemporalModifier m);  // "since" / "until"

// The 32-token temporal alphabet: year digits 0y..9y, months 01m..12m,
// day digits 0d..9d, in that order.
inline constexpr int kTemporalAlphabetSize = 32;
const std::array<std::string, kTemporalAlphabetSize>& temporal_alphabet();

// Index of a temporal token name within the alphabet; -1 when unknown.
int temporal_token_index(const std::string& name);

// Decomposes a timestamp into temporal token names: four zero-padded year
// digits, one month token, two zero-padded day digits; absent fields emit
// nothing. Years outside 0..9999 cannot be represented and throw DataError.
std::vector<std::string> tokenize_timestamp(const Timestamp& ts);

}  // namespace tkge
