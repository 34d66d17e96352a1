#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "tkge/timestamp.hpp"

namespace tkge {

// Input serializations. All are tab-separated with 3, 4 or 5 fields:
//   s <TAB> p <TAB> o [<TAB> modifier] [<TAB> timestamp]
// YAGO and WikidataInterval files may decorate names with <angle brackets>
// and timestamps as "1961-##-##"^^xsd:date; those decorations are stripped.
// "##" marks an absent date component.
enum class Dialect { Plain, ICEWS, YAGO, WikidataInterval };

Dialect dialect_from_string(const std::string& s);
const char* to_string(Dialect d);

// A fact as read from a file, before vocabulary interning.
struct ParsedFact {
    std::string subject;
    std::string relation;
    std::string object;
    TemporalModifier modifier = TemporalModifier::None;
    std::optional<Timestamp> timestamp;
};

// Throws ParseError (with file and line number) on malformed field counts,
// unknown modifier literals, out-of-range date components, or a modifier
// with no timestamp.
ParsedFact parse_fact_line(const std::string& line, Dialect dialect, const std::string& file = "<input>",
                           std::size_t line_no = 0);

// Parses "YYYY[-MM[-DD]]" with "##" wildcards for absent components.
Timestamp parse_timestamp_field(const std::string& text, const std::string& file = "<input>",
                                std::size_t line_no = 0);

}  // namespace tkge
