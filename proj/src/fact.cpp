#include "tkge/fact.hpp"

#include <charconv>
#include <vector>

#include "tkge/errors.hpp"

namespace tkge {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// <name> -> name (YAGO-style decoration).
std::string strip_brackets(const std::string& s) {
    if (s.size() >= 2 && s.front() == '<' && s.back() == '>') return s.substr(1, s.size() - 2);
    return s;
}

// "1961-##-##"^^xsd:date -> 1961-##-##
std::string strip_literal_decoration(const std::string& s) {
    std::string out = s;
    const std::size_t caret = out.find("^^");
    if (caret != std::string::npos) out = out.substr(0, caret);
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

bool all_hashes(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c != '#') return false;
    }
    return true;
}

std::optional<int> parse_component(const std::string& s, const char* what, const std::string& file,
                                   std::size_t line_no) {
    if (all_hashes(s)) return std::nullopt;
    int value = 0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(file, line_no, std::string("malformed ") + what + " '" + s + "'");
    }
    return value;
}

std::optional<TemporalModifier> modifier_from_literal(const std::string& s) {
    if (s == "occursSince") return TemporalModifier::OccursSince;
    if (s == "occursUntil") return TemporalModifier::OccursUntil;
    return std::nullopt;
}

}  // namespace

Dialect dialect_from_string(const std::string& s) {
    if (s == "plain") return Dialect::Plain;
    if (s == "icews") return Dialect::ICEWS;
    if (s == "yago") return Dialect::YAGO;
    if (s == "wikidata") return Dialect::WikidataInterval;
    throw DataError("unknown dialect '" + s + "' (expected plain, icews, yago or wikidata)");
}

const char* to_string(Dialect d) {
    switch (d) {
        case Dialect::Plain:
            return "plain";
        case Dialect::ICEWS:
            return "icews";
        case Dialect::YAGO:
            return "yago";
        case Dialect::WikidataInterval:
            return "wikidata";
    }
    return "?";
}

Timestamp parse_timestamp_field(const std::string& text, const std::string& file, std::size_t line_no) {
    // A leading '-' is a sign, not a separator.
    bool negative_year = false;
    std::string body = text;
    if (!body.empty() && body[0] == '-') {
        negative_year = true;
        body = body.substr(1);
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t dash = body.find('-', start);
        if (dash == std::string::npos) {
            parts.push_back(body.substr(start));
            break;
        }
        parts.push_back(body.substr(start, dash - start));
        start = dash + 1;
    }
    if (parts.size() > 3) {
        throw ParseError(file, line_no, "malformed timestamp '" + text + "'");
    }

    Timestamp ts;
    ts.year = parse_component(parts[0], "year", file, line_no);
    if (ts.year && negative_year) ts.year = -*ts.year;
    if (parts.size() >= 2) ts.month = parse_component(parts[1], "month", file, line_no);
    if (parts.size() >= 3) ts.day = parse_component(parts[2], "day", file, line_no);
    try {
        ts.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(file, line_no, std::string(e.what()) + " in '" + text + "'");
    }
    return ts;
}

ParsedFact parse_fact_line(const std::string& line, Dialect dialect, const std::string& file, std::size_t line_no) {
    std::vector<std::string> fields = split_tabs(line);
    // Tolerate trailing carriage returns from CRLF files.
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') fields.back().pop_back();
    if (fields.size() < 3 || fields.size() > 5) {
        throw ParseError(file, line_no,
                         "expected 3 to 5 tab-separated fields, got " + std::to_string(fields.size()));
    }
    const bool strip = dialect == Dialect::YAGO || dialect == Dialect::WikidataInterval;

    ParsedFact fact;
    fact.subject = strip ? strip_brackets(fields[0]) : fields[0];
    fact.relation = strip ? strip_brackets(fields[1]) : fields[1];
    fact.object = strip ? strip_brackets(fields[2]) : fields[2];
    if (fact.subject.empty() || fact.relation.empty() || fact.object.empty()) {
        throw ParseError(file, line_no, "empty subject, relation or object field");
    }

    if (fields.size() == 4) {
        const std::string f = strip ? strip_brackets(fields[3]) : fields[3];
        if (modifier_from_literal(f)) {
            throw ParseError(file, line_no, "time modifier '" + f + "' without a timestamp");
        }
        fact.timestamp = parse_timestamp_field(strip ? strip_literal_decoration(f) : f, file, line_no);
    } else if (fields.size() == 5) {
        const std::string mod = strip ? strip_brackets(fields[3]) : fields[3];
        const auto modifier = modifier_from_literal(mod);
        if (!modifier) {
            throw ParseError(file, line_no, "unknown time modifier '" + mod + "'");
        }
        fact.modifier = *modifier;
        fact.timestamp =
            parse_timestamp_field(strip ? strip_literal_decoration(fields[4]) : fields[4], file, line_no);
    }
    return fact;
}

}  // namespace tkge
