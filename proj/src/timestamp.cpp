#include "tkge/timestamp.hpp"

#include <cstdio>
#include <stdexcept>

#include "tkge/errors.hpp"

namespace tkge {

void Timestamp::validate() const {
    if (!year && !month && !day) throw std::invalid_argument("timestamp: no fields present");
    if (day && !month) throw std::invalid_argument("timestamp: day without month");
    if (month && !year) throw std::invalid_argument("timestamp: month without year");
    if (month && (*month < 1 || *month > 12)) throw std::invalid_argument("timestamp: month out of range");
    if (day && (*day < 1 || *day > 31)) throw std::invalid_argument("timestamp: day out of range");
}

std::string Timestamp::canonical() const {
    validate();
    char buf[32];
    std::string out;
    if (*year >= 0 && *year <= 9999) {
        std::snprintf(buf, sizeof(buf), "%04d", *year);
    } else {
        std::snprintf(buf, sizeof(buf), "%d", *year);
    }
    out += buf;
    if (month) {
        std::snprintf(buf, sizeof(buf), "-%02d", *month);
        out += buf;
    } else {
        out += "-##";
    }
    if (day) {
        std::snprintf(buf, sizeof(buf), "-%02d", *day);
        out += buf;
    } else {
        out += "-##";
    }
    return out;
}

const char* modifier_token_name(TemporalModifier m) {
    switch (m) {
        case TemporalModifier::OccursSince:
            return "since";
        case TemporalModifier::OccursUntil:
            return "until";
        case TemporalModifier::None:
            break;
    }
    throw std::invalid_argument("modifier_token_name: None has no token");
}

const std::array<std::string, kTemporalAlphabetSize>& temporal_alphabet() {
    static const std::array<std::string, kTemporalAlphabetSize> alphabet = [] {
        std::array<std::string, kTemporalAlphabetSize> a;
        int i = 0;
        for (int d = 0; d <= 9; ++d) a[i++] = std::to_string(d) + "y";
        for (int m = 1; m <= 12; ++m) a[i++] = (m < 10 ? "0" : "") + std::to_string(m) + "m";
        for (int d = 0; d <= 9; ++d) a[i++] = std::to_string(d) + "d";
        return a;
    }();
    return alphabet;
}

int temporal_token_index(const std::string& name) {
    const auto& a = temporal_alphabet();
    for (int i = 0; i < kTemporalAlphabetSize; ++i) {
        if (a[i] == name) return i;
    }
    return -1;
}

std::vector<std::string> tokenize_timestamp(const Timestamp& ts) {
    ts.validate();
    std::vector<std::string> tokens;
    if (ts.year) {
        const int y = *ts.year;
        if (y < 0 || y > 9999) {
            throw DataError("unsupported timestamp: year " + std::to_string(y) +
                            " not representable as four digits");
        }
        tokens.push_back(std::to_string(y / 1000) + "y");
        tokens.push_back(std::to_string(y / 100 % 10) + "y");
        tokens.push_back(std::to_string(y / 10 % 10) + "y");
        tokens.push_back(std::to_string(y % 10) + "y");
    }
    if (ts.month) {
        tokens.push_back((*ts.month < 10 ? "0" : "") + std::to_string(*ts.month) + "m");
    }
    if (ts.day) {
        tokens.push_back(std::to_string(*ts.day / 10) + "d");
        tokens.push_back(std::to_string(*ts.day % 10) + "d");
    }
    return tokens;
}

}  // namespace tkge
