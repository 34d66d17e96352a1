#pragma once

#include <stdexcept>
#include <string>

namespace tkge {

// Error categories map onto CLI exit codes: usage errors exit 1,
// DataError (and ParseError) exit 2, NumericError exit 3.

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : DataError {
    ParseError(const std::string& file, std::size_t line_no, const std::string& what)
        : DataError(file + ":" + std::to_string(line_no) + ": " + what),
          file(file),
          line_no(line_no) {}

    std::string file;
    std::size_t line_no;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace tkge
