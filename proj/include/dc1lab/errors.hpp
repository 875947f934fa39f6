#pragma once

#include <stdexcept>
#include <string>

namespace dc1lab {

// Violated operation precondition (bad argument, kind mismatch, ...).
// CLI maps these to exit code 2.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what)
        : std::invalid_argument(what) {}
};

// A point handed to a system it does not belong to.
class kind_mismatch_error : public precondition_error {
public:
    explicit kind_mismatch_error(const std::string& what)
        : precondition_error(what) {}
};

// Requested computation exceeds the configured work budget.
// CLI maps these to exit code 3.
class budget_error : public std::runtime_error {
public:
    explicit budget_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Malformed input document; carries 1-based line/column when known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(what), line(line), column(column) {}
    explicit parse_error(const std::string& what)
        : std::runtime_error(what), line(0), column(0) {}
    std::size_t line;
    std::size_t column;
};

}  // namespace dc1lab
