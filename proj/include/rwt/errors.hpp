#pragma once

#include <stdexcept>
#include <string>

namespace rwt {

// Thrown when an operation would materialize more state than its configured
// budget allows (dense tables over the oracle cap, oversized suffix spaces).
class capacity_error : public std::runtime_error {
  public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed input files; carries the 1-based line number.
class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

} // namespace rwt
