#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypersketch {

// Malformed user input (files, flags, edges that violate the config).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Text parse failure with a 1-based position.
class ParseError : public InputError {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// An exact computation would exceed a configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Two sketches built from different configurations or seeds.
class ConfigMismatch : public std::runtime_error {
 public:
  explicit ConfigMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A simulated machine went over its memory budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t round, std::size_t machine, std::size_t used, std::size_t budget)
      : std::runtime_error("memory budget exceeded in round " + std::to_string(round) + " on machine " +
                           std::to_string(machine) + ": " + std::to_string(used) + " > " +
                           std::to_string(budget) + " bytes"),
        round_(round),
        machine_(machine) {}

  std::size_t round() const { return round_; }
  std::size_t machine() const { return machine_; }

 private:
  std::size_t round_;
  std::size_t machine_;
};

}  // namespace hypersketch
