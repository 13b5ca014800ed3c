#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdb {

// Base class for all engine errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// A domain type was constructed with a field violating its invariant.
// The message always names the offending field.
class ValidationError : public Error {
  public:
    ValidationError(const std::string &field, const std::string &detail)
        : Error(field + ": " + detail), field_(field) {}
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

// Unrecoverable input-file problem (bad schema, unparsable value, duplicate key).
class CsvError : public Error {
  public:
    CsvError(const std::string &file, std::size_t line, const std::string &detail)
        : Error(file + ":" + std::to_string(line) + ": " + detail), file_(file), line_(line) {}
    const std::string &file() const { return file_; }
    std::size_t line() const { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &msg) : Error("config: " + msg) {}
};

// A food group has fewer candidate items than its required item count.
// Signals that the country is ineligible for the requested scenario.
class InsufficientItemsError : public Error {
  public:
    InsufficientItemsError(const std::string &group, std::size_t have, std::size_t need)
        : Error("insufficient items in group " + group + ": have " + std::to_string(have) +
                ", need " + std::to_string(need)),
          group_(group) {}
    const std::string &group() const { return group_; }

  private:
    std::string group_;
};

class AllZeroWeightsError : public Error {
  public:
    explicit AllZeroWeightsError(const std::string &group)
        : Error("all candidate weights are zero in group " + group), group_(group) {}
    const std::string &group() const { return group_; }

  private:
    std::string group_;
};

class UnknownItemError : public Error {
  public:
    explicit UnknownItemError(const std::string &item_id)
        : Error("unknown item: " + item_id), item_id_(item_id) {}
    const std::string &item_id() const { return item_id_; }

  private:
    std::string item_id_;
};

class MissingProfileError : public Error {
  public:
    explicit MissingProfileError(const std::string &item_id)
        : Error("no nutrient profile for item: " + item_id) {}
};

class MissingRequirementError : public Error {
  public:
    explicit MissingRequirementError(const std::string &nutrient)
        : Error("no requirement for nutrient: " + nutrient) {}
};

class MissingDistributionError : public Error {
  public:
    explicit MissingDistributionError(const std::string &country)
        : Error("no income distribution for country: " + country) {}
};

class MissingClassError : public Error {
  public:
    explicit MissingClassError(const std::string &country)
        : Error("no income-class assignment for country: " + country) {}
};

class EmptyInputError : public Error {
  public:
    EmptyInputError() : Error("empty input") {}
};

} // namespace hdb
