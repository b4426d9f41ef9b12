#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ncoup {

/// Base of every error thrown by the library. `category()` drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  enum class Category { validation, computation };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(Category::validation, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(Category::computation, what) {}
};

class LabelError : public Error {
 public:
  explicit LabelError(const std::string& what) : Error(Category::validation, what) {}
};

/// Covariance fails V + (i/2)omega >= 0; carries the most negative eigenvalue.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, double min_eigenvalue)
      : Error(Category::validation, what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class DegenerateStateError : public Error {
 public:
  explicit DegenerateStateError(const std::string& what) : Error(Category::computation, what) {}
};

/// Model/relation combination that makes no sense (e.g. a transducer-only relation on a BAE model).
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what) : Error(Category::validation, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(Category::computation, what) {}
};

/// Aggregates every problem found while validating a scenario.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(Category::validation, join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "\n";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace ncoup
