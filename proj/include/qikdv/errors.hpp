#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace qikdv {

/// Bad input or configuration. `key` names the offending parameter when known.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A field value outside the domain of a formula (log of a nonpositive amplitude, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, long index = -1)
      : std::runtime_error(index >= 0 ? what + " (first offending index " + std::to_string(index) + ")"
                                      : what),
        index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

/// NaN/Inf produced by time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, std::map<std::string, double> last)
      : std::runtime_error("non-finite state at t=" + std::to_string(t)), t_(t), last_(std::move(last)) {}
  double time() const { return t_; }
  const std::map<std::string, double>& last_diagnostics() const { return last_; }

 private:
  double t_;
  std::map<std::string, double> last_;
};

/// A quantity needing a pole-free gauge was requested on a singular one.
class SingularGaugeError : public std::runtime_error {
 public:
  explicit SingularGaugeError(double x)
      : std::runtime_error("gauge coefficient singular at x=" + std::to_string(x)), x_(x) {}
  double location() const { return x_; }

 private:
  double x_;
};

/// Loop algebra result would leave the grade window.
class GradeOverflowError : public std::runtime_error {
 public:
  GradeOverflowError(int grade, int lo, int hi)
      : std::runtime_error("grade " + std::to_string(grade) + " outside window [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]") {}
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace qikdv
