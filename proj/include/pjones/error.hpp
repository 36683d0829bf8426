#pragma once

#include <stdexcept>
#include <string>

namespace pjones {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a projection direction hits the measure-zero exceptional set.
class NonGenericDirection : public Error {
 public:
  explicit NonGenericDirection(const std::string& feature)
      : Error("non-generic projection: " + feature), feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

class StateSumTooLarge : public Error {
 public:
  StateSumTooLarge(int crossings, int cap, const std::string& context = "")
      : Error("state sum too large: " + std::to_string(crossings) +
              " crossings exceeds cap " + std::to_string(cap) +
              (context.empty() ? "" : " (" + context + ")")),
        crossings_(crossings),
        cap_(cap) {}
  int crossings() const noexcept { return crossings_; }
  int cap() const noexcept { return cap_; }

 private:
  int crossings_;
  int cap_;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace pjones
