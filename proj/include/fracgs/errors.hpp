#pragma once

#include <stdexcept>
#include <string>

namespace fracgs {

/// A functional evaluation produced a non-finite value, typically exp
/// overflow in F(u) at large amplitude.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double amplitude) : std::runtime_error(what), amplitude_(amplitude) {}
  double amplitude() const noexcept { return amplitude_; }

private:
  double amplitude_;
};

/// No Nehari root was bracketed in the admissible scale range.
class ProjectionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracgs
