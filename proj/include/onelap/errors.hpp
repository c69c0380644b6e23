#ifndef ONELAP_ERRORS_HPP_
#define ONELAP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace onelap {

/// Bad input: out-of-range parameters, malformed files, inconsistent sizes.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation that started from valid input failed to produce a result
/// (divergent iteration, non-integrable singularity, ...).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace onelap

#endif
