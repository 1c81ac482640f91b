#pragma once

#include <stdexcept>
#include <string>

namespace fsi_slab {

enum class ErrorKind {
  structural,
  parameter,
  degeneracy,
  positivity,
  blow_up,
  timeout,
  iteration,
  config,
  interpolation,
  domain,
  band,
  energy,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::blow_up: return "blow-up";
    case ErrorKind::timeout: return "timeout";
    case ErrorKind::iteration: return "iteration";
    case ErrorKind::config: return "config";
    case ErrorKind::interpolation: return "interpolation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::band: return "band";
    case ErrorKind::energy: return "energy";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double time = -1.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), time_(time), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Simulation time at which the failure was detected, or -1 when not time related.
  double time() const noexcept { return time_; }
  // what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  double time_;
  std::string message_;
};

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

}  // namespace fsi_slab
