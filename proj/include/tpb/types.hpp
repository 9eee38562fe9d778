#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace tpb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when a run configuration cannot produce a valid run.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tpb
