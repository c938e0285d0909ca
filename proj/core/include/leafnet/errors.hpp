#pragma once

#include <stdexcept>
#include <string>

namespace leafnet {

// Shape/axis mismatches between tensors (names the offending axis).
class ShapeError : public std::runtime_error {
public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid scalar arguments (rates, strides, lambdas, out-of-range labels).
class ParamError : public std::invalid_argument {
public:
  explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Bad model/run configuration (unknown keys, impossible layer stacks).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem/decoding failures during dataset ingestion.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Corrupt or incompatible checkpoint files.
class CheckpointError : public std::runtime_error {
public:
  explicit CheckpointError(const std::string& what)
      : std::runtime_error(what) {}
};

// Runtime training failures (non-finite loss, gradient blow-up).
class TrainError : public std::runtime_error {
public:
  explicit TrainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace leafnet
