#pragma once

#include <stdexcept>
#include <string>

namespace okp {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition was violated (non-rotation input, negative sigma, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Too few or geometrically degenerate correspondences for alignment.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Bone direction and forward hint are zero or parallel.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

/// Skeleton configuration is inconsistent; the message starts with the field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

/// Two keypoint sets carry different coordinate-space tags.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Keypoints required by the solver are missing (non-finite).
class IncompleteKeypoints : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (dataset line, heatmap stream, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace okp
