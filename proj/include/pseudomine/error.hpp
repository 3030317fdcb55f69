#pragma once

#include <stdexcept>
#include <string>

namespace pseudomine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Archive nesting went past the configured cap.
class ArchiveDepthError : public Error {
 public:
  ArchiveDepthError(std::string path, int depth)
      : Error("archive nesting depth " + std::to_string(depth) + " exceeds limit at " + path),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class MetadataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudomine
