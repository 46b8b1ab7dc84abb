#pragma once

#include <stdexcept>
#include <string>

namespace meshwave {

/// Bad scenario or operation inputs. CLI exit code 2.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// NaN/Inf in the wavefield or a singular stencil system. CLI exit code 3.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File read/write failures. CLI exit code 4.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace meshwave
