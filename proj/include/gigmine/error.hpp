#pragma once

#include <stdexcept>
#include <string>

namespace gigmine {

// Base for every failure raised by the library. Callers that only need to
// report can catch this; the subclasses exist for callers that recover.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNodeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gigmine
