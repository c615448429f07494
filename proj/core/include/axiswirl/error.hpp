#pragma once

#include <stdexcept>
#include <string>

namespace axiswirl {

// Every error raised by the library derives from Error. Blowup of a model run
// is not an error: runs report it through their result status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class NonZeroMean : public Error {
 public:
  using Error::Error;
};

class BlowupAtPole : public Error {
 public:
  using Error::Error;
};

class InconsistentInput : public Error {
 public:
  using Error::Error;
};

class ParticleCrossing : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownKey : public Error {
 public:
  explicit UnknownKey(std::string key)
      : Error("unknown key '" + key + "'"), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class BadValue : public Error {
 public:
  BadValue(std::string key, const std::string& why)
      : Error("bad value for '" + key + "': " + why), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace axiswirl
