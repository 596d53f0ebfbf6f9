#pragma once

#include <stdexcept>
#include <string>

namespace vignat {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LexError : public Error {
 public:
  LexError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, const std::string& offending, int line, int column);
  const std::string& offending() const { return offending_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string offending_;
  int line_;
  int column_;
};

class UnsupportedConstruct : public Error {
 public:
  using Error::Error;
};

class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyNeighborhood : public Error {
 public:
  using Error::Error;
};

class NoAttentionLayers : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  explicit NonFiniteLoss(long step);
  long step() const { return step_; }

 private:
  long step_;
};

class MalformedLine : public Error {
 public:
  MalformedLine(const std::string& message, long line);
  long line() const { return line_; }

 private:
  long line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vignat
