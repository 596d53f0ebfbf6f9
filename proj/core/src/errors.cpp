#include "vignat/errors.hpp"

namespace vignat {

namespace {

std::string at(const std::string& message, int line, int column) {
  return message + " at line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

LexError::LexError(const std::string& message, int line, int column)
    : Error(at(message, line, column)), line_(line), column_(column) {}

ParseError::ParseError(const std::string& message, const std::string& offending, int line,
                       int column)
    : Error(at(message, line, column)), offending_(offending), line_(line), column_(column) {}

NonFiniteLoss::NonFiniteLoss(long step)
    : Error("loss became non-finite at step " + std::to_string(step)), step_(step) {}

MalformedLine::MalformedLine(const std::string& message, long line)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace vignat
