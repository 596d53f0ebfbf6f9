#pragma once

#include <string>
#include <string_view>

namespace vignat {

inline std::string dot_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\\' || c == '"') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

// Long code slices make unreadable labels; keep a prefix.
inline std::string dot_truncate(std::string_view code, std::size_t max = 40) {
  if (code.size() <= max) return std::string(code);
  return std::string(code.substr(0, max)) + "...";
}

}  // namespace vignat
