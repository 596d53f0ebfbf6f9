#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vignat/ast.hpp"
#include "vignat/lexer.hpp"

namespace vignat {

// A function body plus its training target, as ingested from a dataset.
struct SourceFunction {
  std::string name;
  std::string source;
  std::optional<int> label;  // 1 vulnerable, 0 clean; absent for inference
  int token_count = 0;       // cached lex(source).size()
};

// Parses exactly one function definition; trailing tokens are an error.
// `source` is the text the tokens came from and backs the code slices.
Ast parse(const std::vector<Token>& tokens, std::string_view source);

// lex + parse in one step.
Ast parse_function(std::string_view source);

}  // namespace vignat
