#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vignat/parser.hpp"

namespace vignat {

struct IngestResult {
  std::vector<SourceFunction> functions;
  long total = 0;    // non-blank lines seen
  long skipped = 0;  // functions outside the supported language subset
  std::vector<std::string> skip_reasons;
};

// Reads {"func": "...", "target": 0|1} JSON lines. Malformed JSON aborts
// with MalformedLine; functions that fail to lex or parse are skipped and
// counted, so functions.size() + skipped == total.
IngestResult ingest_jsonl(const std::string& path);

struct SyntheticSpec {
  int count = 200;
  double positive_rate = 0.5;
  std::vector<std::string> templates = {"unchecked-division", "overflow-prone-decl"};
  std::uint64_t seed = 7;
};

// Labeled toy corpus: positives do arithmetic on unvalidated inputs,
// negatives guard the same operations first. Deterministic per spec/seed.
std::vector<SourceFunction> gen_synthetic(const SyntheticSpec& spec);

std::string to_jsonl(const std::vector<SourceFunction>& functions);
void write_jsonl(const std::vector<SourceFunction>& functions, const std::string& path);

}  // namespace vignat
