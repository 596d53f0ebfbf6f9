#include "vignat/dataset.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vignat/errors.hpp"
#include "vignat/matrix.hpp"

namespace vignat {

IngestResult ingest_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  IngestResult result;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.total;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedLine(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("func") || !j["func"].is_string())
      throw MalformedLine("expected an object with a string 'func' field", line_no);

    SourceFunction f;
    f.source = j["func"].get<std::string>();
    if (j.contains("target") && !j["target"].is_null()) {
      if (j["target"].is_boolean())
        f.label = j["target"].get<bool>() ? 1 : 0;
      else if (j["target"].is_number_integer())
        f.label = j["target"].get<int>() != 0 ? 1 : 0;
      else
        throw MalformedLine("'target' must be 0, 1, or a boolean", line_no);
    }

    try {
      Ast ast = parse_function(f.source);
      f.name = ast.node(ast.root).attrs.at("name");
      f.token_count = token_count(f.source);
    } catch (const Error& e) {
      ++result.skipped;
      result.skip_reasons.push_back("line " + std::to_string(line_no) + ": " + e.what());
      continue;
    }
    result.functions.push_back(std::move(f));
  }
  return result;
}

namespace {

const char* kVarPool[] = {"value", "count", "size", "index", "amount", "level"};

std::string fillers(Rng& rng, int fn_index) {
  // 0-2 innocuous statements so functions are not all textually identical.
  int n = rng.uniform_int(0, 2);
  std::string out;
  for (int i = 0; i < n; ++i) {
    std::string var = "t" + std::to_string(fn_index % 7) + std::to_string(i);
    out += "  int " + var + " = " + kVarPool[rng.uniform_int(0, 5)] + "_of(" +
           std::to_string(rng.uniform_int(1, 99)) + ");\n";
    if (rng.uniform_int(0, 1) == 1) out += "  log_value(" + var + ");\n";
  }
  return out;
}

std::string unchecked_division(Rng& rng, int idx, bool positive) {
  std::string name = "fn_" + std::to_string(idx);
  std::string c1 = std::to_string(rng.uniform_int(2, 900));
  std::string body;
  body += "int " + name + "(int a, int b) {\n";
  body += "  int total = read_input(" + c1 + ");\n";
  body += "  int d = read_input(" + std::to_string(rng.uniform_int(2, 900)) + ");\n";
  body += fillers(rng, idx);
  if (positive) {
    body += "  total = total / d;\n";
    body += "  total = total + a % d;\n";
    body += "  return total / b;\n";
  } else {
    body += "  if (d != 0) {\n";
    body += "    total = total / d;\n";
    body += "  }\n";
    body += "  if (b != 0) {\n";
    body += "    total = total + a / b;\n";
    body += "  }\n";
    body += "  return total;\n";
  }
  body += "}\n";
  return body;
}

std::string overflow_prone_decl(Rng& rng, int idx, bool positive) {
  std::string name = "fn_" + std::to_string(idx);
  std::string big = std::to_string(rng.uniform_int(30000, 99999));
  std::string body;
  body += "int " + name + "(int n) {\n";
  body += "  int acc = read_input(" + std::to_string(rng.uniform_int(2, 900)) + ");\n";
  body += fillers(rng, idx);
  if (positive) {
    body += "  acc = acc * " + big + ";\n";
    body += "  acc = acc * acc + n;\n";
    body += "  return acc * " + std::to_string(rng.uniform_int(3, 17)) + ";\n";
  } else {
    body += "  if (acc < bound_max(" + std::to_string(rng.uniform_int(2, 9)) + ")) {\n";
    body += "    acc = acc + n;\n";
    body += "  }\n";
    body += "  if (acc != 0) {\n";
    body += "    acc = clamp_value(acc);\n";
    body += "  }\n";
    body += "  return acc;\n";
  }
  body += "}\n";
  return body;
}

}  // namespace

std::vector<SourceFunction> gen_synthetic(const SyntheticSpec& spec) {
  if (spec.count <= 0) throw Error("synthetic corpus size must be positive");
  if (spec.positive_rate < 0.0 || spec.positive_rate > 1.0)
    throw Error("positive rate must be within [0, 1]");
  for (const std::string& t : spec.templates)
    if (t != "unchecked-division" && t != "overflow-prone-decl")
      throw Error("unknown template '" + t + "'");
  if (spec.templates.empty()) throw Error("at least one template required");

  Rng rng(derive_seed(spec.seed, "synth"));
  long n_pos = std::llround(spec.positive_rate * static_cast<double>(spec.count));

  std::vector<SourceFunction> out;
  for (int i = 0; i < spec.count; ++i) {
    bool positive = i < n_pos;
    const std::string& tmpl = spec.templates[static_cast<std::size_t>(i) % spec.templates.size()];
    SourceFunction f;
    f.source = tmpl == "unchecked-division" ? unchecked_division(rng, i, positive)
                                            : overflow_prone_decl(rng, i, positive);
    f.name = "fn_" + std::to_string(i);
    f.label = positive ? 1 : 0;
    f.token_count = token_count(f.source);
    out.push_back(std::move(f));
  }
  rng.shuffle(out);
  return out;
}

std::string to_jsonl(const std::vector<SourceFunction>& functions) {
  std::string out;
  for (const SourceFunction& f : functions) {
    nlohmann::ordered_json j;
    j["func"] = f.source;
    if (f.label) j["target"] = *f.label;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::vector<SourceFunction>& functions, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << to_jsonl(functions);
}

}  // namespace vignat
