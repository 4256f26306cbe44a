#include "run_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace qsw::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !parts.empty()) parts.push_back(cur);
  return parts;
}

double parseDouble(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (!end || *end != '\0' || s.empty()) {
    throw std::invalid_argument("config: bad number '" + s + "'");
  }
  return v;
}

long long parseLong(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (!end || *end != '\0' || s.empty()) {
    throw std::invalid_argument("config: bad integer '" + s + "'");
  }
  return v;
}

unsigned long long parseULong(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (!end || *end != '\0' || s.empty()) {
    throw std::invalid_argument("config: bad integer '" + s + "'");
  }
  return v;
}

bool parseBool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("config: bad boolean '" + s + "'");
}

std::string joinInts(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::vector<double> parseDoubleList(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : splitList(text)) out.push_back(parseDouble(part));
  return out;
}

std::vector<int> parseIntList(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : splitList(text)) out.push_back(int(parseLong(part)));
  return out;
}

std::string joinDoubles(const std::vector<double>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

std::vector<std::string> RunConfig::toLines() const {
  std::vector<std::string> lines;
  lines.push_back("model=" + model);
  lines.push_back("n=" + std::to_string(n));
  lines.push_back("tau=" + joinDoubles(tau));
  lines.push_back("profile=" + profile);
  lines.push_back("load=" + fmt(load));
  lines.push_back("heavy=" + joinInts(heavy));
  lines.push_back("probs=" + joinDoubles(probs));
  lines.push_back("lle_probs=" + joinDoubles(lleProbs));
  lines.push_back("alpha=" + fmt(alpha));
  lines.push_back("gamma=" + fmt(gamma));
  lines.push_back("delta=" + fmt(delta));
  lines.push_back("memory=" + std::to_string(memory));
  lines.push_back(std::string("literal_service=") + (literalService ? "true" : "false"));
  lines.push_back(std::string("force=") + (force ? "true" : "false"));
  lines.push_back("slots=" + std::to_string(slots));
  lines.push_back("seed=" + std::to_string(seed));
  lines.push_back("checkpoint=" + std::to_string(checkpoint));
  return lines;
}

void applyKeyValue(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "model") {
    c.model = value;
  } else if (key == "n") {
    c.n = int(parseLong(value));
  } else if (key == "tau") {
    c.tau = value.empty() ? std::vector<double>{} : parseDoubleList(value);
  } else if (key == "profile") {
    c.profile = value;
  } else if (key == "load") {
    c.load = parseDouble(value);
  } else if (key == "heavy") {
    c.heavy = value.empty() ? std::vector<int>{} : parseIntList(value);
  } else if (key == "probs") {
    c.probs = value.empty() ? std::vector<double>{} : parseDoubleList(value);
  } else if (key == "lle_probs") {
    c.lleProbs = value.empty() ? std::vector<double>{} : parseDoubleList(value);
  } else if (key == "alpha") {
    c.alpha = parseDouble(value);
  } else if (key == "gamma") {
    c.gamma = parseDouble(value);
  } else if (key == "delta") {
    c.delta = parseDouble(value);
  } else if (key == "memory") {
    c.memory = int(parseLong(value));
  } else if (key == "literal_service") {
    c.literalService = parseBool(value);
  } else if (key == "force") {
    c.force = parseBool(value);
  } else if (key == "slots") {
    c.slots = parseLong(value);
  } else if (key == "seed") {
    c.seed = parseULong(value);
  } else if (key == "checkpoint") {
    c.checkpoint = parseLong(value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

RunConfig RunConfig::fromLines(const std::vector<std::string>& lines) {
  RunConfig c;
  for (const auto& line : lines) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    }
    applyKeyValue(c, line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> readKeyValueFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(f, line)) {
    // strip whitespace and comments
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    }
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace qsw::cli
