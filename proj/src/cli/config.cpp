#include "ow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ow/errors.hpp"

namespace ow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

ConfigValue parse_value(const std::string& text, int line);

ConfigValue parse_array(const std::string& text, int line) {
  ConfigValue v;
  v.kind = ConfigValue::Kind::array;
  v.line = line;
  int depth = 0;
  std::string cur;
  for (std::size_t i = 1; i + 1 <= text.size(); ++i) {
    const char ch = text[i];
    if (i == text.size() - 1) {
      if (ch != ']') throw config_error("config line " + std::to_string(line) +
                                        ": unterminated array");
      if (!trim(cur).empty()) v.arr.push_back(parse_value(trim(cur), line));
      break;
    }
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      if (!trim(cur).empty()) v.arr.push_back(parse_value(trim(cur), line));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return v;
}

ConfigValue parse_value(const std::string& text, int line) {
  ConfigValue v;
  v.line = line;
  if (text.empty()) throw config_error("config line " + std::to_string(line) + ": empty value");
  if (text.front() == '[') return parse_array(text, line);
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"')
      throw config_error("config line " + std::to_string(line) + ": unterminated string");
    v.kind = ConfigValue::Kind::string;
    v.str = text.substr(1, text.size() - 2);
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = ConfigValue::Kind::boolean;
    v.b = (text == "true");
    return v;
  }
  try {
    std::size_t used = 0;
    v.num = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    v.kind = ConfigValue::Kind::number;
    return v;
  } catch (const std::exception&) {
    throw config_error("config line " + std::to_string(line) + ": cannot parse value '" +
                       text + "'");
  }
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("config: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_text(ss.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.raw_ = text;
  std::istringstream is(text);
  std::string line, table;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(origin + " line " + std::to_string(lineno) + ": malformed table");
      table = trim(line.substr(1, line.size() - 2));
      if (table.empty())
        throw config_error(origin + " line " + std::to_string(lineno) + ": empty table name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + " line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error(origin + " line " + std::to_string(lineno) + ": empty key");
    const std::string dotted = table.empty() ? key : table + "." + key;
    if (cfg.values_.count(dotted))
      throw config_error(origin + " line " + std::to_string(lineno) + ": duplicate key '" +
                         dotted + "'");
    cfg.values_[dotted] = parse_value(val, lineno);
  }
  return cfg;
}

const ConfigValue* ConfigFile::find(const std::string& dotted) const {
  const auto it = values_.find(dotted);
  return it == values_.end() ? nullptr : &it->second;
}

std::vector<std::string> ConfigFile::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

double SchemaReader::number(const std::string& key, std::optional<double> fallback) {
  seen_.push_back(key);
  const auto* v = cfg_.find(key);
  if (!v) {
    if (fallback) return *fallback;
    errors_.push_back("missing required key '" + key + "'");
    return 0.0;
  }
  if (v->kind != ConfigValue::Kind::number) {
    errors_.push_back("key '" + key + "' must be a number (line " + std::to_string(v->line) +
                      ")");
    return fallback.value_or(0.0);
  }
  return v->num;
}

std::int64_t SchemaReader::integer(const std::string& key,
                                   std::optional<std::int64_t> fallback) {
  std::optional<double> fb;
  if (fallback) fb = double(*fallback);
  const double d = number(key, fb);
  if (d != std::floor(d)) errors_.push_back("key '" + key + "' must be an integer");
  return std::int64_t(d);
}

std::uint64_t SchemaReader::uinteger(const std::string& key,
                                     std::optional<std::uint64_t> fallback) {
  std::optional<double> fb;
  if (fallback) fb = double(*fallback);
  const double d = number(key, fb);
  if (d < 0 || d != std::floor(d)) errors_.push_back("key '" + key + "' must be a nonnegative integer");
  return std::uint64_t(std::max(0.0, d));
}

bool SchemaReader::boolean(const std::string& key, std::optional<bool> fallback) {
  seen_.push_back(key);
  const auto* v = cfg_.find(key);
  if (!v) {
    if (fallback) return *fallback;
    errors_.push_back("missing required key '" + key + "'");
    return false;
  }
  if (v->kind != ConfigValue::Kind::boolean) {
    errors_.push_back("key '" + key + "' must be a boolean");
    return fallback.value_or(false);
  }
  return v->b;
}

std::string SchemaReader::string(const std::string& key, std::optional<std::string> fallback) {
  seen_.push_back(key);
  const auto* v = cfg_.find(key);
  if (!v) {
    if (fallback) return *fallback;
    errors_.push_back("missing required key '" + key + "'");
    return {};
  }
  if (v->kind != ConfigValue::Kind::string) {
    errors_.push_back("key '" + key + "' must be a string");
    return fallback.value_or("");
  }
  return v->str;
}

std::vector<double> SchemaReader::number_array(const std::string& key,
                                               std::optional<std::vector<double>> fallback) {
  seen_.push_back(key);
  const auto* v = cfg_.find(key);
  if (!v) {
    if (fallback) return *fallback;
    errors_.push_back("missing required key '" + key + "'");
    return {};
  }
  std::vector<double> out;
  if (v->kind == ConfigValue::Kind::number) {
    out.push_back(v->num);
    return out;
  }
  if (v->kind != ConfigValue::Kind::array) {
    errors_.push_back("key '" + key + "' must be an array of numbers");
    return fallback.value_or(std::vector<double>{});
  }
  for (const auto& e : v->arr) {
    if (e.kind != ConfigValue::Kind::number) {
      errors_.push_back("key '" + key + "' must contain only numbers");
      return fallback.value_or(std::vector<double>{});
    }
    out.push_back(e.num);
  }
  return out;
}

std::vector<std::vector<double>> SchemaReader::number_array2(const std::string& key) {
  seen_.push_back(key);
  const auto* v = cfg_.find(key);
  std::vector<std::vector<double>> out;
  if (!v) {
    errors_.push_back("missing required key '" + key + "'");
    return out;
  }
  if (v->kind != ConfigValue::Kind::array) {
    errors_.push_back("key '" + key + "' must be an array of arrays");
    return out;
  }
  for (const auto& row : v->arr) {
    std::vector<double> r;
    if (row.kind == ConfigValue::Kind::array) {
      for (const auto& e : row.arr)
        if (e.kind == ConfigValue::Kind::number) r.push_back(e.num);
    } else if (row.kind == ConfigValue::Kind::number) {
      r.push_back(row.num);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void SchemaReader::require(bool ok, const std::string& message) {
  if (!ok) errors_.push_back(message);
}

void SchemaReader::finish() {
  for (const auto& key : cfg_.keys()) {
    if (std::find(seen_.begin(), seen_.end(), key) != seen_.end()) continue;
    std::string best;
    std::size_t best_d = 1000;
    for (const auto& known : seen_) {
      const auto d = edit_distance(key, known);
      if (d < best_d) {
        best_d = d;
        best = known;
      }
    }
    std::string msg = "unknown key '" + key + "'";
    if (!best.empty() && best_d <= 3) msg += " (did you mean '" + best + "'?)";
    errors_.push_back(msg);
  }
  if (errors_.empty()) return;
  std::string all = "config validation failed:";
  for (const auto& e : errors_) all += "\n  - " + e;
  throw config_error(all);
}

}  // namespace ow
