#include "runner/config.h"

#include <cctype>
#include <fstream>
#include <sstream>

#include "common/errors.h"

namespace flatcal {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw validation_error(origin + ":" + std::to_string(lineno) + ": unclosed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw validation_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw validation_error(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw validation_error(origin + ":" + std::to_string(lineno) + ": key outside any section");
    cfg.values_[section + "." + key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw validation_error("config: missing required key " + key);
  return it->second;
}

double Config::get_num(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw validation_error("config: key " + key + " is not a number: " + it->second);
  }
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw validation_error("config: key " + key + " is not an integer: " + it->second);
  }
}

std::vector<double> Config::get_list(const std::string& key, const std::string& fallback) const {
  std::string raw = get(key, fallback);
  std::vector<double> out;
  std::istringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw validation_error("config: key " + key + " has a non-numeric entry: " + item);
    }
  }
  if (out.empty()) throw validation_error("config: key " + key + " lists no values");
  return out;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string Config::resolved_text() const {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : values_) {
    size_t dot = key.find('.');
    std::string sec = key.substr(0, dot);
    std::string name = key.substr(dot + 1);
    if (sec != section) {
      if (!section.empty()) out << "\n";
      out << "[" << sec << "]\n";
      section = sec;
    }
    out << name << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace flatcal
