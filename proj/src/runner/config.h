#pragma once

#include <map>
#include <string>
#include <vector>

namespace flatcal {

// ini-style configuration: [section] headers, key = value lines, # or ;
// comments; keys are flattened to "section.key"
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin = "<text>");

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key, const std::string& fallback) const;
  void set(const std::string& key, const std::string& value);

  // canonical listing, parseable by parse_text
  std::string resolved_text() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace flatcal
