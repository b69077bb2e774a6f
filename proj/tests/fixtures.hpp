#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "equideg/burnside.hpp"

namespace fixtures {

using Terms = std::vector<std::pair<std::string, std::int64_t>>;

// Blocks of tests/data/fixtures.txt keyed by their header ("omega 1,3,2").
inline const std::map<std::string, std::vector<std::string>>& blocks() {
  static const auto data = [] {
    std::map<std::string, std::vector<std::string>> out;
    std::ifstream in(EQUIDEG_FIXTURES);
    if (!in) throw std::runtime_error("cannot open " EQUIDEG_FIXTURES);
    std::string line, key;
    while (std::getline(in, line)) {
      line = line.substr(0, line.find('#'));
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (line.empty()) continue;
      if (line.front() == '[') {
        key = line.substr(1, line.size() - 2);
        out[key];
      } else {
        out.at(key).push_back(line);
      }
    }
    return out;
  }();
  return data;
}

inline const std::vector<std::string>& block(const std::string& key) { return blocks().at(key); }

inline std::vector<std::string> tokens(const std::string& key) {
  std::vector<std::string> out;
  for (const auto& line : block(key)) {
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
  }
  return out;
}

// Half a unit in the last printed digit of a decimal literal.
inline double print_tolerance(const std::string& literal) {
  const auto dot = literal.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(literal.size() - dot - 1);
  return 0.5 * std::pow(10.0, -decimals);
}

inline std::vector<double> numbers(const std::string& key) {
  std::vector<double> out;
  for (const auto& line : block(key)) {
    std::istringstream in(line);
    double x;
    while (in >> x) out.push_back(x);
  }
  return out;
}

// The printed listing writes D4z for both D4z and D4z_2.
inline std::string canonical(std::string symbol) {
  for (std::size_t p; (p = symbol.find("D4z_2")) != std::string::npos;) symbol.erase(p + 3, 2);
  return symbol;
}

inline Terms sorted(Terms t) {
  for (auto& [s, c] : t) s = canonical(s);
  std::sort(t.begin(), t.end());
  return t;
}

inline Terms terms(const std::string& key) {
  Terms out;
  for (const auto& line : block(key)) {
    const auto space = line.find(' ');
    out.emplace_back(line.substr(space + 1), std::stoll(line.substr(0, space)));
  }
  return sorted(out);
}

// Element in the listing basis, in the same form as terms().
inline Terms listing(const equideg::BurnsideElement& value) {
  return sorted(equideg::to_listing_basis(value).serialize());
}

}  // namespace fixtures
