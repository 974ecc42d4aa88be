#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace kgqa {

/// Ordered (name, value) rows; integral values render without decimals.
struct StatsTable {
  struct Row {
    std::string name;
    double value = 0;
  };
  std::vector<Row> rows;

  void add(std::string name, double value) { rows.push_back({std::move(name), value}); }

  double get(const std::string& name) const {
    for (const auto& r : rows)
      if (r.name == name) return r.value;
    return 0;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& r : rows) {
      if (std::floor(r.value) == r.value && std::fabs(r.value) < 9e15)
        j[r.name] = static_cast<long long>(r.value);
      else
        j[r.name] = std::round(r.value * 100.0) / 100.0;
    }
    return j;
  }

  std::string render() const {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    std::string out;
    for (const auto& r : rows) {
      char buf[64];
      if (std::floor(r.value) == r.value)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(r.value));
      else
        std::snprintf(buf, sizeof buf, "%.2f", r.value);
      out += r.name + std::string(width - r.name.size() + 2, ' ') + buf + "\n";
    }
    return out;
  }
};

}  // namespace kgqa
