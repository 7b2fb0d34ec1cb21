#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace socindex::svg {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Minimal line chart; deterministic output for identical input.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

void write(const std::filesystem::path& path, const std::string& doc);

}  // namespace socindex::svg
