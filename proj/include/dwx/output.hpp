#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dwx {

using Json = nlohmann::ordered_json;

using Cell = std::variant<double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// %.12g; non-finite values print as nan, inf, -inf.
std::string format_number(double v);

// Rounded to 12 significant digits; non-finite values become null.
Json json_number(double v);

// Header row, comma separated, '\n' line ends.
std::string to_csv(const Table& t);

// Two-space indent, trailing newline.
std::string to_json_text(const Json& j);

// Writes content to path in binary mode. Throws std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace dwx
