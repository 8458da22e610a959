#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace coex::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Ordered rows of named columns plus a key/value metadata block.
///
/// CSV form: metadata as leading "# key=value" lines, a header row, then
/// comma-separated rows. Doubles use the shortest representation that
/// parses back to the same value.
struct ResultTable
{
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument if the cell count differs from the header.
  void add_row(std::vector<Cell> row);

  std::string to_csv() const;

  /// Numeric cells come back as double, everything else as string.
  static ResultTable from_csv(std::string_view text);
};

std::string format_number(double value);

} // namespace coex::cli
