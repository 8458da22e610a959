#include "coex/result_table.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace coex::cli {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = line.find(sep, begin);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(begin));
      return parts;
    }
    parts.push_back(line.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

Cell parse_cell(std::string_view text)
{
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc{} && ptr == text.data() + text.size() && !text.empty()) {
    return value;
  }
  return std::string(text);
}

} // namespace

std::string format_number(double value)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) {
    throw std::runtime_error("number formatting failed");
  }
  return std::string(buf, ptr);
}

void ResultTable::add_row(std::vector<Cell> row)
{
  if (row.size() != columns.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, table has " +
                                std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const
{
  std::ostringstream out;
  for (const auto& [key, value] : metadata) {
    out << "# " << key << '=' << value << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) {
        out << ',';
      }
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_number(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

ResultTable ResultTable::from_csv(std::string_view text)
{
  ResultTable table;
  bool have_header = false;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') {
        line.remove_prefix(1);
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("metadata line without '='");
      }
      table.metadata.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
      continue;
    }
    if (!have_header) {
      for (auto name : split(line, ',')) {
        table.columns.emplace_back(name);
      }
      have_header = true;
      continue;
    }
    std::vector<Cell> row;
    for (auto cell : split(line, ',')) {
      row.push_back(parse_cell(cell));
    }
    table.add_row(std::move(row));
  }
  return table;
}

} // namespace coex::cli
