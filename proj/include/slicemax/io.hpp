#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "slicemax/grid.hpp"

namespace slicemax {

/// Malformed grid text. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GridFormat {
  detect,   // from the number of header tokens
  text_1d,  // "<n> <h>" then n samples
  text_2d,  // "<rows> <cols> <h>" then one line per row
};

/// Parses the delimited-text grid format. Separators are whitespace or commas;
/// blank lines and lines starting with '#' are ignored.
GridFunction parse_grid(std::string_view text, GridFormat format = GridFormat::detect);
std::string format_grid(const GridFunction& f);

GridFunction load_grid(const std::filesystem::path& path, GridFormat format = GridFormat::detect);
void save_grid(const GridFunction& f, const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace slicemax
