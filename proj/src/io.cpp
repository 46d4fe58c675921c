#include "slicemax/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace slicemax {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == ',')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != ',') ++j;
      if (j > i) line.tokens.push_back(raw.substr(i, j - i));
      i = j;
    }
    const bool comment = !line.tokens.empty() && line.tokens.front().front() == '#';
    if (!line.tokens.empty() && !comment) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, "not a number: '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite sample '" + std::string(tok) + "'");
  return v;
}

std::size_t parse_extent(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
    throw ParseError(line, "grid extent must be a positive integer, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

GridFunction parse_grid(std::string_view text, GridFormat format) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "missing header line '<shape...> <h>'");
  const Line& header = lines.front();
  const std::size_t ntok = header.tokens.size();
  if (format == GridFormat::detect) {
    if (ntok == 2)
      format = GridFormat::text_1d;
    else if (ntok == 3)
      format = GridFormat::text_2d;
    else
      throw ParseError(header.number, "header must be '<n> <h>' or '<rows> <cols> <h>'");
  }
  const std::size_t want = format == GridFormat::text_1d ? 2 : 3;
  if (ntok != want)
    throw ParseError(header.number, "header must have " + std::to_string(want) + " fields, got " +
                                        std::to_string(ntok));
  std::vector<std::size_t> shape;
  for (std::size_t i = 0; i + 1 < ntok; ++i) shape.push_back(parse_extent(header.tokens[i], header.number));
  const double h = parse_real(header.tokens.back(), header.number);
  if (!(h > 0)) throw ParseError(header.number, "cell size must be positive");

  std::vector<double> samples;
  if (format == GridFormat::text_1d) {
    for (std::size_t l = 1; l < lines.size(); ++l)
      for (auto tok : lines[l].tokens) {
        if (samples.size() == shape[0])
          throw ParseError(lines[l].number, "more than " + std::to_string(shape[0]) + " samples");
        samples.push_back(parse_real(tok, lines[l].number));
      }
    if (samples.size() != shape[0]) {
      const std::size_t at = lines.back().number;
      throw ParseError(at, "expected " + std::to_string(shape[0]) + " samples, got " +
                               std::to_string(samples.size()));
    }
  } else {
    const std::size_t rows = shape[0], cols = shape[1];
    if (lines.size() - 1 != rows) {
      const std::size_t at = lines.size() - 1 > rows ? lines[rows + 1].number : lines.back().number;
      throw ParseError(at, "expected " + std::to_string(rows) + " rows, got " +
                               std::to_string(lines.size() - 1));
    }
    samples.reserve(rows * cols);
    for (std::size_t l = 1; l < lines.size(); ++l) {
      if (lines[l].tokens.size() != cols)
        throw ParseError(lines[l].number, "ragged row: expected " + std::to_string(cols) +
                                              " values, got " + std::to_string(lines[l].tokens.size()));
      for (auto tok : lines[l].tokens) samples.push_back(parse_real(tok, lines[l].number));
    }
  }
  return GridFunction(std::move(shape), h, std::move(samples));
}

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

std::string format_grid(const GridFunction& f) {
  std::string out;
  for (auto s : f.shape()) out += std::to_string(s) + " ";
  out += format_number(f.cell_size()) + "\n";
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      if (c) out += ' ';
      out += format_number(f.at(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)));
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

GridFunction load_grid(const std::filesystem::path& path, GridFormat format) {
  return parse_grid(read_text_file(path), format);
}

void save_grid(const GridFunction& f, const std::filesystem::path& path) {
  write_text_file(path, format_grid(f));
}

}  // namespace slicemax
