#include "maxtsp/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "maxtsp/errors.hpp"

namespace maxtsp {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Non-empty, non-comment lines.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto tokens = split_tokens(text.substr(pos, end - pos));
    if (!tokens.empty() && tokens.front().front() != '#') {
      lines.push_back({number, std::move(tokens)});
    }
    pos = end + 1;
  }
  return lines;
}

double parse_real(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError(line, "expected a finite real, got '" + std::string(tok) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" +
                               std::string(tok) + "'");
  }
  return value;
}

class LineCursor {
 public:
  explicit LineCursor(const std::vector<Line>& lines) : lines_(lines) {}

  bool done() const { return next_ >= lines_.size(); }
  std::size_t last_line() const {
    return lines_.empty() ? 0 : lines_.back().number;
  }
  const Line& take(const char* what) {
    if (done()) throw ParseError(last_line() + 1, std::string("missing ") + what);
    return lines_[next_++];
  }
  const Line* peek() const { return done() ? nullptr : &lines_[next_]; }

 private:
  const std::vector<Line>& lines_;
  std::size_t next_ = 0;
};

const Line& expect_keyword(LineCursor& cur, std::string_view key,
                           std::size_t values) {
  const Line& line = cur.take(std::string(key).c_str());
  if (line.tokens.front() != key || line.tokens.size() != values + 1) {
    throw ParseError(line.number, "expected '" + std::string(key) + "' with " +
                                      std::to_string(values) + " value(s)");
  }
  return line;
}

std::vector<double> read_row(LineCursor& cur, std::size_t width) {
  const Line& line = cur.take("data row");
  if (line.tokens.size() != width) {
    throw ParseError(line.number, "expected " + std::to_string(width) +
                                      " values, found " +
                                      std::to_string(line.tokens.size()));
  }
  std::vector<double> row;
  row.reserve(width);
  for (auto tok : line.tokens) row.push_back(parse_real(tok, line.number));
  return row;
}

// Checks a square matrix with per-row line numbers so rejections point at
// the row where the defect becomes visible.
void check_matrix(const std::vector<std::vector<double>>& m,
                  const std::vector<std::size_t>& row_lines) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string pair =
          "(" + std::to_string(std::min(i, j)) + "," + std::to_string(std::max(i, j)) + ")";
      if (m[i][j] < 0.0) throw ParseError(row_lines[i], "negative distance at " + pair);
      if (i == j && m[i][j] != 0.0) {
        throw ParseError(row_lines[i], "nonzero diagonal at " + pair);
      }
      if (j < i && m[i][j] != m[j][i]) {
        throw ParseError(row_lines[i], "asymmetric distance at pair " + pair);
      }
    }
  }
}

MetricInstance parse_native(const std::vector<Line>& lines) {
  LineCursor cur(lines);
  const Line& magic = expect_keyword(cur, "MAXTSP", 1);
  if (magic.tokens[1] != "1") {
    throw ParseError(magic.number, "unsupported format version '" +
                                       std::string(magic.tokens[1]) + "'");
  }
  const Line& type = expect_keyword(cur, "TYPE", 1);
  const bool points = type.tokens[1] == "POINTS";
  if (!points && type.tokens[1] != "MATRIX") {
    throw ParseError(type.number, "TYPE must be POINTS or MATRIX");
  }
  const Line& count = expect_keyword(cur, "N", 1);
  const std::size_t n = parse_count(count.tokens[1], count.number);
  if (n == 0) throw ParseError(count.number, "N must be positive");

  MetricInstance inst = [&] {
    if (points) {
      const Line& dim_line = expect_keyword(cur, "D", 1);
      const std::size_t d = parse_count(dim_line.tokens[1], dim_line.number);
      if (d == 0) throw ParseError(dim_line.number, "D must be positive");
      Norm norm = Norm::kL2;
      if (const Line* next = cur.peek(); next && next->tokens.front() == "NORM") {
        const Line& norm_line = expect_keyword(cur, "NORM", 1);
        try {
          norm = parse_norm(norm_line.tokens[1]);
        } catch (const InvalidInput& e) {
          throw ParseError(norm_line.number, e.what());
        }
      }
      std::vector<double> coords;
      coords.reserve(n * d);
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = read_row(cur, d);
        coords.insert(coords.end(), row.begin(), row.end());
      }
      return MetricInstance::from_points(PointSet(d, std::move(coords)), norm);
    }
    std::vector<std::vector<double>> m;
    std::vector<std::size_t> row_lines;
    for (std::size_t i = 0; i < n; ++i) {
      if (const Line* next = cur.peek()) row_lines.push_back(next->number);
      m.push_back(read_row(cur, n));
    }
    check_matrix(m, row_lines);
    return MetricInstance::from_matrix(m);
  }();
  if (const Line* extra = cur.peek()) {
    throw ParseError(extra->number, "unexpected data after the last row");
  }
  return inst;
}

// Splits "KEY : VALUE", "KEY: VALUE" and "KEY:VALUE" forms.
std::optional<std::pair<std::string, std::string>> tsplib_field(const Line& line) {
  std::string joined;
  for (std::size_t k = 0; k < line.tokens.size(); ++k) {
    if (k) joined += ' ';
    joined += line.tokens[k];
  }
  const auto colon = joined.find(':');
  if (colon == std::string::npos) return std::nullopt;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(' ');
    const auto e = s.find_last_not_of(' ');
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  return std::make_pair(trim(joined.substr(0, colon)), trim(joined.substr(colon + 1)));
}

MetricInstance parse_tsplib(const std::vector<Line>& lines) {
  std::optional<std::size_t> n;
  std::string type, weight_type, weight_format;
  std::size_t k = 0;
  auto require_header = [&](std::size_t line) {
    if (type != "TSP") throw ParseError(line, "TYPE must be TSP");
    if (!n) throw ParseError(line, "DIMENSION must precede the data section");
    if (*n == 0) throw ParseError(line, "DIMENSION must be positive");
  };

  for (; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const std::string_view head = line.tokens.front();
    if (head == "EOF") break;
    if (head == "NODE_COORD_SECTION") {
      require_header(line.number);
      if (weight_type != "EUC_2D") {
        throw ParseError(line.number, "NODE_COORD_SECTION requires EDGE_WEIGHT_TYPE EUC_2D");
      }
      std::vector<double> xs(*n), ys(*n);
      std::vector<bool> seen(*n, false);
      for (std::size_t i = 0; i < *n; ++i) {
        if (++k >= lines.size()) {
          throw ParseError(lines.back().number + 1, "missing node coordinates");
        }
        const Line& row = lines[k];
        if (row.tokens.size() != 3) {
          throw ParseError(row.number, "expected '<id> <x> <y>'");
        }
        const std::size_t id = parse_count(row.tokens[0], row.number);
        if (id < 1 || id > *n || seen[id - 1]) {
          throw ParseError(row.number, "bad or duplicate node id");
        }
        seen[id - 1] = true;
        xs[id - 1] = parse_real(row.tokens[1], row.number);
        ys[id - 1] = parse_real(row.tokens[2], row.number);
      }
      std::vector<std::vector<double>> m(*n, std::vector<double>(*n, 0.0));
      for (std::size_t i = 0; i < *n; ++i) {
        for (std::size_t j = i + 1; j < *n; ++j) {
          const double dx = xs[i] - xs[j];
          const double dy = ys[i] - ys[j];
          m[i][j] = m[j][i] = std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
        }
      }
      return MetricInstance::from_matrix(m);
    }
    if (head == "EDGE_WEIGHT_SECTION") {
      require_header(line.number);
      if (weight_type != "EXPLICIT" || weight_format != "FULL_MATRIX") {
        throw ParseError(line.number,
                         "EDGE_WEIGHT_SECTION requires EXPLICIT / FULL_MATRIX");
      }
      std::vector<std::vector<double>> m(*n);
      std::vector<std::size_t> row_lines(*n, line.number);
      std::size_t filled = 0;
      while (filled < *n * *n) {
        if (++k >= lines.size()) {
          throw ParseError(lines.back().number + 1, "edge weight section too short");
        }
        const Line& row = lines[k];
        for (auto tok : row.tokens) {
          if (filled == *n * *n) {
            throw ParseError(row.number, "too many edge weights");
          }
          const std::size_t i = filled / *n;
          if (m[i].empty()) row_lines[i] = row.number;
          m[i].push_back(parse_real(tok, row.number));
          ++filled;
        }
      }
      check_matrix(m, row_lines);
      return MetricInstance::from_matrix(m);
    }
    const auto field = tsplib_field(line);
    if (!field) throw ParseError(line.number, "expected 'KEY : VALUE'");
    const auto& [key, value] = *field;
    if (key == "TYPE") {
      type = value;
      if (type != "TSP") throw ParseError(line.number, "unsupported TYPE '" + value + "'");
    } else if (key == "DIMENSION") {
      n = parse_count(value, line.number);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      weight_type = value;
      if (value != "EUC_2D" && value != "EXPLICIT") {
        throw ParseError(line.number, "unsupported EDGE_WEIGHT_TYPE '" + value + "'");
      }
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      weight_format = value;
      if (value != "FULL_MATRIX") {
        throw ParseError(line.number, "unsupported EDGE_WEIGHT_FORMAT '" + value + "'");
      }
    } else if (key != "NAME" && key != "COMMENT") {
      throw ParseError(line.number, "unsupported TSPLIB keyword '" + key + "'");
    }
  }
  throw ParseError(lines.empty() ? 1 : lines.back().number + 1, "no data section");
}

void append_real(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

}  // namespace

MetricInstance parse_instance(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty instance");
  if (lines.front().tokens.front() == "MAXTSP") return parse_native(lines);
  return parse_tsplib(lines);
}

std::string write_instance(const MetricInstance& inst) {
  std::string out = "MAXTSP 1\n";
  const std::size_t n = inst.size();
  if (const auto& pts = inst.points()) {
    out += "TYPE POINTS\nN " + std::to_string(n) + "\nD " + std::to_string(pts->dim()) +
           "\nNORM " + std::string(norm_name(*inst.norm())) + "\n";
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = pts->point(i);
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (k) out += ' ';
        append_real(out, p[k]);
      }
      out += '\n';
    }
    return out;
  }
  out += "TYPE MATRIX\nN " + std::to_string(n) + "\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = inst.row(static_cast<Vertex>(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ' ';
      append_real(out, row[j]);
    }
    out += '\n';
  }
  return out;
}

MetricInstance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace maxtsp
