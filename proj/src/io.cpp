#include "apfree/io.hpp"

#include <charconv>
#include <cstdio>
#include <string_view>
#include <vector>

namespace apfree::io {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::int64_t parse_positive(std::string_view token, std::size_t line) {
  if (token.empty()) throw ParseError(line, "expected a positive integer");
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) throw ParseError(line, "integer out of 64-bit range");
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "not an integer: '" + std::string(token) + "'");
  }
  if (value < 1) throw ParseError(line, "value must be positive, got " + std::string(token));
  return value;
}

// Calls fn(line_number, content) for each line. A single trailing LF does not
// produce an extra empty line; any other empty line is an error.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') throw ParseError(number, "CR line endings are not accepted");
    if (line.empty()) throw ParseError(number, "empty line");
    fn(number, std::string_view(line));
  }
}

}  // namespace

NaturalSet read_natural_set(std::istream& in) {
  std::vector<std::int64_t> values;
  for_each_line(in, [&](std::size_t number, std::string_view line) {
    const std::int64_t v = parse_positive(line, number);
    if (!values.empty() && v <= values.back()) {
      throw ParseError(number, "elements must be strictly increasing (" + std::to_string(v) +
                                   " after " + std::to_string(values.back()) + ")");
    }
    values.push_back(v);
  });
  return NaturalSet(std::move(values));
}

void write_natural_set(std::ostream& out, const NaturalSet& a) {
  for (auto v : a) out << v << '\n';
}

PointSet read_point_set(std::istream& in) {
  std::vector<Point> points;
  std::unordered_set<Point, PointHash> seen;
  for_each_line(in, [&](std::size_t number, std::string_view line) {
    const auto space = line.find(' ');
    if (space == std::string_view::npos) throw ParseError(number, "expected 'x y'");
    const Point p{parse_positive(line.substr(0, space), number), parse_positive(line.substr(space + 1), number)};
    if (!seen.insert(p).second) {
      throw ParseError(number, "duplicate point " + std::to_string(p.x) + " " + std::to_string(p.y));
    }
    points.push_back(p);
  });
  return PointSet(std::move(points));
}

void write_point_set(std::ostream& out, const PointSet& b) {
  for (const auto& p : b) out << p.x << ' ' << p.y << '\n';
}

nlohmann::ordered_json to_json(const ApWitness& w) {
  nlohmann::ordered_json j;
  j["start"] = w.start;
  j["diff"] = w.diff;
  j["length"] = w.length;
  return j;
}

nlohmann::ordered_json to_json(const GridWitness& w) {
  nlohmann::ordered_json j;
  j["x0"] = w.x0;
  j["y0"] = w.y0;
  j["side"] = w.side;
  j["size"] = w.size;
  return j;
}

ApWitness ap_witness_from_json(const nlohmann::json& j) {
  ApWitness w{j.at("start").get<std::int64_t>(), j.at("diff").get<std::int64_t>(),
              j.at("length").get<std::int64_t>()};
  w.validate();
  return w;
}

GridWitness grid_witness_from_json(const nlohmann::json& j) {
  GridWitness w{j.at("x0").get<std::int64_t>(), j.at("y0").get<std::int64_t>(), j.at("side").get<std::int64_t>(),
                j.at("size").get<std::int64_t>()};
  w.validate();
  return w;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace apfree::io
