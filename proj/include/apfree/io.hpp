#pragma once

// Text formats for sets and witnesses.
//
//   NaturalSet: one positive integer per line, strictly increasing, LF endings.
//   PointSet:   "x y" per line (single space), written in row-major order.
//   Witnesses:  single-line JSON objects.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "apfree/core.hpp"

namespace apfree::io {

/// Malformed input file; the message carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

NaturalSet read_natural_set(std::istream& in);
void write_natural_set(std::ostream& out, const NaturalSet& a);

PointSet read_point_set(std::istream& in);
void write_point_set(std::ostream& out, const PointSet& b);

nlohmann::ordered_json to_json(const ApWitness& w);
nlohmann::ordered_json to_json(const GridWitness& w);
ApWitness ap_witness_from_json(const nlohmann::json& j);
GridWitness grid_witness_from_json(const nlohmann::json& j);

/// {"found":false} or {"found":true,"witness":{...}}.
template <typename Witness>
nlohmann::ordered_json detection_json(const std::optional<Witness>& w) {
  nlohmann::ordered_json j;
  j["found"] = w.has_value();
  if (w) j["witness"] = to_json(*w);
  return j;
}

/// printf("%.15g") formatting used by every CSV table.
std::string format_double(double v);

}  // namespace apfree::io
