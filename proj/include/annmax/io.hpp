#pragma once

// File formats for the command-line tool.
//
// Points: CSV "x,y" per line, optional "x,y" header, ids are 0-based data
// line indices. Queries and results: one JSON object per line.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "annmax/geometry.hpp"
#include "annmax/l1_engine.hpp"

namespace annmax::io {

/// Input error tied to a 1-based line number of the offending file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "l1") return Metric::L1;
  if (s == "l2") return Metric::L2;
  return std::nullopt;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline bool is_header(std::string_view s) {
  std::string t;
  for (const char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return t == "x,y";
}

inline constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

inline bool exact_integer(double v) { return v == std::trunc(v) && std::abs(v) <= kMaxExactInteger; }

}  // namespace detail

/// Shortest text that reads back as v; integers are written without exponent.
inline std::string format_number(double v) {
  char buf[64];
  const auto r = detail::exact_integer(v) ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed)
                                          : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// JSON number: an integer when v is one and fits 53 bits, else a double.
inline nlohmann::ordered_json json_number(double v) {
  if (detail::exact_integer(v)) return static_cast<std::int64_t>(v);
  return v;
}

/// Reads a point file. Blank lines are ignored and take no id.
inline std::vector<Point> read_points(std::istream& in) {
  std::vector<Point> pts;
  std::string raw;
  std::size_t line = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = detail::trim(raw);
    if (s.empty()) continue;
    if (first && detail::is_header(s)) {
      first = false;
      continue;
    }
    first = false;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(line, "expected \"x,y\"");
    const auto x = detail::parse_number(s.substr(0, comma));
    const auto y = detail::parse_number(s.substr(comma + 1));
    if (!x || !y) throw ParseError(line, "invalid coordinate");
    pts.push_back({*x, *y, static_cast<PointId>(pts.size())});
  }
  return pts;
}

inline void write_points(std::ostream& out, std::span<const Point> pts) {
  for (const auto& p : pts) out << format_number(p.x) << ',' << format_number(p.y) << '\n';
}

struct QueryRecord {
  std::vector<Point> q;  // ids are positions in the record
  std::optional<std::size_t> k;
  std::optional<Metric> metric;
};

inline QueryRecord parse_query(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) throw ParseError(line, "record is not an object");
  QueryRecord r;
  const auto q = j.find("q");
  if (q == j.end() || !q->is_array() || q->empty()) throw ParseError(line, "\"q\" must be a non-empty array");
  for (const auto& pt : *q) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      throw ParseError(line, "query point must be [x, y]");
    const double x = pt[0].get<double>(), y = pt[1].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError(line, "non-finite query coordinate");
    r.q.push_back({x, y, static_cast<PointId>(r.q.size())});
  }
  if (const auto k = j.find("k"); k != j.end()) {
    if (!k->is_number_integer() || k->get<std::int64_t>() < 1) throw ParseError(line, "\"k\" must be a positive integer");
    r.k = k->get<std::size_t>();
  }
  if (const auto m = j.find("metric"); m != j.end()) {
    if (!m->is_string() || !parse_metric(m->get<std::string>())) throw ParseError(line, "\"metric\" must be \"l1\" or \"l2\"");
    r.metric = parse_metric(m->get<std::string>());
  }
  return r;
}

/// Reads newline-delimited query records; blank lines are ignored.
inline std::vector<QueryRecord> read_queries(std::istream& in) {
  std::vector<QueryRecord> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (detail::trim(raw).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    out.push_back(parse_query(j, line));
  }
  return out;
}

struct ResultRecord {
  std::size_t query_index = 0;
  std::vector<AggregateResult> answers;  // ascending by (g, id)
  std::size_t nodes_visited = 0;
  std::size_t drag_queries = 0;
  std::int64_t time_ns = 0;
};

inline nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json answers = nlohmann::ordered_json::array();
  for (const auto& a : r.answers)
    answers.push_back({{"id", a.point.id}, {"x", json_number(a.point.x)}, {"y", json_number(a.point.y)}, {"g", json_number(a.g)}});
  return {{"query_index", r.query_index},
          {"answers", std::move(answers)},
          {"stats", {{"nodes_visited", r.nodes_visited}, {"drag_queries", r.drag_queries}, {"time_ns", r.time_ns}}}};
}

}  // namespace annmax::io
