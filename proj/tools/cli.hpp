#pragma once

// Subcommands of the annmax tool: query, verify, bench.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "annmax/annmax.hpp"
#include "annmax/io.hpp"

namespace annmax::cli {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2 };

#ifdef ANNMAX_FAULT_INJECTION
inline constexpr bool kFaultInjected = true;
#else
inline constexpr bool kFaultInjected = false;
#endif

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Indexes over one point set, built on first use.
class Engines {
 public:
  explicit Engines(std::vector<Point> P) : points_(std::move(P)) {}

  const std::vector<Point>& points() const { return points_; }

  const DragIndex& l1() {
    if (!l1_) l1_.emplace(points_);
    return *l1_;
  }
  const L2Index& l2() {
    if (!l2_) l2_.emplace(points_);
    return *l2_;
  }

 private:
  std::vector<Point> points_;
  std::optional<DragIndex> l1_;
  std::optional<L2Index> l2_;
};

/// Answers one record. Top-k is used when requested on the command line or
/// by the record's "k"; it exists for L1 only.
inline io::ResultRecord answer(Engines& e, const io::QueryRecord& rec, Metric metric, bool topk, std::size_t index) {
  io::ResultRecord r;
  r.query_index = index;
  QueryStats st;
  const bool want_k = topk || rec.k.has_value();
  if (metric == Metric::L2) {
    if (want_k) throw UsageError("top-k queries are available for l1 only");
    r.answers.push_back(l2_query(e.l2(), rec.q, &st));
  } else if (want_k) {
    r.answers = l1_top_k(e.l1(), rec.q, rec.k.value_or(1), &st);
  } else {
    r.answers.push_back(l1_query(e.l1(), rec.q, &st));
  }
  r.nodes_visited = st.nodes_visited;
  r.drag_queries = st.drag_queries;
  r.time_ns = st.time_ns;
  return r;
}

inline constexpr int kGridSize = 1'000'000;

inline std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> coord(0, kGridSize - 1);
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int x = coord(rng);
    pts[i] = {static_cast<double>(x), static_cast<double>(coord(rng)), static_cast<PointId>(i)};
  }
  return pts;
}

struct Instance {
  std::vector<Point> P;
  std::vector<Point> Q;
  std::size_t k = 1;
};

/// Instance `index` of the stream for `seed`: n <= 200, m <= 50 (40 for L2),
/// k uniform in [1, n].
inline Instance random_instance(std::uint64_t seed, std::uint64_t index, Metric metric) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, metric == Metric::L1 ? 50 : 40)(rng);
  Instance inst;
  inst.P = random_points(rng, n);
  inst.Q = random_points(rng, m);
  inst.k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
  return inst;
}

/// Why two answer lists differ, or nothing when they agree. L1 must match
/// exactly; L2 ids must match and g within 1e-9 relative.
inline std::optional<std::string> compare(const std::vector<AggregateResult>& got,
                                          const std::vector<AggregateResult>& want, Metric metric) {
  if (got.size() != want.size())
    return "expected " + std::to_string(want.size()) + " answers, got " + std::to_string(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const bool g_ok = metric == Metric::L1 ? got[i].g == want[i].g
                                           : std::abs(got[i].g - want[i].g) <= 1e-9 * std::max(1.0, std::abs(want[i].g));
    if (got[i].point.id != want[i].point.id || !g_ok)
      return "answer " + std::to_string(i) + ": expected id " + std::to_string(want[i].point.id) + " g " +
             io::format_number(want[i].g) + ", got id " + std::to_string(got[i].point.id) + " g " +
             io::format_number(got[i].g);
  }
  return std::nullopt;
}

/// Engine and oracle answers for one record.
inline std::optional<std::string> check(Engines& e, const io::QueryRecord& rec, Metric metric, bool topk,
                                        std::size_t index) {
  auto got = answer(e, rec, metric, topk, index).answers;
  if constexpr (kFaultInjected) {
    if (index == 0) got.front().g += 1;
  }
  const bool want_k = topk || rec.k.has_value();
  const auto want = want_k ? oracle::brute_top_k(e.points(), rec.q, rec.k.value_or(1), metric)
                           : std::vector<AggregateResult>{oracle::brute_query(e.points(), rec.q, metric)};
  return compare(got, want, metric);
}

struct Options {
  std::string points;
  std::string queries;
  std::string metric = "l1";
  bool topk = false;
  std::uint64_t seed = 0;
  std::size_t random = 0;
  std::size_t n = 1000;
  std::size_t m = 10;
  std::size_t count = 100;
  bool json = false;
};

inline Metric metric_of(const std::string& s) {
  if (auto m = io::parse_metric(s)) return *m;
  throw UsageError("unknown metric \"" + s + "\"");
}

inline std::vector<Point> load_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return io::read_points(in);
  } catch (const io::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline std::vector<io::QueryRecord> load_queries(const std::string& path, Metric metric, bool topk) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::vector<io::QueryRecord> recs;
  try {
    recs = io::read_queries(in);
  } catch (const io::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
  for (std::size_t i = 0; i < recs.size(); ++i)
    if (recs[i].metric.value_or(metric) == Metric::L2 && (topk || recs[i].k))
      throw UsageError("record " + std::to_string(i) + ": top-k queries are available for l1 only");
  return recs;
}

inline int cmd_query(const Options& o, std::ostream& out) {
  const Metric metric = metric_of(o.metric);
  if (metric == Metric::L2 && o.topk) throw UsageError("--topk is available for l1 only");
  Engines e(load_points(o.points));
  const auto recs = load_queries(o.queries, metric, o.topk);
  if (!recs.empty() && e.points().empty()) throw UsageError(o.points + ": no points");
  for (std::size_t i = 0; i < recs.size(); ++i)
    out << io::to_json(answer(e, recs[i], recs[i].metric.value_or(metric), o.topk, i)).dump() << '\n';
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const Metric metric = metric_of(o.metric);
  if (metric == Metric::L2 && o.topk) throw UsageError("--topk is available for l1 only");
  std::size_t total = 0, ok = 0;
  bool reported = false;
  auto record = [&](const std::optional<std::string>& why, const std::string& where) {
    ++total;
    if (!why) {
      ++ok;
    } else if (!reported) {
      out << "first mismatch at " << where << ": " << *why << '\n';
      reported = true;
    }
  };

  if (o.random > 0) {
    for (std::size_t i = 0; i < o.random; ++i) {
      const Instance inst = random_instance(o.seed, i, metric);
      Engines e(inst.P);
      const std::string where = "instance " + std::to_string(i) + " (seed " + std::to_string(o.seed) + ")";
      auto plain = check(e, io::QueryRecord{inst.Q, std::nullopt, metric}, metric, false, i);
      if (!plain && metric == Metric::L1) plain = check(e, io::QueryRecord{inst.Q, inst.k, metric}, metric, true, i);
      record(plain, where);
    }
  } else {
    Engines e(load_points(o.points));
    const auto recs = load_queries(o.queries, metric, o.topk);
    if (!recs.empty() && e.points().empty()) throw UsageError(o.points + ": no points");
    for (std::size_t i = 0; i < recs.size(); ++i)
      record(check(e, recs[i], recs[i].metric.value_or(metric), o.topk, i), "record " + std::to_string(i));
  }
  out << ok << '/' << total << " ok\n";
  return ok == total ? kOk : kMismatch;
}

inline int cmd_bench(const Options& o, std::ostream& out) {
  const Metric metric = metric_of(o.metric);
  if (o.n < 1) throw UsageError("--n must be at least 1");
  if (o.m < 1) throw UsageError("--m must be at least 1");
  std::mt19937_64 rng(o.seed);
  Engines e(random_points(rng, o.n));
  const auto t0 = std::chrono::steady_clock::now();
  if (metric == Metric::L1) e.l1();
  else e.l2();
  const double build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::int64_t> times;
  double work = 0.0;
  for (std::size_t i = 0; i < o.count; ++i) {
    const io::QueryRecord rec{random_points(rng, o.m), std::nullopt, metric};
    const auto r = answer(e, rec, metric, false, i);
    times.push_back(r.time_ns);
    work += static_cast<double>(metric == Metric::L1 ? r.drag_queries : r.nodes_visited);
  }
  std::sort(times.begin(), times.end());
  auto pct = [&](double p) {
    if (times.empty()) return 0.0;
    const auto i = static_cast<std::size_t>(std::ceil(p * static_cast<double>(times.size()))) - 1;
    return static_cast<double>(times[std::min(i, times.size() - 1)]) / 1e3;
  };
  const double mean = o.count ? work / static_cast<double>(o.count) : 0.0;
  const std::string work_name = metric == Metric::L1 ? "mean_drag_queries" : "mean_nodes_visited";

  if (o.json) {
    const nlohmann::ordered_json j{{"metric", o.metric}, {"n", o.n},         {"m", o.m},          {"queries", o.count},
                           {"seed", o.seed},     {"build_ms", build_ms}, {"p50_us", pct(0.5)}, {"p95_us", pct(0.95)},
                           {work_name, mean}};
    out << j.dump() << '\n';
    return kOk;
  }
  out << std::left << std::setw(8) << "metric" << std::right << std::setw(10) << "n" << std::setw(6) << "m"
      << std::setw(9) << "queries" << std::setw(12) << "build_ms" << std::setw(10) << "p50_us" << std::setw(10)
      << "p95_us" << std::setw(20) << work_name << '\n';
  out << std::fixed << std::setprecision(2) << std::left << std::setw(8) << o.metric << std::right << std::setw(10)
      << o.n << std::setw(6) << o.m << std::setw(9) << o.count << std::setw(12) << build_ms << std::setw(10)
      << pct(0.5) << std::setw(10) << pct(0.95) << std::setw(20) << mean << '\n';
  return kOk;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aggregate-max nearest neighbour queries under L1 and L2"};
  app.require_subcommand(1);
  Options o;

  auto* query = app.add_subcommand("query", "Answer each query record, one JSON result per line");
  query->add_option("--points", o.points, "CSV point file")->required();
  query->add_option("--queries", o.queries, "JSON-lines query file")->required();
  query->add_option("--metric", o.metric, "l1 or l2");
  query->add_flag("--topk", o.topk, "return the k best points (l1 only)");

  auto* verify = app.add_subcommand("verify", "Compare engine answers against brute force");
  verify->add_option("--points", o.points, "CSV point file");
  verify->add_option("--queries", o.queries, "JSON-lines query file");
  verify->add_option("--metric", o.metric, "l1 or l2");
  verify->add_flag("--topk", o.topk, "check top-k answers (l1 only)");
  verify->add_option("--seed", o.seed, "seed for --random");
  verify->add_option("--random", o.random, "number of generated instances");

  auto* bench = app.add_subcommand("bench", "Time index build and queries on random data");
  bench->add_option("--n", o.n, "number of points");
  bench->add_option("--m", o.m, "query points per query");
  bench->add_option("--metric", o.metric, "l1 or l2");
  bench->add_option("--seed", o.seed, "random seed");
  bench->add_option("--queries", o.count, "number of queries");
  bench->add_flag("--json", o.json, "print one JSON line instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (query->parsed()) return cmd_query(o, out);
    if (verify->parsed()) {
      if (o.random == 0 && (o.points.empty() || o.queries.empty()))
        throw UsageError("verify needs --points and --queries, or --random N");
      return cmd_verify(o, out);
    }
    return cmd_bench(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace annmax::cli
