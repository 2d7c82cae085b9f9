#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "annmax/io.hpp"
#include "support.hpp"

using namespace annmax;

namespace {

std::vector<Point> parse(const std::string& text) {
  std::istringstream in(text);
  return io::read_points(in);
}

std::vector<io::QueryRecord> parse_queries(const std::string& text) {
  std::istringstream in(text);
  return io::read_queries(in);
}

std::size_t error_line(const std::string& text, bool points) {
  try {
    if (points) parse(text);
    else parse_queries(text);
  } catch (const io::ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(PointFile, HeaderIsSkippedAndIdsAreDataLines) {
  const auto pts = parse("x,y\n1,1\n5,0\n0,6\n");
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0], (Point{1, 1, 0}));
  EXPECT_EQ(pts[2], (Point{0, 6, 2}));
}

TEST(PointFile, AcceptsFloatsWhitespaceAndCrlf) {
  const auto pts = parse("  2.5 , -3e2\r\n-0.125,+7\n");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].x, 2.5);
  EXPECT_EQ(pts[0].y, -300.0);
  EXPECT_EQ(pts[1].x, -0.125);
  EXPECT_EQ(pts[1].y, 7.0);
}

TEST(PointFile, MalformedLineIsReportedByNumber) {
  EXPECT_EQ(error_line("1,1\n2,2\n3,3\n4,4\n5,5\n6,6\n7;7\n", true), 7u);
  EXPECT_EQ(error_line("x,y\n1,2,3\n", true), 2u);
  EXPECT_EQ(error_line("1,abc\n", true), 1u);
  EXPECT_EQ(error_line("1,nan\n", true), 1u);
  EXPECT_EQ(error_line("1,inf\n", true), 1u);
  EXPECT_EQ(error_line("1,\n", true), 1u);
}

TEST(PointFile, IntegerRoundTripIsByteIdentical) {
  std::mt19937_64 rng(11);
  std::ostringstream text;
  for (int i = 0; i < 2000; ++i)
    text << testutil::uniform_int(rng, -1'000'000, 1'000'000) << ',' << testutil::uniform_int(rng, 0, 999'999) << '\n';
  text << "9007199254740992,-9007199254740992\n0,0\n";
  std::ostringstream out;
  io::write_points(out, parse(text.str()));
  EXPECT_EQ(out.str(), text.str());
}

TEST(PointFile, FloatRoundTripPreservesValues) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({d(rng), d(rng), i});
  std::ostringstream out;
  io::write_points(out, pts);
  EXPECT_EQ(parse(out.str()), pts);
}

TEST(PointFile, EmptyInput) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("x,y\n").empty());
}

TEST(QueryFile, RecordsWithOptionalFields) {
  const auto recs = parse_queries("{\"q\":[[0,0],[2,2]]}\n\n{\"q\":[[1.5,-1]],\"k\":3,\"metric\":\"l2\"}\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].q.size(), 2u);
  EXPECT_EQ(recs[0].q[1], (Point{2, 2, 1}));
  EXPECT_FALSE(recs[0].k);
  EXPECT_FALSE(recs[0].metric);
  EXPECT_EQ(recs[1].k, 3u);
  EXPECT_EQ(recs[1].metric, Metric::L2);
  EXPECT_EQ(recs[1].q[0].x, 1.5);
}

TEST(QueryFile, InvalidRecordsAreReportedByLine) {
  EXPECT_EQ(error_line("{\"q\":[[0,0]]}\n{\"q\":[]}\n", false), 2u);
  EXPECT_EQ(error_line("{\"q\":[[0,0]]}\n\n{oops\n", false), 3u);
  EXPECT_EQ(error_line("{\"q\":[[0,0,1]]}\n", false), 1u);
  EXPECT_EQ(error_line("{\"q\":[[0,0]],\"k\":0}\n", false), 1u);
  EXPECT_EQ(error_line("{\"q\":[[0,0]],\"k\":1.5}\n", false), 1u);
  EXPECT_EQ(error_line("{\"q\":[[0,0]],\"metric\":\"linf\"}\n", false), 1u);
  EXPECT_EQ(error_line("[1,2]\n", false), 1u);
}

TEST(ResultRecord, JsonLayout) {
  io::ResultRecord r;
  r.query_index = 4;
  r.answers = {{Point{1, 1, 0}, 2.0}, {Point{0.5, 6, 2}, 6.5}};
  r.drag_queries = 6;
  r.time_ns = 123;
  EXPECT_EQ(io::to_json(r).dump(),
            "{\"query_index\":4,\"answers\":[{\"id\":0,\"x\":1,\"y\":1,\"g\":2},{\"id\":2,\"x\":0.5,\"y\":6,\"g\":6.5}],"
            "\"stats\":{\"nodes_visited\":0,\"drag_queries\":6,\"time_ns\":123}}");
}

TEST(ResultRecord, LargeIntegersStayExact) {
  EXPECT_EQ(io::json_number(9007199254740992.0).dump(), "9007199254740992");
  EXPECT_EQ(io::format_number(1e6), "1000000");
  EXPECT_EQ(io::format_number(0.1), "0.1");
}
