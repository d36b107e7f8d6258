#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "pangles/serialize.hpp"

using namespace pangles;

namespace {

ErrorCode parse_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::NotFinite;
}

Matrix sample() {
  Matrix A(3, 2);
  A << 1.0 / 3.0, -2.5e-17, std::numbers::pi, 1e300, -0.0, 7.0;
  return A;
}

}  // namespace

TEST(Csv, ParsesRowsAndWhitespace) {
  const Matrix A = parse_csv_matrix("1, 2\n\n 3 ,4\r\n");
  ASSERT_EQ(A.rows(), 2);
  ASSERT_EQ(A.cols(), 2);
  EXPECT_EQ(A(1, 0), 3.0);
  EXPECT_EQ(A(1, 1), 4.0);
}

TEST(Csv, RoundTripIsExact) {
  const Matrix A = sample();
  const Matrix B = parse_csv_matrix(format_csv_matrix(A));
  EXPECT_EQ(A, B);
}

TEST(Csv, Errors) {
  EXPECT_EQ(parse_code([] { parse_csv_matrix("1,2\n3\n"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_csv_matrix("1,x\n"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_csv_matrix("1,2abc\n"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_csv_matrix("\n\n"); }), ErrorCode::Parse);
}

TEST(Json, RoundTripIsExact) {
  const Matrix A = sample();
  EXPECT_EQ(parse_json_matrix(matrix_to_json(A).dump()), A);
}

TEST(Json, Errors) {
  EXPECT_EQ(parse_code([] { parse_json_matrix("{"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_json_matrix(R"({"rows":2,"cols":2,"data":[1,2,3]})"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_json_matrix(R"({"rows":1,"cols":1,"data":["a"]})"); }), ErrorCode::Parse);
  EXPECT_EQ(parse_code([] { parse_json_matrix(R"({"cols":1,"data":[1]})"); }), ErrorCode::Parse);
}

TEST(Files, ExtensionSelectsFormat) {
  const auto dir = std::filesystem::temp_directory_path();
  const Matrix A = sample();
  for (const char* name : {"pangles_io_test.csv", "pangles_io_test.json"}) {
    const std::string path = (dir / name).string();
    write_matrix(path, A);
    EXPECT_EQ(read_matrix(path), A);
    std::remove(path.c_str());
  }
  EXPECT_TRUE(is_json_path("a.json"));
  EXPECT_FALSE(is_json_path("a.csv"));
  EXPECT_EQ(parse_code([&] { read_matrix((dir / "pangles_missing_file.csv").string()); }), ErrorCode::Parse);
}

TEST(Serialize, AngleReportKeys) {
  Matrix f(2, 1), g(2, 1);
  f << 1, 0;
  g << std::cos(0.3), std::sin(0.3);
  const json j = angle_report(Subspace::from_spanning(f), Subspace::from_spanning(g));
  for (const char* key : {"angles_fg", "angles_gf", "between", "gap", "corner_dims"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_NEAR(j["angles_fg"][0]["theta"].get<double>(), 0.3, 1e-15);
  EXPECT_EQ(j["angles_fg"][0]["mult"].get<int>(), 1);
}

TEST(Serialize, DdmCsvColumns) {
  DdmSummary s;
  s.alpha = 0.6;
  s.beta = 0.4;
  s.cg_iters_mult = 2;
  const std::string csv = ddm_summary_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "alpha,beta,h,cos2_analytic,cos2_numeric,richardson_factor,cg_iters_mult,cg_iters_add");
  EXPECT_NE(csv.find(",2,\n"), std::string::npos);
}
