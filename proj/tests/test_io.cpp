// Copyright 2026 The Chroma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "chroma/io.hpp"

namespace chroma {
namespace {

TEST(FormatReal, SeventeenDigitsRoundTrip) {
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_real(2.0), "2");
  EXPECT_EQ(io::format_real(std::numeric_limits<double>::quiet_NaN()), "null");
  EXPECT_EQ(io::format_real(std::numeric_limits<double>::infinity()), "null");
  Rng rng(1);
  for (int k = 0; k < 10'000; ++k) {
    const double v = std::ldexp(rng.uniform() - 0.5, static_cast<int>(rng.below(200)) - 100);
    EXPECT_EQ(std::strtod(io::format_real(v).c_str(), nullptr), v);
  }
}

TEST(Dump, LayoutAndParseBack) {
  const io::json j = {{"b", 1.0 / 3.0}, {"a", {1, 2, 3}}, {"c", {{"x", nullptr}}}, {"s", "t"}};
  const std::string text = io::dump(j);
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(text.find("[1, 2, 3]"), std::string::npos);
  EXPECT_EQ(io::json::parse(text), j);
  EXPECT_EQ(io::dump(io::json::parse(text)), text);
  EXPECT_EQ(io::dump(io::json::object()), "{}");
  EXPECT_EQ(io::dump(io::json::array()), "[]");
}

TEST(Packing, RoundTrip) {
  const SphereSpec spec(3, 1.7);
  const CapPacking p = build_packing(spec, 0.5, {2000, 5000}, 2);
  const ForbiddenSet fs(p, 0.4);
  const io::json j = io::json::parse(io::dump(io::to_json(fs)));
  const ForbiddenSet back = io::forbidden_from_json(j);
  EXPECT_EQ(back.packing().centers, p.centers);
  EXPECT_EQ(back.lambda(), 0.4);
  EXPECT_EQ(back.phi(), 0.5);
  EXPECT_EQ(back.gamma(), fs.gamma());
  EXPECT_FALSE(back.single_piece().has_value());
  EXPECT_EQ(j.at("centers").size(), p.size());
  EXPECT_EQ(j.at("centers")[0].size(), 4u);
}

TEST(Packing, RejectsWrongDimension) {
  const io::json j = {{"n", 2}, {"R", 1.0}, {"phi", 0.3}, {"centers", {{1.0, 0.0}}}};
  EXPECT_THROW(io::packing_from_json(j), DomainError);
  const io::json off = {{"n", 2}, {"R", 1.0}, {"phi", 0.3}, {"centers", {{2.0, 0.0, 0.0}}}};
  EXPECT_THROW(io::packing_from_json(off), InvalidPointError);
}

TEST(Hypergraph, ParseAndValidate) {
  const auto g = io::hypergraph_from_json(io::json::parse(R"({"vertices": 3, "edges": [[0, 1], [2]]})"));
  EXPECT_EQ(g.vertices, 3u);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_THROW(io::hypergraph_from_json(io::json::parse(R"({"vertices": 2, "edges": [[0, 5]]})")), DomainError);
  EXPECT_EQ(io::to_json(g)["edges"][1][0], 2);
}

TEST(Rotations, FlatRowMajor) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_EQ(io::flat(m), io::json::parse("[1, 2, 3, 4]"));
}

TEST(Files, WriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "chroma_io_test";
  std::filesystem::remove_all(dir);
  io::write_json(dir / "sub" / "x.json", io::json{{"v", 0.1}});
  EXPECT_DOUBLE_EQ(io::read_json(dir / "sub" / "x.json").at("v").get<double>(), 0.1);
  EXPECT_THROW(io::read_json(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace chroma
