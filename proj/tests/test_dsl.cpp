// Copyright 2026 The ecpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ecpsim/builtin_circuits.hpp"
#include "ecpsim/dsl.hpp"
#include "ecpsim/dsl_exec.hpp"
#include "ecpsim/report.hpp"

namespace ecpsim::dsl {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Pos = std::pair<std::size_t, std::size_t>;

// Parses `text` and returns the error position, or {0, 0} when it parses.
Pos error_at(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

const std::string kHeader = "circuit c\nparam x\nmode a1 b1 b2 d1 d2\n";

TEST(Expr, PrecedenceAndEvaluation) {
  const auto e = parse_expr("1 - 2 - 3 * 2 / 4");
  EXPECT_DOUBLE_EQ(evaluate(e, {}), -2.5);
  const auto f = parse_expr("sqrt(x) * -(1 - x)");
  EXPECT_DOUBLE_EQ(evaluate(f, {{"x", 0.25}}), -0.375);
  EXPECT_EQ(parse_expr(to_string(f)), f);
  EXPECT_THROW(evaluate(f, {}), BindingError);
}

TEST(Expr, ErrorColumns) {
  try {
    parse_expr("1 + * 2", 4, 10);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4U);
    EXPECT_EQ(e.column(), 14U);
  }
}

TEST(Parse, BuiltinsRoundTrip) {
  for (auto text : {kBuiltinEcp1, kBuiltinEcp2}) {
    const auto doc = parse(text);
    const auto canon = serialize(doc);
    EXPECT_EQ(parse(canon), doc);
    EXPECT_EQ(serialize(parse(canon)), canon);
  }
}

TEST(Parse, ShippedCircuitsMatchBuiltins) {
  EXPECT_EQ(parse(slurp(ECPSIM_CIRCUIT_DIR "/ecp1.ecp")), parse(kBuiltinEcp1));
  EXPECT_EQ(parse(slurp(ECPSIM_CIRCUIT_DIR "/ecp2.ecp")), parse(kBuiltinEcp2));
}

TEST(Parse, DocumentQueries) {
  const auto doc = parse(kBuiltinEcp2);
  EXPECT_EQ(doc.name(), "ecp2");
  EXPECT_EQ(doc.output_modes(), (std::vector<std::string>{"a1", "b10"}));
  EXPECT_EQ(doc.params(), (std::vector<std::string>{"alpha_sq", "gamma_sq", "t_plus", "t_minus"}));
}

TEST(Parse, CommentsAndBlankLinesIgnored) {
  const auto a = parse(kHeader + "source a1 pol=H amp=1\noutput a1\n");
  const auto b = parse("# c\n\n" + kHeader + "source a1 pol=H amp=1   # trailing\n\noutput a1\n");
  EXPECT_EQ(a, b);
}

TEST(ParseErrors, Positions) {
  // unknown keyword: line 4, column 1
  EXPECT_EQ(error_at(kHeader + "mirror a1\noutput a1\n"), Pos(4, 1));
  // undeclared mode at the value of in2
  EXPECT_EQ(error_at(kHeader + "bs in1=b1 in2=zz out1=d1 out2=d2\noutput a1\n"),
            Pos(4, 15));
  // constant transmission out of range
  EXPECT_EQ(error_at(kHeader + "vbs in=b1 reflect=d1 transmit=d2 t=1.5\noutput a1\n"),
            Pos(4, 36));
  // undeclared parameter inside an expression
  EXPECT_EQ(error_at(kHeader + "source a1 pol=H amp=sqrt(y)\noutput a1\n").first, 4U);
  // missing output: reported after the last line
  EXPECT_EQ(error_at(kHeader + "source a1 pol=H amp=1\n"), Pos(5, 1));
  // bad polarization at its value
  EXPECT_EQ(error_at(kHeader + "source a1 pol=D amp=1\noutput a1\n"), Pos(4, 15));
  // duplicate field
  EXPECT_EQ(error_at(kHeader + "source a1 pol=H pol=V amp=1\noutput a1\n").first, 4U);
}

TEST(ParseErrors, Structure) {
  // a port consumed twice in one section
  EXPECT_NE(error_at(kHeader + "bs in1=a1 in2=b1 out1=d1 out2=d2\nbs in1=a1 in2=b2 out1=d1 out2=d2\noutput a1\n").first, 0U);
  // flip without a detect block
  EXPECT_NE(error_at(kHeader + "flip mode=b1 when=d1\noutput a1\n").first, 0U);
  // detector that is also an output
  EXPECT_NE(error_at(kHeader + "detect group=g modes=d1,d2 require=exactly_one\noutput d1\n").first, 0U);
}

TEST(Exec, MatchesNativeProtocol) {
  const auto e = EntanglementParams::from_alpha_sq(0.7);
  const auto p = PolarizationParams::from_gamma_sq(0.35);
  const auto ideal = DetectorModel::analytic(0.9);
  ExecOptions x;
  x.eta = 0.9;
  const auto d1 = execute(parse(kBuiltinEcp1), {{"alpha_sq", 0.7}, {"gamma_sq", 0.35}, {"t1", 0.7}, {"t2", 0.7}}, x);
  EXPECT_EQ(to_json_text(d1), to_json_text(run_ecp1(e, p, 0.7, 0.7, AccountingMode::PaperBranch, ideal)));

  const auto sched = vbs_schedule(e, 3);
  x.rounds = 3;
  x.accounting = AccountingMode::JointCoherent;
  x.per_round = {{"t_plus", sched.plus}, {"t_minus", sched.minus}};
  const auto d2 = execute(parse(kBuiltinEcp2), {{"alpha_sq", 0.7}, {"gamma_sq", 0.35}}, x);
  EXPECT_EQ(to_json_text(d2), to_json_text(run_ecp2(e, p, sched, 3, AccountingMode::JointCoherent, ideal)));
}

TEST(Exec, BindingErrors) {
  const auto doc = parse(kBuiltinEcp1);
  EXPECT_THROW(execute(doc, {{"gamma_sq", 0.5}, {"t1", 0.5}, {"t2", 0.5}}), BindingError);
  EXPECT_THROW(execute(doc, {{"alpha_sq", 0.5}, {"gamma_sq", 0.5}, {"t1", 1.5}, {"t2", 0.5}}), BindingError);
}

}  // namespace
}  // namespace ecpsim::dsl
