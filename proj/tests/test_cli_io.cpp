#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <locale>
#include <regex>
#include <sstream>

#include "chiral/cli/config.hpp"
#include "chiral/cli/report.hpp"
#include "chiral/cli/svg.hpp"
#include "chiral/cli/trajectory_io.hpp"

namespace chiral::cli {
namespace {

Trajectory sample_full(const Params& p) {
  const FullState z = on_surface({0.3, -0.2}, {0.5, 0.1}, {1.0, 0.4}, p);
  return integrate(Formulation::CanonicalBracketDiracH, flatten(z), p, 1e-2, 0.5);
}

void expect_bitwise_equal(const Trajectory& a, const Trajectory& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.times[i]), std::bit_cast<std::uint64_t>(b.times[i]));
    ASSERT_EQ(a.states[i].size(), b.states[i].size());
    for (Eigen::Index k = 0; k < a.states[i].size(); ++k) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.states[i][k]), std::bit_cast<std::uint64_t>(b.states[i][k]))
          << "sample " << i << " column " << k;
    }
  }
}

TEST(CliIo, FormatDoubleRoundTripsExactly) {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 5e-324, 0.0, -0.0}) {
    const double back = parse_double(format_double(v), "v");
    EXPECT_EQ(std::bit_cast<std::uint64_t>(v), std::bit_cast<std::uint64_t>(back)) << format_double(v);
  }
  EXPECT_THROW(parse_double("1.5x", "v"), InputError);
  EXPECT_THROW(parse_double("", "v"), InputError);
}

TEST(CliIo, CsvRoundTripIsBitwise) {
  const Params p(1.3, 0.7);
  const Trajectory t = sample_full(p);
  std::stringstream ss;
  write_csv(ss, t);
  const Trajectory back = read_csv(ss, p);
  EXPECT_EQ(back.formulation, Formulation::CanonicalBracketDiracH);
  EXPECT_EQ(back.labels, state_labels(Formulation::CanonicalBracketDiracH));
  expect_bitwise_equal(t, back);
}

TEST(CliIo, CsvIsLocaleIndependent) {
  struct CommaDecimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\3"; }
  };
  const Params p(1.0, 1.0);
  const Trajectory t = sample_full(p);
  std::stringstream plain, comma;
  comma.imbue(std::locale(std::locale::classic(), new CommaDecimal));
  write_csv(plain, t);
  write_csv(comma, t);
  EXPECT_EQ(plain.str(), comma.str());
  expect_bitwise_equal(t, read_csv(comma, p));
}

TEST(CliIo, HeaderInference) {
  EXPECT_EQ(infer_formulation(state_labels(Formulation::DarbouxCanonicalH)), Formulation::DarbouxCanonicalH);
  EXPECT_EQ(infer_formulation(state_labels(Formulation::ReducedLiePoisson)), Formulation::ReducedLiePoisson);
  EXPECT_EQ(infer_formulation(state_labels(Formulation::DiracBracketCanonicalH)),
            Formulation::CanonicalBracketDiracH);
  EXPECT_FALSE(infer_formulation({"x", "y", "xdot", "ydot"}).has_value());
  try {
    infer_formulation({"a", "b"});
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.field(), "header");
  }
}

TEST(CliIo, CsvRejectsMalformedRows) {
  std::stringstream bad_width("t,JR,JX,JY,lsq\n0,1,2,3\n");
  EXPECT_THROW(read_csv(bad_width, Params(1, 1)), InputError);
  std::stringstream bad_number("t,JR,JX,JY,lsq\n0,1,2,3,abc\n");
  EXPECT_THROW(read_csv(bad_number, Params(1, 1)), InputError);
  std::stringstream no_t("s,JR,JX,JY,lsq\n");
  EXPECT_THROW(read_csv(no_t, Params(1, 1)), InputError);
}

TEST(CliIo, JsonTrajectoryRoundTrip) {
  const Params p(0.8, 2.0);
  const Trajectory t = sample_full(p);
  const Trajectory back = trajectory_from_json(nlohmann::json::parse(trajectory_to_json(t).dump()));
  EXPECT_EQ(back.formulation, t.formulation);
  EXPECT_EQ(back.params, p);
  expect_bitwise_equal(t, back);

  Trajectory curve = reconstruct(project_full_to_reduced(t, Triple::Dirac, p), {1.0, 0.4}, {0.0, 0.0});
  const Trajectory curve_back = trajectory_from_json(trajectory_to_json(curve));
  EXPECT_FALSE(curve_back.formulation.has_value());
  expect_bitwise_equal(curve, curve_back);
}

TEST(CliIo, ConfigRoundTrip) {
  RunConfig c;
  c.formulation = Formulation::DarbouxCanonicalH;
  c.params = Params(2.0, 0.5);
  c.initial = Vector::LinSpaced(6, -1.0, 1.0);
  c.dt = 2.5e-3;
  c.t_end = 3.0;
  c.method = Method::ImplicitMidpoint;
  c.outputs = {{"a.csv", "csv"}, {"b.json", "json"}};
  const RunConfig back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_TRUE(same_settings(c, back));
  EXPECT_NO_THROW(validate(back));
}

TEST(CliIo, ConfigErrorsNameTheField) {
  auto field_of = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const InputError& e) {
      return e.field();
    }
    return "";
  };
  RunConfig c;
  c.formulation = Formulation::ReducedLiePoisson;
  c.initial = Vector::Zero(8);
  EXPECT_EQ(field_of([&] { validate(c); }), "initial");
  c.initial = Vector::Zero(4);
  c.dt = -1.0;
  EXPECT_EQ(field_of([&] { validate(c); }), "dt");
  c.dt = 1e-3;
  c.t_end = 0.0;
  EXPECT_EQ(field_of([&] { validate(c); }), "t_end");

  RunConfig d;
  d.formulation = Formulation::DarbouxCanonicalH;
  d.params = Params(-1.0, 1.0);
  d.initial = Vector::Zero(6);
  EXPECT_EQ(field_of([&] { validate(d); }), "params.lambda");

  EXPECT_EQ(field_of([] { config_from_json({{"bogus", 1}}); }), "bogus");
  EXPECT_EQ(field_of([] { config_from_json({{"formulation", "nope"}}); }), "formulation");
  EXPECT_EQ(field_of([] { config_from_json({{"dt", "fast"}}); }), "dt");
  EXPECT_EQ(field_of([] { config_from_json({{"params", {{"lambda", 0.0}}}}); }), "params");
  EXPECT_EQ(field_of([] { format_from_path("out.txt"); }), "outputs");
}

TEST(CliIo, SvgPlotsHavePolylines) {
  const Params p(1.0, 1.0);
  const Trajectory t = sample_full(p);
  for (PlotKind k : {PlotKind::XyCurve, PlotKind::OrbitJxJy, PlotKind::ParaboloidResidual, PlotKind::InvariantDrift}) {
    const std::string svg = render_svg(make_plot(k, t));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
  EXPECT_FALSE(parse_plot_kind("histogram").has_value());
}

TEST(CliIo, FixedPointOrbitIsASinglePoint) {
  const Params p(1.0, 2.0);
  // J_Y = 0 and J_X = l^2 / m is an equilibrium of the reduced flow.
  Vector y0(4);
  y0 << 0.3, 0.5, 0.0, 1.0;
  const Trajectory t = integrate(Formulation::ReducedLiePoisson, y0, p, 1e-2, 1.0);
  const std::string svg = render_svg(make_plot(PlotKind::OrbitJxJy, t));
  const std::regex point("class=\"point\"");
  EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), point), std::sregex_iterator()), 1);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
}

TEST(CliIo, ReportJsonLines) {
  CheckResult r{"demo", "algebra", false, std::numeric_limits<double>::infinity(), 1e-12, 0, "error: x", false};
  const auto j = to_json(r);
  EXPECT_TRUE(j["residual"].is_null());
  EXPECT_FALSE(j["ok"].get<bool>());
  std::ostringstream os;
  write_jsonl(os, {r, r});
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace chiral::cli
