#include "cqed/sweep.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace cqed;

namespace {

SweepSpec spec_for(Protocol p, Mode m, std::vector<Axis> axes) {
  SweepSpec s;
  s.protocol = p;
  s.mode = m;
  s.axes = std::move(axes);
  return s;
}

std::string render(const std::vector<ResultRow>& rows, OutputFormat f) {
  std::ostringstream os;
  write_rows(os, rows, f);
  return os.str();
}

}  // namespace

TEST_CASE("single points") {
  PointParams p;
  p.alpha = 0.6;
  const auto opt = run(Protocol::OptimalEcp, Mode::Ideal, p);
  CHECK(opt.eta_sim == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(opt.fidelity_sim == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(opt.abs_d_eta <= 1e-12);

  p.f0 = 0.5;
  CHECK(run(Protocol::Epp, Mode::Ideal, p).fidelity_sim == doctest::Approx(0.5).epsilon(1e-12));

  PointParams q;
  q.alpha = 0.6;
  q.g_over_kappa = 0.8;
  q.delta_over_kappa = 0.0566;
  const auto eff = run(Protocol::EfficientEcp, Mode::Practical, q);
  CHECK(std::abs(eff.eta_sim - eff.eta_analytic) <= 1e-9);
  CHECK(eff.abs_d_eta == std::abs(eff.eta_sim - eff.eta_analytic));
  CHECK(eff.abs_d_fidelity == std::abs(eff.fidelity_sim - eff.fidelity_analytic));
}

TEST_CASE("missing closed forms are reported as NaN") {
  PointParams p;
  p.alpha = 0.8;
  const auto swapped = run(Protocol::OptimalEcp, Mode::Practical, p);
  CHECK(std::isnan(swapped.eta_analytic));
  CHECK(std::isnan(swapped.abs_d_eta));
  p.alpha = 0.4;
  CHECK(std::isnan(run(Protocol::GhzEcp, Mode::Practical, p).eta_analytic));
  CHECK(run(Protocol::GhzEcp, Mode::Ideal, p).eta_analytic == doctest::Approx(0.32));
}

TEST_CASE("invalid points are rejected") {
  PointParams p;
  p.alpha = 1.2;
  CHECK_THROWS_AS(run(Protocol::OptimalEcp, Mode::Ideal, p), std::invalid_argument);
  PointParams q;
  q.f0 = 1.5;
  CHECK_THROWS_AS(run(Protocol::Epp, Mode::Ideal, q), std::invalid_argument);
  PointParams r;
  r.g_over_kappa = -1.0;
  CHECK_THROWS_AS(run(Protocol::Epp, Mode::Ideal, r), std::invalid_argument);
  PointParams s;
  CHECK_THROWS_AS(s.set("rounds", 1.5), std::invalid_argument);
  CHECK_THROWS_AS(s.set("ghz-size", 1), std::invalid_argument);
  CHECK_THROWS_AS(s.set("colour", 1), std::invalid_argument);
}

TEST_CASE("axis parsing") {
  const Axis a = parse_axis("g-over-kappa:0.1:4:40");
  CHECK(a.name == "g-over-kappa");
  CHECK(a.start == 0.1);
  CHECK(a.stop == 4.0);
  CHECK(a.steps == 40);
  const auto v = a.values();
  REQUIRE(v.size() == 40);
  CHECK(v.front() == 0.1);
  CHECK(v.back() == 4.0);
  CHECK(parse_axis("alpha:0.3:0.9:1").values() == std::vector<double>{0.3});

  for (const char* bad : {"alpha:0:1", "alpha:0:1:0", "alpha:0:1:2.5", "alpha:x:1:3",
                          "spin:0:1:3", "alpha:0:1:3:4", ""}) {
    CHECK_THROWS_AS(parse_axis(bad), std::invalid_argument);
  }
}

TEST_CASE("sweep specification validation") {
  auto s = spec_for(Protocol::Epp, Mode::Ideal, {parse_axis("f0:0.5:1:3")});
  s.fixed["f0"] = 0.7;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.fixed.clear();
  s.axes.push_back(parse_axis("f0:0.5:1:3"));
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.axes.pop_back();
  s.fixed["spin"] = 1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.fixed.clear();
  s.shots = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("row count and order") {
  const auto rows = sweep(spec_for(Protocol::Epp, Mode::Practical,
                                   {parse_axis("g-over-kappa:0.5:2:4"), parse_axis("f0:0.6:0.9:3")}));
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double g = 0.5 + 0.5 * static_cast<double>(i / 3);
    const double f = 0.6 + 0.15 * static_cast<double>(i % 3);
    CHECK(rows[i].params.g_over_kappa == doctest::Approx(g));
    CHECK(rows[i].params.f0 == doctest::Approx(f));
  }
}

TEST_CASE("a single-step axis equals a single run") {
  auto s = spec_for(Protocol::EfficientEcp, Mode::Practical, {parse_axis("alpha:0.3:0.9:1")});
  s.fixed["g-over-kappa"] = 1.3;
  const auto rows = sweep(s);
  REQUIRE(rows.size() == 1);
  PointParams p;
  p.alpha = 0.3;
  p.g_over_kappa = 1.3;
  const auto one = run(Protocol::EfficientEcp, Mode::Practical, p);
  CHECK(render(rows, OutputFormat::Csv) == render({one}, OutputFormat::Csv));
}

TEST_CASE("sweeps are deterministic") {
  auto s = spec_for(Protocol::Epp, Mode::Practical,
                    {parse_axis("g-over-kappa:0.2:4:9"), parse_axis("f0:0.55:0.95:5")});
  s.seed = 99;
  s.shots = 1000;
  const auto a = render(sweep(s), OutputFormat::Csv);
  const auto b = render(sweep(s), OutputFormat::Csv);
  CHECK(a == b);
  CHECK(render(sweep(s), OutputFormat::Json) == render(sweep(s), OutputFormat::Json));
  s.seed = 100;
  CHECK(render(sweep(s), OutputFormat::Csv) != a);
}

TEST_CASE("seeded sampling stays near the exact probability") {
  auto s = spec_for(Protocol::OptimalEcp, Mode::Ideal, {parse_axis("alpha:0.2:0.6:3")});
  s.seed = 5;
  s.shots = 40000;
  for (const auto& r : sweep(s)) {
    REQUIRE(r.eta_sampled.has_value());
    const double sd = std::sqrt(r.eta_sim * (1 - r.eta_sim) / s.shots);
    CHECK(std::abs(*r.eta_sampled - r.eta_sim) <= 5 * sd);
  }
  s.seed.reset();
  CHECK_FALSE(sweep(s).front().eta_sampled.has_value());
}

TEST_CASE("purification fidelity grows with coupling strength") {
  auto s = spec_for(Protocol::Epp, Mode::Practical,
                    {parse_axis("f0:0.55:0.95:5"), parse_axis("g-over-kappa:0.2:4:77")});
  const auto rows = sweep(s);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].params.f0 != rows[i - 1].params.f0) continue;
    CHECK(rows[i].fidelity_sim >= rows[i - 1].fidelity_sim - 1e-12);
    CHECK(rows[i].fidelity_final_sim >= rows[i - 1].fidelity_final_sim - 1e-12);
  }
}

TEST_CASE("purification fidelity dips where the coupled reflection vanishes") {
  // r = 0 at g^2 = kappa gamma / 4 on resonance, i.e. g/kappa near 0.119.
  PointParams p;
  p.f0 = 0.7;
  auto at = [&](double g) {
    p.g_over_kappa = g;
    return run(Protocol::Epp, Mode::Practical, p).fidelity_sim;
  };
  CHECK(at(0.10) == doctest::Approx(0.5006).epsilon(1e-3));
  CHECK(at(0.15) == doctest::Approx(0.1823).epsilon(1e-3));
  CHECK(at(0.20) == doctest::Approx(0.4956).epsilon(1e-3));
}

TEST_CASE("acceptance grid agrees between simulation and closed forms") {
  for (const char* a : {"alpha:0.2:0.6:3", "f0:0.6:0.9:4"}) {
    for (Protocol p : {Protocol::OptimalEcp, Protocol::EfficientEcp, Protocol::Epp}) {
      const bool epp = p == Protocol::Epp;
      if (epp != (a[0] == 'f')) continue;
      auto s = spec_for(p, Mode::Practical, {parse_axis("g-over-kappa:0.2:4:20"), parse_axis(a)});
      for (const auto& r : sweep(s)) {
        CHECK(r.abs_d_eta <= 1e-9);
        CHECK(r.abs_d_fidelity <= 1e-9);
      }
    }
  }
}

TEST_CASE("csv output") {
  PointParams p;
  p.alpha = 0.6;
  const auto text = render({run(Protocol::OptimalEcp, Mode::Ideal, p)}, OutputFormat::Csv);
  std::istringstream in(text);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header.rfind("protocol,mode,alpha,f0,g_over_kappa,", 0) == 0);
  CHECK(line.rfind("optimal-ecp,ideal,0.6,0.7,0.8,0.0566,0,0.0566,1,3,0.72,0.72,1,1,", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(line.begin(), line.end(), ','));

  p.alpha = 0.8;
  const auto nan_text = render({run(Protocol::OptimalEcp, Mode::Practical, p)}, OutputFormat::Csv);
  CHECK(nan_text.find(",nan,") != std::string::npos);

  const auto empty = render({}, OutputFormat::Csv);
  CHECK(empty.rfind("protocol,mode,alpha", 0) == 0);
}

TEST_CASE("json output") {
  PointParams p;
  p.alpha = 0.8;
  const auto rows = std::vector<ResultRow>{run(Protocol::OptimalEcp, Mode::Practical, p)};
  const auto j = nlohmann::json::parse(render(rows, OutputFormat::Json));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["protocol"] == "optimal-ecp");
  CHECK(j[0]["mode"] == "practical");
  CHECK(j[0]["eta_analytic"].is_null());
  CHECK(j[0]["rounds"].is_number_integer());
  CHECK(j[0]["eta_sim"].get<double>() == doctest::Approx(rows[0].eta_sim).epsilon(1e-11));
}

TEST_CASE("name round trips") {
  for (Protocol p : {Protocol::OptimalEcp, Protocol::GhzEcp, Protocol::EfficientEcp, Protocol::Epp}) {
    CHECK(parse_protocol(to_string(p)) == p);
  }
  CHECK(parse_mode("practical") == Mode::Practical);
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_protocol("teleport"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mode("noisy"), std::invalid_argument);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}
