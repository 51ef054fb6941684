#include <algorithm>
#include <chrono>
#include <cmath>

#include "kform/error.hpp"
#include "kform/levi.hpp"
#include "kform/pp_forms.hpp"
#include "kform/rigidity.hpp"
#include "kform/sampling.hpp"
#include "kform/umehara.hpp"
#include "kform/verify.hpp"
#include "check_runner.hpp"

namespace kform::verify {

bool Report::overall() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.verdict(); });
}

namespace {

void fill_pullback(CheckRecord& rec, const PullbackResult& r) {
  rec.observed = r.pass;
  rec.lambdaHat = r.lambdaHat;
  rec.residual = r.maxResidual;
  rec.details["ratioSpread"] = r.ratioSpread;
  rec.details["samples"] = r.samples;
}

std::vector<Point> sample_points(const Scenario& s) {
  return sample_chart_points(*s.source, s.sampling.count, s.sampling.seed, s.sampling.radius);
}

void run_pullback(const Scenario& s, Runner& run) {
  const MapExpr F = MapExpr::parse(s.map, s.source->dim());
  const auto points = sample_points(s);
  auto one = [&](int p, std::optional<bool> expect) {
    run.check("pullback.p" + std::to_string(p), expect, [&](CheckRecord& rec) {
      fill_pullback(rec, proportionality_test(F, *s.source, *s.target, p, points, s.tolerances.pass));
    });
  };
  one(s.p, s.expect);
  for (const auto& c : s.companions)
    if (c.p != s.p) one(c.p, c.expect);
}

void run_rigidity(const Scenario& s, Runner& run) {
  const MapExpr F = MapExpr::parse(s.map, s.source->dim());
  const auto points = sample_points(s);
  const int m = s.source->dim();
  const bool main_is_isometry = s.expected_factor.has_value();
  constexpr double kProductTol = 1e-8;

  run.check("rigidity.proportional", std::nullopt, [&](CheckRecord& rec) {
    fill_pullback(rec, proportionality_test(F, *s.source, *s.target, s.p, points, s.tolerances.pass));
  });
  run.check("rigidity.eigen_products", main_is_isometry ? std::nullopt : s.expect, [&](CheckRecord& rec) {
    bool all = true;
    for (const auto& w : points) all = all && eigen_products_check(eigen_profile_at(F, *s.source, *s.target, s.p, w), kProductTol);
    rec.observed = all;
    rec.details["p"] = s.p;
    rec.details["m"] = m;
  });
  if (s.p < m) {
    run.check("rigidity.isometry_factor", std::nullopt, [&](CheckRecord& rec) {
      double lo = INFINITY;
      double hi = -INFINITY;
      bool all = true;
      for (const auto& w : points) {
        const auto f = conclude_isometry_factor(eigen_profile_at(F, *s.source, *s.target, s.p, w));
        if (!f) {
          all = false;
          break;
        }
        lo = std::min(lo, *f);
        hi = std::max(hi, *f);
      }
      rec.observed = all && hi - lo <= kIsometrySpreadTol * std::abs(hi);
      if (all) rec.details["factor"] = 0.5 * (lo + hi);
    });
  }
  if (s.expected_factor) {
    run.check("rigidity.isometry", s.expect, [&](CheckRecord& rec) {
      const PointwiseCheck r = isometry_check(F, *s.source, *s.target, points, *s.expected_factor, s.tolerances.pass);
      rec.observed = r.pass;
      rec.residual = r.maxResidual;
      rec.details["factor"] = *s.expected_factor;
    });
  }
  if (s.source->dim() == s.target->dim()) {
    run.check("rigidity.ricci_pullback", std::nullopt, [&](CheckRecord& rec) {
      const PointwiseCheck r = ricci_pullback_check(F, *s.source, *s.target, points, s.tolerances.pass);
      rec.observed = r.pass;
      rec.residual = r.maxResidual;
      rec.details["used"] = r.used;
      if (!r.warnings.empty()) rec.details["warnings"] = r.warnings;
    });
  }
}

void run_levi(const Scenario& s, Runner& run) {
  const auto points = sample_points(s);
  Sampler rng(s.sampling.seed + 1);
  const std::size_t na = binomial(s.source->dim(), s.p);
  run.check("levi.signature", std::nullopt, [&](CheckRecord& rec) {
    std::optional<Signature> first;
    bool constant = true;
    double min_abs = INFINITY;
    for (const auto& z : points) {
      const LeviReport r = levi_form(*s.source, s.p, s.levi_r, z, rng.unit_vector(na), s.tolerances.zero);
      if (!first) first = r.signature;
      constant = constant && r.signature == *first;
      for (double e : r.eigenvalues) min_abs = std::min(min_abs, std::abs(e));
    }
    rec.signature = first;
    rec.observed = constant && (!s.expect_signature || *first == *s.expect_signature);
    rec.details["constant"] = constant;
    rec.details["minAbsEigenvalue"] = min_abs;
    rec.details["dimension"] = first ? first->total() : 0;
  });
}

void run_umehara(const Scenario& s, Runner& run) {
  const UmeharaSpec& u = s.umehara;
  run.check("umehara." + u.series + ".finite_rank", s.expect, [&](CheckRecord& rec) {
    std::optional<MapExpr> F;
    if (!u.map.empty()) F = MapExpr::parse(u.map, u.arity);
    const RankGrowth g = rank_growth(u.series, u.p, u.orders, F ? &*F : nullptr);
    rec.rankTable = g.table;
    rec.observed = g.hint == "bounded";
    rec.details["hint"] = g.hint;
  });
}

void run_relatives(const Scenario& s, Runner& run) {
  const MapExpr F = MapExpr::parse(s.map, s.source->dim());
  const MapExpr G = MapExpr::parse(s.map2, s.source->dim());
  const auto points = sample_points(s);
  run.check("relatives.p" + std::to_string(s.p), s.expect, [&](CheckRecord& rec) {
    fill_pullback(rec, relatives_test(F, G, *s.target, *s.target2, s.source->dim(), s.p, points, s.tolerances.pass));
  });
}

}  // namespace

Report run_scenario(const Scenario& scenario) {
  if (scenario.mode == Mode::Suite) {
    Report rep = run_reference_suite(scenario.sampling.seed);
    rep.scenario = scenario_to_json(scenario);
    return rep;
  }
  Report rep;
  rep.scenario = scenario_to_json(scenario);
  Runner run(rep);
  switch (scenario.mode) {
    case Mode::Pullback:
      run_pullback(scenario, run);
      break;
    case Mode::Rigidity:
      run_rigidity(scenario, run);
      break;
    case Mode::Levi:
      run_levi(scenario, run);
      break;
    case Mode::Umehara:
      run_umehara(scenario, run);
      break;
    case Mode::Relatives:
      run_relatives(scenario, run);
      break;
    case Mode::Suite:
      break;
  }
  std::stable_sort(rep.checks.begin(), rep.checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  return rep;
}

Json report_to_json(const Report& report, bool include_timings) {
  Json j;
  j["tool"] = "kform";
  j["scenario"] = report.scenario;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["verdict"] = c.verdict() ? "PASS" : "FAIL";
    cj["observed"] = c.observed ? "PASS" : "FAIL";
    if (c.expected) cj["expected"] = *c.expected ? "PASS" : "FAIL";
    if (c.lambdaHat) cj["lambdaHat"] = *c.lambdaHat;
    if (c.residual) cj["residual"] = *c.residual;
    if (c.signature)
      cj["signature"] = Json{
          {"negative", c.signature->negative}, {"zero", c.signature->zero}, {"positive", c.signature->positive}};
    if (c.rankTable) {
      Json t = Json::array();
      for (const auto& [n, r] : *c.rankTable) t.push_back(Json::array({n, r}));
      cj["rankTable"] = t;
    }
    if (!c.details.empty()) cj["details"] = c.details;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["overall"] = report.overall() ? "PASS" : "FAIL";
  if (include_timings) {
    Json t = Json::object();
    double total = 0.0;
    for (const auto& [name, sec] : report.timings) {
      t[name] = sec;
      total += sec;
    }
    t["total"] = total;
    j["timings"] = t;
  }
  return j;
}

}  // namespace kform::verify
