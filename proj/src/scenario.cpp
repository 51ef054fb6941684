#include <fstream>
#include <set>
#include <sstream>

#include "kform/error.hpp"
#include "kform/expr.hpp"
#include "kform/verify.hpp"

namespace kform::verify {

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Pullback:
      return "pullback";
    case Mode::Rigidity:
      return "rigidity";
    case Mode::Levi:
      return "levi";
    case Mode::Umehara:
      return "umehara";
    case Mode::Relatives:
      return "relatives";
    case Mode::Suite:
      return "suite";
  }
  return "?";
}

namespace {

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::Pullback, Mode::Rigidity, Mode::Levi, Mode::Umehara, Mode::Relatives, Mode::Suite})
    if (mode_name(m) == s) return m;
  throw ScenarioError("mode", "unknown mode '" + s + "'");
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ScenarioError(where.empty() ? key : where + "." + key, "unknown field");
}

const Json& require(const Json& obj, const std::string& key, const std::string& field) {
  if (!obj.contains(key)) throw ScenarioError(field, "missing required field");
  return obj.at(key);
}

int as_int(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ScenarioError(field, "expected an integer");
  return v.get<int>();
}

double as_number(const Json& v, const std::string& field) {
  if (!v.is_number()) throw ScenarioError(field, "expected a number");
  return v.get<double>();
}

bool as_bool(const Json& v, const std::string& field) {
  if (!v.is_boolean()) throw ScenarioError(field, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ScenarioError(field, "expected a string");
  return v.get<std::string>();
}

SpaceForm parse_space_form(const Json& v, const std::string& field) {
  if (!v.is_object()) throw ScenarioError(field, "expected an object");
  check_keys(v, field, {"kind", "dim", "sig"});
  SpaceKind kind;
  try {
    kind = parse_kind(as_string(require(v, "kind", field + ".kind"), field + ".kind"));
  } catch (const PreconditionError& e) {
    throw ScenarioError(field + ".kind", e.what());
  }
  const int dim = as_int(require(v, "dim", field + ".dim"), field + ".dim");
  if (dim < 1) throw ScenarioError(field + ".dim", "dimension must be >= 1");
  const int sig = v.contains("sig") ? as_int(v.at("sig"), field + ".sig") : dim;
  if (sig < 0 || sig > dim) throw ScenarioError(field + ".sig", "signature must satisfy 0 <= sig <= dim");
  return SpaceForm(kind, dim, sig);
}

std::vector<std::string> parse_map(const Json& v, const std::string& field, int arity, std::size_t components) {
  if (!v.is_array()) throw ScenarioError(field, "expected an array of expression strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    out.push_back(as_string(v[i], f));
    try {
      (void)parse_expr(out.back(), arity);
    } catch (const ParseError& e) {
      throw ScenarioError(f, e.what());
    }
  }
  if (components != 0 && out.size() != components)
    throw ScenarioError(field, "map has " + std::to_string(out.size()) + " components, target dimension is " +
                                   std::to_string(components));
  return out;
}

SpaceForm required_form(const Json& doc, const char* key) { return parse_space_form(require(doc, key, key), key); }

}  // namespace

Scenario parse_scenario(const Json& doc) {
  if (!doc.is_object()) throw ScenarioError("$", "scenario must be a JSON object");
  check_keys(doc, "",
             {"name", "mode", "source", "target", "target2", "map", "map2", "p", "sampling", "tolerances", "companions",
              "expect", "expected_factor", "expect_signature", "levi", "umehara"});
  Scenario s;
  if (doc.contains("name")) s.name = as_string(doc.at("name"), "name");
  s.mode = parse_mode(as_string(require(doc, "mode", "mode"), "mode"));

  if (doc.contains("sampling")) {
    const Json& smp = doc.at("sampling");
    if (!smp.is_object()) throw ScenarioError("sampling", "expected an object");
    check_keys(smp, "sampling", {"count", "seed", "radius"});
    if (smp.contains("count")) {
      const int c = as_int(smp.at("count"), "sampling.count");
      if (c < 1) throw ScenarioError("sampling.count", "must be >= 1");
      s.sampling.count = static_cast<std::size_t>(c);
    }
    if (smp.contains("seed")) {
      if (!smp.at("seed").is_number_unsigned()) throw ScenarioError("sampling.seed", "expected a non-negative integer");
      s.sampling.seed = smp.at("seed").get<std::uint64_t>();
    }
    if (smp.contains("radius")) {
      s.sampling.radius = as_number(smp.at("radius"), "sampling.radius");
      if (!(s.sampling.radius > 0.0)) throw ScenarioError("sampling.radius", "must be positive");
    }
  }
  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    if (!t.is_object()) throw ScenarioError("tolerances", "expected an object");
    check_keys(t, "tolerances", {"pass", "zero"});
    if (t.contains("pass")) s.tolerances.pass = as_number(t.at("pass"), "tolerances.pass");
    if (t.contains("zero")) s.tolerances.zero = as_number(t.at("zero"), "tolerances.zero");
    if (!(s.tolerances.pass > 0.0)) throw ScenarioError("tolerances.pass", "must be positive");
    if (!(s.tolerances.zero > 0.0)) throw ScenarioError("tolerances.zero", "must be positive");
  }
  if (doc.contains("expect")) s.expect = as_bool(doc.at("expect"), "expect");
  if (doc.contains("p")) s.p = as_int(doc.at("p"), "p");

  auto check_p = [&](int p, const std::string& field, int dim) {
    if (p < 1 || p > dim) throw ScenarioError(field, "degree must satisfy 1 <= p <= " + std::to_string(dim));
  };

  switch (s.mode) {
    case Mode::Pullback:
    case Mode::Rigidity: {
      s.source = required_form(doc, "source");
      s.target = required_form(doc, "target");
      s.map = parse_map(require(doc, "map", "map"), "map", s.source->dim(), static_cast<std::size_t>(s.target->dim()));
      check_p(s.p, "p", s.source->dim());
      if (doc.contains("companions")) {
        const Json& cs = doc.at("companions");
        if (!cs.is_array()) throw ScenarioError("companions", "expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
          const std::string f = "companions[" + std::to_string(i) + "]";
          if (!cs[i].is_object()) throw ScenarioError(f, "expected an object");
          check_keys(cs[i], f, {"p", "expect"});
          Companion c;
          c.p = as_int(require(cs[i], "p", f + ".p"), f + ".p");
          check_p(c.p, f + ".p", s.source->dim());
          bool repeated = c.p == s.p;
          for (const Companion& o : s.companions) repeated = repeated || o.p == c.p;
          if (repeated) throw ScenarioError(f + ".p", "degree already checked");
          if (cs[i].contains("expect")) c.expect = as_bool(cs[i].at("expect"), f + ".expect");
          s.companions.push_back(c);
        }
      }
      if (doc.contains("expected_factor")) {
        s.expected_factor = as_number(doc.at("expected_factor"), "expected_factor");
        if (!(*s.expected_factor > 0.0)) throw ScenarioError("expected_factor", "must be positive");
      }
      break;
    }
    case Mode::Levi: {
      s.source = required_form(doc, "source");
      if (!s.source->definite()) throw ScenarioError("source.sig", "levi mode needs a definite space form");
      check_p(s.p, "p", s.source->dim());
      if (doc.contains("levi")) {
        const Json& l = doc.at("levi");
        if (!l.is_object()) throw ScenarioError("levi", "expected an object");
        check_keys(l, "levi", {"r"});
        if (l.contains("r")) s.levi_r = as_number(l.at("r"), "levi.r");
        if (!(s.levi_r > 0.0)) throw ScenarioError("levi.r", "must be positive");
      }
      if (doc.contains("expect_signature")) {
        const Json& es = doc.at("expect_signature");
        if (!es.is_array() || es.size() != 3) throw ScenarioError("expect_signature", "expected [negative, zero, positive]");
        Signature sig;
        sig.negative = static_cast<std::size_t>(as_int(es[0], "expect_signature[0]"));
        sig.zero = static_cast<std::size_t>(as_int(es[1], "expect_signature[1]"));
        sig.positive = static_cast<std::size_t>(as_int(es[2], "expect_signature[2]"));
        s.expect_signature = sig;
      }
      break;
    }
    case Mode::Umehara: {
      const Json& u = require(doc, "umehara", "umehara");
      if (!u.is_object()) throw ScenarioError("umehara", "expected an object");
      check_keys(u, "umehara", {"series", "p", "orders", "map", "arity"});
      s.umehara.series = as_string(require(u, "series", "umehara.series"), "umehara.series");
      if (s.umehara.series != "ball_slice" && s.umehara.series != "proj_slice" && s.umehara.series != "psi")
        throw ScenarioError("umehara.series", "expected ball_slice, proj_slice or psi");
      if (u.contains("p")) s.umehara.p = as_int(u.at("p"), "umehara.p");
      if (s.umehara.p < 1) throw ScenarioError("umehara.p", "must be >= 1");
      if (u.contains("orders")) {
        const Json& o = u.at("orders");
        if (!o.is_array() || o.empty()) throw ScenarioError("umehara.orders", "expected a non-empty array");
        s.umehara.orders.clear();
        for (std::size_t i = 0; i < o.size(); ++i) {
          const int n = as_int(o[i], "umehara.orders[" + std::to_string(i) + "]");
          if (n < 0 || (!s.umehara.orders.empty() && n <= s.umehara.orders.back()))
            throw ScenarioError("umehara.orders[" + std::to_string(i) + "]", "orders must be ascending and >= 0");
          s.umehara.orders.push_back(n);
        }
      }
      if (u.contains("arity")) s.umehara.arity = as_int(u.at("arity"), "umehara.arity");
      if (s.umehara.arity < 1) throw ScenarioError("umehara.arity", "must be >= 1");
      if (u.contains("map")) s.umehara.map = parse_map(u.at("map"), "umehara.map", s.umehara.arity, 0);
      if (s.umehara.series == "psi" && s.umehara.map.empty())
        throw ScenarioError("umehara.map", "psi needs a map");
      break;
    }
    case Mode::Relatives: {
      s.source = required_form(doc, "source");
      s.target = required_form(doc, "target");
      s.target2 = required_form(doc, "target2");
      s.map = parse_map(require(doc, "map", "map"), "map", s.source->dim(), static_cast<std::size_t>(s.target->dim()));
      s.map2 =
          parse_map(require(doc, "map2", "map2"), "map2", s.source->dim(), static_cast<std::size_t>(s.target2->dim()));
      check_p(s.p, "p", s.source->dim());
      break;
    }
    case Mode::Suite:
      break;
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("$", "cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

namespace {

Json form_to_json(const SpaceForm& sf) {
  return Json{{"kind", kind_name(sf.kind())}, {"dim", sf.dim()}, {"sig", sf.sig()}};
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  if (!s.name.empty()) j["name"] = s.name;
  j["mode"] = mode_name(s.mode);
  if (s.source) j["source"] = form_to_json(*s.source);
  if (s.target) j["target"] = form_to_json(*s.target);
  if (s.target2) j["target2"] = form_to_json(*s.target2);
  if (!s.map.empty()) j["map"] = s.map;
  if (!s.map2.empty()) j["map2"] = s.map2;
  if (s.mode != Mode::Umehara && s.mode != Mode::Suite) j["p"] = s.p;
  j["sampling"] = Json{{"count", s.sampling.count}, {"seed", s.sampling.seed}, {"radius", s.sampling.radius}};
  j["tolerances"] = Json{{"pass", s.tolerances.pass}, {"zero", s.tolerances.zero}};
  if (!s.companions.empty()) {
    Json cs = Json::array();
    for (const auto& c : s.companions) {
      Json cj{{"p", c.p}};
      if (c.expect) cj["expect"] = *c.expect;
      cs.push_back(cj);
    }
    j["companions"] = cs;
  }
  if (s.expect) j["expect"] = *s.expect;
  if (s.expected_factor) j["expected_factor"] = *s.expected_factor;
  if (s.expect_signature)
    j["expect_signature"] = {s.expect_signature->negative, s.expect_signature->zero, s.expect_signature->positive};
  if (s.mode == Mode::Levi) j["levi"] = Json{{"r", s.levi_r}};
  if (s.mode == Mode::Umehara) {
    Json u{{"series", s.umehara.series}, {"p", s.umehara.p}, {"orders", s.umehara.orders}};
    if (!s.umehara.map.empty()) {
      u["map"] = s.umehara.map;
      u["arity"] = s.umehara.arity;
    }
    j["umehara"] = u;
  }
  return j;
}

}  // namespace kform::verify
