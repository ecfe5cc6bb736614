#include "bubblecorr/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bc {

Json rational_to_json(const Rational& q) {
  return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    if (j.is_string()) {
      Rational q(j.get<std::string>());
      if (q.get_den() == 0) throw InputError("zero denominator");
      q.canonicalize();
      return q;
    }
    if (j.is_object()) {
      const std::string num = j.at("num").is_string() ? j.at("num").get<std::string>()
                                                      : std::to_string(j.at("num").get<long long>());
      const std::string den = !j.contains("den")          ? std::string("1")
                              : j.at("den").is_string() ? j.at("den").get<std::string>()
                                                        : std::to_string(j.at("den").get<long long>());
      return rational_from_strings(num, den);
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("malformed rational: ") + e.what());
  }
  throw InputError("malformed rational: expected integer, string or {num, den}");
}

Json polynomial_to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [alpha, c] : p.terms())
    terms.push_back(Json{{"alpha", alpha}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  return Json{{"dimension", p.dimension()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dimension") || !j.contains("terms"))
    throw InputError("polynomial JSON needs \"dimension\" and \"terms\"");
  if (!j.at("dimension").is_number_integer() || j.at("dimension").get<int>() < 1)
    throw InputError("polynomial dimension must be a positive integer");
  const int n = j.at("dimension").get<int>();
  if (!j.at("terms").is_array()) throw InputError("polynomial \"terms\" must be an array");
  Polynomial p(n);
  for (const Json& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("alpha") || !t.at("alpha").is_array())
      throw InputError("each term needs an \"alpha\" array");
    MultiIndex alpha;
    for (const Json& a : t.at("alpha")) {
      if (!a.is_number_integer() || a.get<int>() < 0) throw InputError("exponents must be non-negative integers");
      alpha.push_back(a.get<int>());
    }
    if (static_cast<int>(alpha.size()) != n) throw InputError("term exponent length differs from dimension");
    p.add_term(alpha, rational_from_json(t));
  }
  return p;
}

Json solution_to_json(const CorrectionSolution& s) {
  Json j;
  j["gamma"] = polynomial_to_json(s.gamma);
  j["radial_completion"] = s.radial_completion ? polynomial_to_json(*s.radial_completion) : Json(nullptr);
  j["vanishing_order"] = s.vanishing_order;
  j["verified"] = s.verified;
  j["unique_mod_kernel"] = s.unique_mod_kernel;
  j["n"] = s.n;
  j["ell"] = s.ell;
  return j;
}

Json table_to_json(const CoefficientTable& t) {
  Json cells = Json::array();
  for (const auto& step : t.order) {
    const auto [j, k] = step.cell;
    Json c;
    c["j"] = j;
    c["k"] = k;
    c["C"] = rational_to_json(t.C.at(step.cell));
    c["A"] = rational_to_json(t.A.at(step.cell));
    c["denominator"] = rational_to_json(t.denominator.at(step.cell));
    c["guard"] = "ok";
    cells.push_back(c);
  }
  Json out;
  out["n"] = t.n;
  out["ell"] = t.ell;
  out["h"] = t.h;
  out["depth"] = t.depth;
  out["cells"] = cells;
  Json res = Json::array();
  for (const auto& r : t.residues) res.push_back(rational_to_json(r));
  out["residues"] = res;
  return out;
}

Json integral_to_json(const IntegralResult& r) {
  return Json{{"j_multiple", rational_to_json(r.j_multiple)},
              {"numeric", r.numeric},
              {"J", r.j},
              {"method", to_string(r.method)}};
}

Json violation_to_json(const ViolationReport& v) {
  Json j;
  j["constraint"] = v.constraint;
  j["residual_exact"] = v.residual_exact ? rational_to_json(*v.residual_exact) : Json(nullptr);
  j["residual_float"] = v.residual_float;
  j["pass"] = v.pass;
  j["tolerance"] = v.tolerance;
  j["note"] = v.note;
  return j;
}

Json residual_report_to_json(const ResidualReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["max_abs"] = r.max_abs;
  j["mean_abs"] = r.mean_abs;
  j["scales"] = r.scales;
  j["values"] = r.values;
  j["slopes"] = r.slopes;
  return j;
}

Json green_report_to_json(const GreenCheckReport& r) {
  Json j;
  j["n"] = r.n;
  j["a"] = r.a;
  j["dirichlet_max"] = r.dirichlet_max;
  j["reflection_error"] = r.reflection_error;
  j["poisson_normalization"] = r.poisson_normalization;
  Json b = Json::array();
  for (const auto& c : r.bounds)
    b.push_back(Json{{"delta", c.delta}, {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"max_ratio", c.max_ratio}});
  j["bounds"] = b;
  return j;
}

namespace {

RationalPoint rational_point(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  RationalPoint p;
  for (const Json& c : j) p.push_back(rational_from_json(c));
  return p;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

}  // namespace

BlowupConfiguration configuration_from_json(const Json& j) {
  BlowupConfiguration c;
  try {
    c.n = field(j, "n").get<int>();
    for (const Json& p : field(j, "points")) c.points.push_back(rational_point(p, "point"));
    for (const Json& k : field(j, "k_values")) c.k_values.push_back(rational_from_json(k));
    for (const Json& p : field(j, "taylor_polys")) c.taylor_polys.push_back(polynomial_from_json(p));
    for (const Json& x : field(j, "flex_vectors")) c.flex_vectors.push_back(rational_point(x, "flex vector"));
    for (const Json& e : field(j, "flex_exponents")) c.flex_exponents.push_back(rational_from_json(e));
    for (const Json& s : field(j, "scale_ratios")) c.scale_ratios.push_back(s.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed configuration: ") + e.what());
  }
  return c;
}

Json configuration_to_json(const BlowupConfiguration& c) {
  auto pt = [](const RationalPoint& p) {
    Json a = Json::array();
    for (const auto& q : p) a.push_back(rational_to_json(q));
    return a;
  };
  Json j;
  j["n"] = c.n;
  j["points"] = Json::array();
  for (const auto& p : c.points) j["points"].push_back(pt(p));
  j["k_values"] = Json::array();
  for (const auto& k : c.k_values) j["k_values"].push_back(rational_to_json(k));
  j["taylor_polys"] = Json::array();
  for (const auto& p : c.taylor_polys) j["taylor_polys"].push_back(polynomial_to_json(p));
  j["flex_vectors"] = Json::array();
  for (const auto& x : c.flex_vectors) j["flex_vectors"].push_back(pt(x));
  j["flex_exponents"] = Json::array();
  for (const auto& e : c.flex_exponents) j["flex_exponents"].push_back(rational_to_json(e));
  j["scale_ratios"] = c.scale_ratios;
  return j;
}

RefinedProfileSpec profile_spec_from_json(const Json& j) {
  RefinedProfileSpec s;
  try {
    s.n = field(j, "n").get<int>();
    s.ell = field(j, "ell").get<int>();
    s.lambda = field(j, "lambda").get<double>();
    s.xi = field(j, "xi").get<std::vector<double>>();
    if (j.contains("gamma")) {
      s.gamma = polynomial_from_json(j.at("gamma"));
    } else {
      s.gamma = solve_gamma(polynomial_from_json(field(j, "polynomial"))).gamma;
    }
    if (j.contains("harmonic_points"))
      for (const Json& h : j.at("harmonic_points"))
        s.harmonic_points.push_back({field(h, "location").get<std::vector<double>>(), field(h, "weight").get<double>()});
    if (j.contains("joint_radius_c")) s.joint_radius_c = j.at("joint_radius_c").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed profile spec: ") + e.what());
  }
  return s;
}

namespace {

void dump_rec(const Json& j, int indent, int level, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_rec(it.value(), indent, level + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_rec(v, indent, level + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  out += "\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("invalid JSON in " + path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at " + path + ": " + ec.message());
  }
}

}  // namespace bc
