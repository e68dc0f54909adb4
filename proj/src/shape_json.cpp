#include "vcd/shape_json.hpp"

#include "vcd/error.hpp"

#include <string>

namespace vcd::profiles {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

auto number(const Json& j, const char* key) -> double {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::ConfigParse, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

auto number_or(const Json& j, const char* key, double fallback) -> double {
  return j.contains(key) ? number(j, key) : fallback;
}

auto kind_of(const Json& j) -> std::string {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw Error(ErrorCode::ConfigParse, "object without a string 'kind': " + j.dump());
  }
  return j.at("kind").get<std::string>();
}

void put_scale(Json& j, double scale) {
  if (scale != 1.0) j["scale"] = scale;
}

}  // namespace

auto ramp_json(const Ramp& r) -> Json {
  return {{"start", r.start}, {"end", r.end}, {"lo", r.lo}, {"hi", r.hi}};
}

auto ramp_from_json(const Json& j) -> Ramp {
  return {number_or(j, "start", 0.0), number(j, "end"), number(j, "lo"), number(j, "hi")};
}

auto to_json(const Profile& p) -> Json {
  Json j = std::visit(
      overloaded{
          [](const Cap& c) -> Json { return {{"kind", "cap"}, {"r0", c.r0}}; },
          [](const PolyEven& c) -> Json { return {{"kind", "poly_even"}, {"coefficients", c.coefficients}}; },
          [](const BumpEven& b) -> Json {
            return {{"kind", "bump_even"}, {"center", b.center}, {"halfwidth", b.halfwidth}, {"amplitude", b.amplitude}};
          },
          [](const TwistPotential& t) -> Json {
            return {{"kind", "twist_potential"}, {"r0", t.r0}, {"theta", ramp_json(t.theta)}};
          },
          [](const Sum& s) -> Json {
            Json terms = Json::array();
            for (const auto& term : s.terms) terms.push_back(to_json(term));
            return {{"kind", "sum"}, {"terms", terms}};
          },
      },
      p.kind());
  put_scale(j, p.scale());
  return j;
}

auto to_json(const RProfile& p) -> Json {
  Json j = std::visit(
      overloaded{
          [](const Linear& l) -> Json { return {{"kind", "linear"}, {"slope", l.slope}, {"offset", l.offset}}; },
          [](const SinBridge& s) -> Json {
            return {{"kind", "sin_bridge"}, {"amplitude", s.amplitude}, {"a1", s.a1}, {"a0", s.a0}};
          },
          [](const Bump& b) -> Json {
            return {{"kind", "bump"}, {"center", b.center}, {"halfwidth", b.halfwidth}, {"amplitude", b.amplitude}};
          },
          [](const Tabulated& t) -> Json { return {{"kind", "tabulated"}, {"a", t.a}, {"f", t.f}}; },
          [](const ReebPotential& r) -> Json {
            const ReebRamp& th = r.theta;
            return {{"kind", "reeb_potential"},
                    {"theta", {{"theta1", th.theta1}, {"theta0", th.theta0}, {"a1", th.a1}, {"a0", th.a0}}}};
          },
          [](const RSum& s) -> Json {
            Json terms = Json::array();
            for (const auto& term : s.terms) terms.push_back(to_json(term));
            return {{"kind", "sum"}, {"terms", terms}};
          },
      },
      p.kind());
  put_scale(j, p.scale());
  return j;
}

auto to_json(const Shadow& s) -> Json {
  return std::visit(
      overloaded{
          [](const Ball& b) -> Json { return {{"kind", "ball"}, {"r0", b.r0}, {"n", b.n}}; },
          [](const Codisc& c) -> Json {
            const char* base = c.base == BaseKind::sphere ? "sphere" : "flat_torus";
            return {{"kind", "codisc"}, {"r0", c.r0}, {"base", {{"kind", base}, {"n", c.n}}}};
          },
          [](const Interval& i) -> Json {
            return {{"kind", "interval"}, {"a1", i.a1}, {"a0", i.a0}, {"fiber", {{"kind", "circle"}}}};
          },
      },
      s);
}

auto to_json(const Shape& s) -> Json {
  Json j;
  j["shadow"] = to_json(s.shadow);
  std::visit([&](const auto& p) { j["f_plus"] = to_json(p); }, s.f_plus);
  std::visit([&](const auto& p) { j["f_minus"] = to_json(p); }, s.f_minus);
  return j;
}

auto profile_from_json(const Json& j) -> Profile {
  const std::string kind = kind_of(j);
  const double scale = number_or(j, "scale", 1.0);
  if (kind == "cap") return {Cap{number(j, "r0")}, scale};
  if (kind == "poly_even") {
    if (!j.contains("coefficients") || !j.at("coefficients").is_array()) {
      throw Error(ErrorCode::ConfigParse, "poly_even needs a 'coefficients' array");
    }
    return {PolyEven{j.at("coefficients").get<std::vector<double>>()}, scale};
  }
  if (kind == "bump_even") {
    return {BumpEven{number(j, "center"), number(j, "halfwidth"), number(j, "amplitude")}, scale};
  }
  if (kind == "twist_potential") {
    if (!j.contains("theta")) throw Error(ErrorCode::ConfigParse, "twist_potential needs 'theta'");
    return {make_twist_potential(ramp_from_json(j.at("theta")), number(j, "r0")), scale};
  }
  if (kind == "sum") {
    if (!j.contains("terms") || !j.at("terms").is_array()) {
      throw Error(ErrorCode::ConfigParse, "sum needs a 'terms' array");
    }
    Sum s;
    for (const auto& t : j.at("terms")) s.terms.push_back(profile_from_json(t));
    return {std::move(s), scale};
  }
  throw Error(ErrorCode::ConfigParse, "unknown profile kind '" + kind + "'");
}

auto rprofile_from_json(const Json& j) -> RProfile {
  const std::string kind = kind_of(j);
  const double scale = number_or(j, "scale", 1.0);
  if (kind == "linear") return {Linear{number(j, "slope"), number_or(j, "offset", 0.0)}, scale};
  if (kind == "sin_bridge") {
    return {SinBridge{number(j, "amplitude"), number(j, "a1"), number(j, "a0")}, scale};
  }
  if (kind == "bump") return {Bump{number(j, "center"), number(j, "halfwidth"), number(j, "amplitude")}, scale};
  if (kind == "tabulated") {
    if (!j.contains("a") || !j.contains("f")) throw Error(ErrorCode::ConfigParse, "tabulated needs 'a' and 'f'");
    return {make_tabulated(j.at("a").get<std::vector<double>>(), j.at("f").get<std::vector<double>>()), scale};
  }
  if (kind == "reeb_potential") {
    if (!j.contains("theta")) throw Error(ErrorCode::ConfigParse, "reeb_potential needs 'theta'");
    const Json& t = j.at("theta");
    return {ReebPotential{make_reeb_ramp(number_or(t, "theta1", 0.0), number(t, "theta0"), number(t, "a1"),
                                         number(t, "a0"))},
            scale};
  }
  if (kind == "sum") {
    if (!j.contains("terms") || !j.at("terms").is_array()) {
      throw Error(ErrorCode::ConfigParse, "sum needs a 'terms' array");
    }
    RSum s;
    for (const auto& t : j.at("terms")) s.terms.push_back(rprofile_from_json(t));
    return {std::move(s), scale};
  }
  throw Error(ErrorCode::ConfigParse, "unknown interval profile kind '" + kind + "'");
}

auto shadow_from_json(const Json& j) -> Shadow {
  const std::string kind = kind_of(j);
  if (kind == "ball") return Ball{number(j, "r0"), static_cast<int>(number_or(j, "n", 1.0))};
  if (kind == "codisc") {
    if (!j.contains("base")) throw Error(ErrorCode::ConfigParse, "codisc needs a 'base'");
    const Json& b = j.at("base");
    const std::string bk = kind_of(b);
    BaseKind base{};
    if (bk == "sphere") {
      base = BaseKind::sphere;
    } else if (bk == "flat_torus") {
      base = BaseKind::flat_torus;
    } else {
      throw Error(ErrorCode::ConfigParse, "unknown base '" + bk + "'");
    }
    return Codisc{base, static_cast<int>(number(b, "n")), number(j, "r0")};
  }
  if (kind == "interval") return Interval{number(j, "a1"), number(j, "a0")};
  throw Error(ErrorCode::ConfigParse, "unknown shadow kind '" + kind + "'");
}

auto shape_from_json(const Json& j) -> Shape {
  for (const char* key : {"shadow", "f_plus", "f_minus"}) {
    if (!j.contains(key)) throw Error(ErrorCode::ConfigParse, std::string("shape is missing '") + key + "'");
  }
  Shadow shadow = shadow_from_json(j.at("shadow"));
  if (std::holds_alternative<Interval>(shadow)) {
    return make_interval_shape(std::get<Interval>(shadow), rprofile_from_json(j.at("f_plus")),
                               rprofile_from_json(j.at("f_minus")));
  }
  return make_radial_shape(shadow, profile_from_json(j.at("f_plus")), profile_from_json(j.at("f_minus")));
}

}  // namespace vcd::profiles
