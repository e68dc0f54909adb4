#include "vcd/cli.hpp"

#include "vcd/cotangent.hpp"
#include "vcd/decide.hpp"
#include "vcd/error.hpp"
#include "vcd/euclid.hpp"
#include "vcd/report_io.hpp"
#include "vcd/shape_json.hpp"
#include "vcd/sympl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace vcd::cli {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;
using profiles::Shape;

struct Options {
  std::string command;
  std::string config;
  std::string out = ".";
  double tol = decide::default_tolerance;
  unsigned long long seed = 1;
};

struct Context {
  Options opt;
  Json config;
  std::ostream* out = nullptr;
};

auto bad_config(const std::string& what) -> Error { return Error(ErrorCode::ConfigParse, what); }

auto load_config(const std::string& path) -> Json {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bad_config("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw bad_config(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  if (!j.is_object()) throw bad_config("config must be a JSON object");
  if (j.contains("schema") && j.at("schema") != report::schema_version) {
    throw bad_config("unsupported config schema " + j.at("schema").dump());
  }
  return j;
}

auto field(const Json& j, const char* key) -> const Json& {
  if (!j.contains(key)) throw bad_config(std::string("config needs '") + key + "'");
  return j.at(key);
}

template <class T>
auto value_or(const Json& j, const char* key, T fallback) -> T {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

auto shape_at(const Json& j, const char* key) -> Shape { return profiles::shape_from_json(field(j, key)); }

auto sheet_of(const Json& j) -> int {
  const int sheet = value_or(j, "sheet", 1);
  if (sheet != 1 && sheet != -1) throw bad_config("'sheet' must be 1 or -1");
  return sheet;
}

auto ode_control(const Json& j) -> numerics::OdeControl {
  numerics::OdeControl c;
  if (!j.contains("ode")) return c;
  const Json& o = j.at("ode");
  const std::string method = value_or<std::string>(o, "method", "rk45");
  if (method == "rk4") {
    c.method = numerics::OdeMethod::rk4;
  } else if (method != "rk45") {
    throw bad_config("unknown ode method '" + method + "'");
  }
  c.step = value_or(o, "step", c.step);
  c.abs_tol = value_or(o, "abs_tol", c.abs_tol);
  c.rel_tol = value_or(o, "rel_tol", c.rel_tol);
  c.max_steps = value_or(o, "max_steps", c.max_steps);
  return c;
}

auto geometry_kind(const Shape& s) -> decide::GeometryKind {
  if (std::holds_alternative<profiles::Ball>(s.shadow)) return decide::GeometryKind::euclid;
  if (std::holds_alternative<profiles::Codisc>(s.shadow)) return decide::GeometryKind::cotangent;
  return decide::GeometryKind::sympl;
}

auto chart_of(const Shape& s) -> ContactChart {
  switch (geometry_kind(s)) {
    case decide::GeometryKind::euclid: return euclid::chart(std::get<profiles::Ball>(s.shadow).n);
    case decide::GeometryKind::cotangent: return cotangent::geometry_of(s).chart();
    case decide::GeometryKind::sympl: return sympl::ContactModel{}.chart();
  }
  return {};
}

auto header(const std::string& command) -> Json { return {{"schema", report::schema_version}, {"command", command}}; }

void emit(const Context& ctx, const std::string& name, const Json& j) {
  const std::string text = report::dump(j);
  report::write_atomic(fs::path(ctx.opt.out) / name, text);
  *ctx.out << text;
}

auto which_of(const std::string& s) -> int {
  if (s == "plus") return 0;
  if (s == "minus") return 1;
  if (s == "full") return 2;
  throw bad_config("monodromy 'which' must be plus, minus or full");
}

auto cmd_invariants(const Context& ctx) -> int {
  const Shape s = shape_at(ctx.config, "shape");
  Json j = header("invariants");
  j["invariants"] = decide::to_json(decide::compute_invariants(s));
  emit(ctx, "invariants.json", j);
  return ok;
}

auto cmd_trace(const Context& ctx) -> int {
  const Json& c = ctx.config;
  const Shape s = shape_at(c, "shape");
  const int sheet = sheet_of(c);
  const auto kind = geometry_kind(s);
  const auto columns = report::trajectory_columns(chart_of(s));
  const int rows = value_or(c, "rows", 201);
  Json j = header("trace");
  j["sheet"] = sheet;
  Json files = Json::array();
  const Json seeds = c.contains("seeds") ? c.at("seeds") : Json::array();
  if (!seeds.is_array()) throw bad_config("'seeds' must be an array of coordinate arrays");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto v = seeds[i].get<std::vector<double>>();
    numerics::Trajectory tr;
    switch (kind) {
      case decide::GeometryKind::euclid: {
        const int n = std::get<profiles::Ball>(s.shadow).n;
        if (static_cast<int>(v.size()) != 2 * n) throw bad_config("euclid seeds are (x.., y..) with 2n entries");
        euclid::Point p(1 + 2 * n);
        p[0] = 0.0;
        for (int k = 0; k < 2 * n; ++k) p[1 + k] = v[k];
        tr = euclid::trace_characteristic(s, sheet, p, field(c, "t_end").get<double>(), ode_control(c));
        break;
      }
      case decide::GeometryKind::cotangent: {
        const auto g = cotangent::geometry_of(s);
        if (static_cast<int>(v.size()) != 2 * g.width()) throw bad_config("cotangent seeds are (q.., p..)");
        const auto& cd = std::get<profiles::Codisc>(s.shadow);
        cotangent::Covector u = cotangent::normalize(g, Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
        const double norm = cotangent::fiber_norm(g, u);
        if (!(norm > 0.0)) throw bad_config("cotangent seed has a zero fibre component");
        u = cotangent::scale_fiber(g, u, cd.r0 / norm);
        tr = cotangent::doubled_half_char_path(s, sheet, u, value_or(c, "r_from", cd.r0), value_or(c, "r_to", -cd.r0),
                                               rows);
        break;
      }
      case decide::GeometryKind::sympl: {
        if (v.size() != 2) throw bad_config("sympl seeds are (a, w)");
        tr = sympl::sympl_char_path(s, sheet, {v[0], v[1]}, field(c, "t_end").get<double>(), rows);
        break;
      }
    }
    const std::string name = "trace_" + std::to_string(i) + ".csv";
    report::write_atomic(fs::path(ctx.opt.out) / name, report::trajectory_csv(tr, columns));
    files.push_back(name);
  }
  j["files"] = files;
  if (c.contains("monodromy")) {
    const Json& m = c.at("monodromy");
    const int which = which_of(value_or<std::string>(m, "which", "full"));
    const int samples = value_or(m, "samples", 10);
    switch (kind) {
      case decide::GeometryKind::euclid: throw bad_config("monodromy needs a cotangent or sympl shape");
      case decide::GeometryKind::cotangent:
        j["monodromy"] = report::monodromy_json(
            cotangent::equator_monodromy(s, static_cast<cotangent::Which>(which), samples, ctx.opt.seed));
        break;
      case decide::GeometryKind::sympl:
        j["monodromy"] =
            report::monodromy_json(sympl::sympl_monodromy(s, static_cast<sympl::Which>(which), samples, ctx.opt.seed));
        break;
    }
  }
  emit(ctx, "trace.json", j);
  return ok;
}

auto cmd_twist(const Context& ctx) -> int {
  const Json& c = ctx.config;
  const Shape s = shape_at(c, "shape");
  const Json& t = field(c, "twist");
  const int n_points = value_or(c, "verify_points", 100);
  moser::Uniform u(ctx.opt.seed);
  std::vector<Eigen::VectorXd> points;
  Json j = header("twist");
  const auto source_inv = decide::compute_invariants(s);
  decide::InvariantReport target_inv;
  decide::Decision decision;
  ContactoReport check;
  switch (geometry_kind(s)) {
    case decide::GeometryKind::euclid: throw bad_config("twists need a cotangent or sympl shape");
    case decide::GeometryKind::cotangent: {
      const auto g = cotangent::geometry_of(s);
      const double r0 = std::get<profiles::Codisc>(s.shadow).r0;
      const auto tw = cotangent::cogeodesic_twist(s, profiles::ramp_from_json(field(t, "theta")));
      for (int i = 0; i < n_points; ++i) {
        const cotangent::Covector cv = cotangent::random_covector(g, u.in(0.05, 0.95) * r0, u);
        Eigen::VectorXd x(1 + cv.size());
        x[0] = u.in(-1.0, 1.0);
        x.tail(cv.size()) = cv;
        points.push_back(x);
      }
      check = verify_contacto(g.chart(), tw.map, points);
      target_inv = decide::compute_invariants(tw.target);
      decision = decide::decide_cotangent(source_inv, target_inv, decide::CotangentMode::half_lengths, ctx.opt.tol);
      j["angle"] = tw.angle;
      j["target"] = profiles::to_json(tw.target);
      break;
    }
    case decide::GeometryKind::sympl: {
      const auto& iv = std::get<profiles::Interval>(s.shadow);
      const auto tw = sympl::reeb_twist(s, field(t, "theta1").get<double>(), field(t, "theta0").get<double>());
      for (int i = 0; i < n_points; ++i) {
        Eigen::VectorXd x(3);
        x << u.in(-1.0, 1.0), u.in(iv.a1, iv.a0), u.in(0.0, 2.0 * std::numbers::pi);
        points.push_back(x);
      }
      check = verify_contacto(sympl::ContactModel{}.chart(), tw.map, points);
      target_inv = decide::compute_invariants(tw.target);
      decision = decide::decide_sympl(source_inv, target_inv, decide::SymplMode::per_sheet, ctx.opt.tol);
      j["theta1"] = tw.theta.theta1;
      j["theta0"] = tw.theta.theta0;
      j["target"] = profiles::to_json(tw.target);
      break;
    }
  }
  j["source_invariants"] = decide::to_json(source_inv);
  j["target_invariants"] = decide::to_json(target_inv);
  j["decision"] = decide::to_json(decision);
  j["verify"] = report::contacto_json(check);
  emit(ctx, "twist.json", j);
  return ok;
}

auto cmd_moser(const Context& ctx) -> int {
  const Json& c = ctx.config;
  const Shape source = shape_at(c, "source");
  const Shape target = shape_at(c, "target");
  const int count = value_or(c, "seeds", 50);
  const bool keep = value_or(c, "trajectories", false);
  const auto control = ode_control(c);
  Json j = header("moser");
  moser::MoserRun run;
  switch (geometry_kind(source)) {
    case decide::GeometryKind::euclid:
      run = euclid::moser_flow(source, target, euclid::default_seeds(source, count, ctx.opt.seed), control, keep);
      break;
    case decide::GeometryKind::cotangent: {
      const auto r = cotangent::moser_flow_cotangent(source, target,
                                                     cotangent::default_seeds(source, count, ctx.opt.seed), control,
                                                     keep);
      run = r.run;
      j["twist_angle"] = r.twist_angle;
      j["singular_set_error"] = r.singular_set_error;
      break;
    }
    case decide::GeometryKind::sympl: {
      const auto r =
          sympl::moser_flow_sympl(source, target, sympl::default_seeds(source, count, ctx.opt.seed), control, keep);
      run = r.run;
      j["lower_rotation"] = r.lower_rotation;
      j["upper_collar_displacement"] = r.upper_collar_displacement;
      j["lower_collar_displacement"] = r.lower_collar_displacement;
      break;
    }
  }
  j["geometry"] = decide::to_string(geometry_kind(source));
  j["residuals"] = report::moser_json(run);
  if (keep) {
    const auto columns = report::trajectory_columns(chart_of(source));
    Json files = Json::array();
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
      const std::string name = "moser_" + std::to_string(i) + ".csv";
      report::write_atomic(fs::path(ctx.opt.out) / name, report::trajectory_csv(run.trajectories[i], columns));
      files.push_back(name);
    }
    j["files"] = files;
  }
  j["residual_cap"] = residual_hard_cap;
  emit(ctx, "moser.json", j);
  return run.max_pullback_residual > residual_hard_cap ? residual_cap : ok;
}

auto cmd_decide(const Context& ctx) -> int {
  const Json& c = ctx.config;
  const auto a = decide::compute_invariants(shape_at(c, "source"));
  const auto b = decide::compute_invariants(shape_at(c, "target"));
  if (a.geometry != b.geometry) throw Error(ErrorCode::GeometryMismatch, "source and target live in different geometries");
  decide::Decision d;
  std::string mode;
  switch (a.geometry) {
    case decide::GeometryKind::euclid:
      mode = "mean_curvature";
      d = decide::decide_euclid(a, b, ctx.opt.tol);
      break;
    case decide::GeometryKind::cotangent: {
      mode = value_or<std::string>(c, "mode", "sigma_only");
      decide::CotangentMode m;
      if (mode == "sigma_only") {
        m = decide::CotangentMode::sigma_only;
      } else if (mode == "half_lengths") {
        m = decide::CotangentMode::half_lengths;
      } else if (mode == "half_lengths_even") {
        m = decide::CotangentMode::half_lengths_even;
      } else {
        throw bad_config("cotangent mode must be sigma_only, half_lengths or half_lengths_even");
      }
      d = decide::decide_cotangent(a, b, m, ctx.opt.tol);
      break;
    }
    case decide::GeometryKind::sympl: {
      mode = value_or<std::string>(c, "mode", "total");
      decide::SymplMode m;
      if (mode == "total") {
        m = decide::SymplMode::total;
      } else if (mode == "per_sheet") {
        m = decide::SymplMode::per_sheet;
      } else {
        throw bad_config("sympl mode must be total or per_sheet");
      }
      d = decide::decide_sympl(a, b, m, ctx.opt.tol);
      break;
    }
  }
  Json j = header("decide");
  j["mode"] = mode;
  j["source"] = decide::to_json(a);
  j["target"] = decide::to_json(b);
  j["decision"] = decide::to_json(d);
  emit(ctx, "decide.json", j);
  return ok;
}

auto exit_code_for(ErrorCode code) -> int {
  switch (code) {
    case ErrorCode::ConfigParse:
    case ErrorCode::InvalidArgument: return config_error;
    case ErrorCode::ResidualCap: return residual_cap;
    default: return numeric_failure;
  }
}

}  // namespace

auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int {
  Options opt;
  CLI::App app{"Invariants, characteristic traces, twists and Moser flows of spherical shapes"};
  app.name("vcd");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--config", opt.config, "JSON config file")->required();
  app.add_option("--out", opt.out, "output directory")->capture_default_str();
  app.add_option("--tol", opt.tol, "decision tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed for sampled points")->capture_default_str();
  for (const char* name : {"invariants", "trace", "twist", "moser", "decide"}) {
    app.add_subcommand(name)->callback([&opt, name] { opt.command = name; });
  }

  std::vector<const char*> argv{"vcd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  Context ctx{opt, {}, &out};
  try {
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (!fs::is_directory(opt.out)) throw bad_config("cannot create output directory '" + opt.out + "'");
    ctx.config = load_config(opt.config);
    if (opt.command == "invariants") return cmd_invariants(ctx);
    if (opt.command == "trace") return cmd_trace(ctx);
    if (opt.command == "twist") return cmd_twist(ctx);
    if (opt.command == "moser") return cmd_moser(ctx);
    return cmd_decide(ctx);
  } catch (const Error& e) {
    err << "vcd: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const Json::exception& e) {
    err << "vcd: config: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "vcd: " << e.what() << '\n';
    return numeric_failure;
  }
}

auto run_cli(int argc, char** argv) -> int {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace vcd::cli
