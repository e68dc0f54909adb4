#include "vcd/report_io.hpp"

#include "vcd/error.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

namespace vcd::report {
namespace {

auto num(double x) -> std::string {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

auto vec(const Eigen::VectorXd& v) -> Json {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

auto kind_name(moser::SeedKind k) -> const char* {
  switch (k) {
    case moser::SeedKind::on_plus: return "on_plus";
    case moser::SeedKind::on_minus: return "on_minus";
    case moser::SeedKind::interior: return "interior";
    case moser::SeedKind::collar: return "collar";
  }
  return "";
}

}  // namespace

auto trajectory_columns(const ContactChart& chart) -> std::vector<std::string> {
  std::vector<std::string> cols{"t", "b"};
  auto block = [&cols](const char* name, int m) {
    for (int i = 1; i <= m; ++i) cols.push_back(name + std::to_string(i));
  };
  switch (chart.kind) {
    case ChartKind::euclid:
      block("x", chart.n);
      block("y", chart.n);
      break;
    case ChartKind::cotangent_sphere:
      block("q", chart.n + 1);
      block("p", chart.n + 1);
      break;
    case ChartKind::cotangent_torus:
      block("q", chart.n);
      block("p", chart.n);
      break;
    case ChartKind::circle_bundle:
      cols.emplace_back("a");
      cols.emplace_back("w");
      break;
  }
  return cols;
}

auto trajectory_csv(const numerics::Trajectory& tr, const std::vector<std::string>& columns) -> std::string {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (std::size_t r = 0; r < tr.times.size(); ++r) {
    if (tr.states[r].size() + 1 != columns.size()) {
      throw Error(ErrorCode::InvalidArgument, "trajectory row does not match the column count");
    }
    out += num(tr.times[r]);
    for (double v : tr.states[r]) out += "," + num(v);
    out += '\n';
  }
  return out;
}

auto moser_json(const moser::MoserRun& run) -> Json {
  Json seeds = Json::array();
  for (const auto& s : run.seeds) {
    seeds.push_back({{"kind", kind_name(s.kind)},
                     {"start", vec(s.start)},
                     {"image", vec(s.image)},
                     {"pullback_residual", s.pullback_residual},
                     {"conformal_factor", s.conformal_factor},
                     {"surface_drift", s.surface_drift},
                     {"collar_displacement", s.displacement},
                     {"steps", s.steps},
                     {"rejections", s.rejections}});
  }
  return {{"max_pullback_residual", run.max_pullback_residual},
          {"max_surface_drift", run.max_surface_drift},
          {"max_collar_displacement", run.max_collar_displacement},
          {"per_seed", seeds}};
}

auto contacto_json(const ContactoReport& r) -> Json {
  return {{"max_defect", r.max_defect},
          {"max_strict_defect", r.max_strict_defect},
          {"min_factor", r.min_factor},
          {"max_factor", r.max_factor},
          {"points", r.points.size()}};
}

auto monodromy_json(const cotangent::MonodromyReport& r) -> Json {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(
        {{"start", vec(s.start)}, {"predicted", vec(s.predicted)}, {"traced", vec(s.traced)}, {"deviation", s.deviation}});
  }
  return {{"flow_angle", r.flow_angle},
          {"negate_fiber", r.negate_fiber},
          {"max_deviation", r.max_deviation},
          {"samples", samples}};
}

auto monodromy_json(const sympl::MonodromyReport& r) -> Json {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back(
        {{"start", s.start}, {"predicted", s.predicted}, {"traced", s.traced}, {"deviation", s.deviation}});
  }
  return {{"rotation", r.rotation}, {"max_deviation", r.max_deviation}, {"samples", samples}};
}

auto dump(const Json& j) -> std::string { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace vcd::report
