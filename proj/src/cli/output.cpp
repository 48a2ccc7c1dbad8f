#include "fracdyn/cli/output.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fracdyn::cli {

using nlohmann::json;

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj) {
  out << "t,x,y,z\n";
  const auto cols = traj.states.cols();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_number(traj.times[k]);
    for (Eigen::Index j = 0; j < cols; ++j)
      out << ',' << format_number(traj.states(static_cast<Eigen::Index>(k), j));
    out << '\n';
  }
}

std::string trajectory_csv(const Trajectory<double>& traj) {
  std::ostringstream s;
  write_trajectory_csv(s, traj);
  return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

json point_json(const State3<double>& p) { return json::array({p(0), p(1), p(2)}); }

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json conditions_json(const std::vector<Condition>& conditions) {
  json out = json::array();
  for (const auto& c : conditions) out.push_back({{"name", c.name}, {"satisfied", c.satisfied}});
  return out;
}

json verdict_json(const StabilityVerdict<double>& v) {
  json eigen = json::array();
  for (const auto& c : v.per_eigenvalue) {
    eigen.push_back({{"value", complex_json(c.value)},
                     {"condition", c.condition ? json(*c.condition) : json(nullptr)},
                     {"satisfied", c.satisfied}});
  }
  return {{"criterion", to_string(v.criterion)}, {"stable", v.stable}, {"eigenvalues", eigen}};
}

}  // namespace

json to_json(const Equilibrium<double>& eq) {
  return {{"kind", to_string(eq.kind)},
          {"point", point_json(eq.point)},
          {"admissible", eq.admissible},
          {"conditions", conditions_json(eq.conditions)}};
}

json to_json(const EquilibriumReport<double>& r) {
  json out = to_json(r.equilibrium);
  json spectrum = json::array();
  for (const auto& l : r.spectrum) spectrum.push_back(complex_json(l));
  out["spectrum"] = spectrum;
  out["cubic"] = {{"a", r.cubic.a},
                  {"b", r.cubic.b},
                  {"c", r.cubic.c},
                  {"p", r.analysis.p},
                  {"q", r.analysis.q},
                  {"delta", r.analysis.delta},
                  {"branch", to_string(r.analysis.branch)},
                  {"routh_hurwitz", routh_hurwitz_cubic(r.cubic)}};
  json verdicts;
  verdicts["caputo"] = verdict_json(r.caputo);
  verdicts["cf_theorem"] = r.cf_theorem ? verdict_json(*r.cf_theorem) : json("not applicable");
  verdicts["cf_disk"] = r.cf_disk ? verdict_json(*r.cf_disk) : json("not applicable");
  out["verdicts"] = verdicts;
  out["table1"] = conditions_json(r.table1);
  if (r.regions) {
    json regions = json::array();
    for (const auto rc : *r.regions) regions.push_back(to_string(rc));
    out["regions"] = regions;
  } else {
    out["regions"] = "not applicable";
  }
  return out;
}

json stability_report_json(const ModelParams<double>& params, double alpha,
                           const std::vector<EquilibriumReport<double>>& reports) {
  json eqs = json::array();
  for (const auto& r : reports) eqs.push_back(to_json(r));
  const auto a = params.to_array();
  return {{"alpha", alpha}, {"params", a}, {"equilibria", eqs}};
}

}  // namespace fracdyn::cli
