#include "grasph/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace grasph {

using nlohmann::json;

std::string format_sig17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

json double_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double double_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("malformed numeric field: '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

json to_json(const RatioSweepReport& report) {
  json j;
  j["kind"] = to_string(report.kind);
  j["p"] = report.p;
  j["q"] = report.q;
  j["point"] = report.point;
  j["n_max"] = report.n_max;
  j["max_ratio_per_shell"] = report.max_ratio_per_shell;
  j["overall_sup"] = report.overall_sup;
  j["log_log_slope"] = report.log_log_slope;
  return j;
}

RatioSweepReport sweep_from_json(const json& j) {
  RatioSweepReport report;
  report.kind = bound_kind_from_string(j.at("kind").get<std::string>());
  report.p = j.at("p").get<int>();
  report.q = j.at("q").get<int>();
  report.point = j.at("point").get<std::string>();
  report.n_max = j.at("n_max").get<long>();
  report.max_ratio_per_shell = j.at("max_ratio_per_shell").get<std::vector<double>>();
  report.overall_sup = j.at("overall_sup").get<double>();
  report.log_log_slope = j.at("log_log_slope").get<double>();
  return report;
}

json to_json(const SeriesReport& report) {
  json j;
  j["p"] = report.p;
  j["q"] = report.q;
  j["point"] = report.point;
  j["k"] = report.k;
  j["s"] = report.s.get_str();
  j["n_max"] = report.n_max;
  j["shells"] = report.shells;
  j["shell_sums"] = report.shell_sums;
  j["partial_sums"] = report.partial_sums;
  j["tail_exponent"] = double_or_null(report.tail_exponent);
  j["verdict"] = to_string(report.verdict);
  j["normalizer_refused"] = report.normalizer_refused;
  j["degree_model"] = report.degree_model;
  return j;
}

SeriesReport series_from_json(const json& j) {
  SeriesReport report;
  report.p = j.at("p").get<int>();
  report.q = j.at("q").get<int>();
  report.point = j.at("point").get<std::string>();
  report.k = j.at("k").get<int>();
  report.s = parse_rational(j.at("s").get<std::string>());
  report.n_max = j.at("n_max").get<long>();
  report.shells = j.at("shells").get<std::vector<long>>();
  report.shell_sums = j.at("shell_sums").get<std::vector<double>>();
  report.partial_sums = j.at("partial_sums").get<std::vector<double>>();
  report.tail_exponent = double_from(j.at("tail_exponent"));
  report.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  report.normalizer_refused = j.at("normalizer_refused").get<bool>();
  report.degree_model = j.at("degree_model").get<std::string>();
  return report;
}

json to_json(const CalibrationRecord& record) {
  json j;
  j["p"] = record.p;
  j["q"] = record.q;
  j["global_constant"] = record.global_constant.get_str();
  j["eq3_constant"] = record.eq3_constant.get_str();
  j["matches_paper_constant"] = record.matches_paper_constant;
  j["matches_classical_constant"] = record.matches_classical_constant;
  j["eq3_requires_cpq"] = record.eq3_requires_cpq;
  j["minus_one_kappa"] = record.minus_one_kappa.get_str();
  j["sample_count"] = record.sample_count;
  j["consistent"] = record.consistent;
  return j;
}

json to_json(const ThresholdRecord& record) {
  json j;
  j["k_main"] = record.k_main;
  j["k_regular"] = record.k_regular;
  j["k_prior"] = record.k_prior;
  j["k_sobolev"] = record.k_sobolev;
  return j;
}

json to_json(const EvalResult& result) {
  json j;
  j["value"] = result.value;
  j["path_taken"] = to_string(result.path_taken);
  j["condition_estimate"] = double_or_null(result.condition_estimate);
  j["warnings"] = result.warnings;
  return j;
}

std::string to_csv(const RatioSweepReport& report) {
  std::ostringstream os;
  os << "shell,max_ratio\n";
  for (std::size_t i = 0; i < report.max_ratio_per_shell.size(); ++i)
    os << (i + 1) << "," << format_sig17(report.max_ratio_per_shell[i]) << "\n";
  return os.str();
}

std::string to_csv(const SeriesReport& report) {
  std::ostringstream os;
  os << "shell,shell_sum,partial_sum\n";
  for (std::size_t i = 0; i < report.shells.size(); ++i)
    os << report.shells[i] << "," << format_sig17(report.shell_sums[i]) << ","
       << format_sig17(report.partial_sums[i]) << "\n";
  return os.str();
}

bool operator==(const RatioSweepReport& a, const RatioSweepReport& b) {
  return a.kind == b.kind && a.p == b.p && a.q == b.q && a.point == b.point &&
         a.n_max == b.n_max && a.max_ratio_per_shell == b.max_ratio_per_shell &&
         a.overall_sup == b.overall_sup && a.log_log_slope == b.log_log_slope;
}

bool operator==(const SeriesReport& a, const SeriesReport& b) {
  auto tail_eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.p == b.p && a.q == b.q && a.point == b.point && a.k == b.k &&
         a.s == b.s && a.n_max == b.n_max && a.shells == b.shells &&
         a.shell_sums == b.shell_sums && a.partial_sums == b.partial_sums &&
         tail_eq(a.tail_exponent, b.tail_exponent) && a.verdict == b.verdict &&
         a.normalizer_refused == b.normalizer_refused &&
         a.degree_model == b.degree_model;
}

}  // namespace grasph
