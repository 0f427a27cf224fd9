#include "ned/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ned {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

long integer(const json& j, const char* what) {
  if (!j.is_number_integer()) parse_fail(std::string(what) + " must be an integer");
  return j.get<long>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Matrix matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) parse_fail(std::string(what) + " must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::vector<double> row = numbers(j[static_cast<std::size_t>(i)], what);
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Eigen::Index>(row.size()) != cols) parse_fail(std::string(what) + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixSequence system_from(const json& j) {
  const json& kind = require(j, "kind");
  if (!kind.is_string()) parse_fail("system.kind must be a string");
  const double tol = j.contains("invertibility_tolerance")
                         ? number(j.at("invertibility_tolerance"), "system.invertibility_tolerance")
                         : MatrixSequence::kDefaultInvertibilityTolerance;
  if (!(tol > 0.0)) parse_fail("system.invertibility_tolerance must be positive");
  MatrixSequence sys;
  if (kind == "builtin") {
    const json& name = require(j, "name");
    if (!name.is_string()) parse_fail("system.name must be a string");
    const std::vector<double> params =
        j.contains("params") ? numbers(j.at("params"), "system.params") : std::vector<double>{};
    sys = builtin_example(name.get<std::string>(), params);
  } else if (kind == "table") {
    const long k_min = integer(require(j, "k_min"), "system.k_min");
    const json& mats = require(j, "matrices");
    if (!mats.is_array() || mats.empty()) parse_fail("system.matrices must be a nonempty array");
    std::vector<Matrix> table;
    for (const auto& m : mats) {
      table.push_back(matrix_from(m, "system.matrices entry"));
      if (table.back().rows() != table.back().cols()) parse_fail("system.matrices entries must be square");
    }
    sys = MatrixSequence::table(k_min, std::move(table), tol);
  } else {
    parse_fail("system.kind must be 'builtin' or 'table'");
  }
  if (j.contains("dimension") && integer(j.at("dimension"), "system.dimension") != sys.dimension())
    parse_fail("system.dimension does not match the matrices");
  return sys;
}

}  // namespace

FitConfig RunConfig::fit() const {
  FitConfig f;
  f.exponent = exponent;
  f.k_cap = k_cap;
  return f;
}

SpectrumConfig RunConfig::spectrum() const {
  SpectrumConfig s;
  s.fit = fit();
  s.horizon = horizon;
  s.bisect_tol = bisect_tol;
  s.eps_grid = eps_grid;
  return s;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_fail("config must be a JSON object");

  RunConfig c;
  c.system = system_from(require(j, "system"));
  const json& w = require(j, "window");
  if (!w.is_array() || w.size() != 2) parse_fail("window must be [lo, hi]");
  const long lo = integer(w[0], "window.lo"), hi = integer(w[1], "window.hi");
  if (lo > hi) parse_fail("window is empty");
  c.window = {lo, hi};
  if (j.contains("gamma_bracket") && !j.at("gamma_bracket").is_null()) {
    const std::vector<double> b = numbers(j.at("gamma_bracket"), "gamma_bracket");
    if (b.size() != 2 || !(b[0] > 0.0 && b[1] > b[0])) parse_fail("gamma_bracket must be [lo, hi] with 0 < lo < hi");
    c.gamma_bracket = std::make_pair(b[0], b[1]);
  }
  if (j.contains("bisect_tol")) c.bisect_tol = number(j.at("bisect_tol"), "bisect_tol");
  if (!(c.bisect_tol > 0.0)) parse_fail("bisect_tol must be positive");
  if (j.contains("alpha_grid")) c.alpha_grid = numbers(j.at("alpha_grid"), "alpha_grid");
  if (j.contains("eps_grid")) c.eps_grid = numbers(j.at("eps_grid"), "eps_grid");
  if (c.alpha_grid.empty() || c.eps_grid.empty()) parse_fail("grids must be nonempty");
  for (double a : c.alpha_grid)
    if (!(a > 0.0 && a < 1.0)) parse_fail("alpha_grid values must lie in (0, 1)");
  for (double e : c.eps_grid)
    if (!(e >= 1.0) || !std::isfinite(e)) parse_fail("eps_grid values must be >= 1");
  if (j.contains("horizon")) c.horizon = integer(j.at("horizon"), "horizon");
  if (c.horizon <= 0) parse_fail("horizon must be positive");
  if (j.contains("k_cap")) c.k_cap = number(j.at("k_cap"), "k_cap");
  if (!(c.k_cap > 1.0)) parse_fail("k_cap must exceed 1");
  if (j.contains("reduce_margin")) c.reduce_margin = integer(j.at("reduce_margin"), "reduce_margin");
  if (c.reduce_margin < 0) parse_fail("reduce_margin must be nonnegative");
  if (j.contains("nonuniform_exponent")) {
    const json& m = j.at("nonuniform_exponent");
    if (m == "absolute") c.exponent = ExponentMode::Absolute;
    else if (m == "signed") c.exponent = ExponentMode::Signed;
    else parse_fail("nonuniform_exponent must be 'absolute' or 'signed'");
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) parse_fail("output_dir must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("report_format")) {
    const json& f = j.at("report_format");
    if (f == "json") c.report_format = ReportFormat::Json;
    else if (f == "csv") c.report_format = ReportFormat::Csv;
    else parse_fail("report_format must be 'json' or 'csv'");
  }
  c.echo = j.dump();
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::UniformED: return "uniform_ed";
    case Flavor::NED: return "ned";
    case Flavor::StrongNED: return "strong_ned";
  }
  return "unknown";
}

std::string certificate_to_json(const DichotomyCertificate& cert) {
  json j;
  j["projector"] = {{"reference_index", cert.projector.reference_index()},
                    {"matrix", matrix_to(cert.projector.reference_projector())}};
  j["K"] = cert.K;
  j["alpha"] = cert.alpha;
  j["epsilon"] = cert.epsilon;
  j["flavor"] = to_string(cert.flavor);
  return j.dump(2);
}

DichotomyCertificate certificate_from_json(const std::string& text, const MatrixSequence& sys,
                                           const Window& w) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("certificate is not valid JSON: ") + e.what());
  }
  const json& p = require(j, "projector");
  const long ref = integer(require(p, "reference_index"), "projector.reference_index");
  const Matrix m = matrix_from(require(p, "matrix"), "projector.matrix");
  DichotomyCertificate c;
  c.K = number(require(j, "K"), "K");
  c.alpha = number(require(j, "alpha"), "alpha");
  c.epsilon = number(require(j, "epsilon"), "epsilon");
  const json& fl = require(j, "flavor");
  if (fl == "uniform_ed") c.flavor = Flavor::UniformED;
  else if (fl == "ned") c.flavor = Flavor::NED;
  else if (fl == "strong_ned") c.flavor = Flavor::StrongNED;
  else parse_fail("flavor must be uniform_ed, ned or strong_ned");
  c.projector = propagate_projector(sys, m, ref, w);
  return c;
}

namespace {

json provenance(const RunConfig& cfg, const std::string& timestamp) {
  json j;
  j["config"] = json::parse(cfg.echo.empty() ? "{}" : cfg.echo);
  j["window"] = {cfg.window.lo, cfg.window.hi};
  j["tolerances"] = {{"bisect_tol", cfg.bisect_tol},
                     {"k_cap", cfg.k_cap},
                     {"excess_tol", kExcessTolerance},
                     {"stability_tol", cfg.fit().stability_tol}};
  j["horizon"] = cfg.horizon;
  j["nonuniform_exponent"] = cfg.exponent == ExponentMode::Absolute ? "absolute" : "signed";
  j["timestamp"] = timestamp;
  return j;
}

json witness(const Witness& w) { return {{"k", w.k}, {"l", w.l}}; }

json verdict_json(const ResolventVerdict& v) {
  json j;
  j["gamma"] = v.gamma;
  j["status"] = std::string(to_string(v.status));
  j["stable_dim"] = v.stable_dim;
  if (v.certificate) j["certificate"] = json::parse(certificate_to_json(*v.certificate));
  return j;
}

json basis_json(const std::optional<BundleBasis>& b) {
  if (!b) return nullptr;
  return {{"fiber", b->fiber}, {"dim", b->dim()}, {"basis", matrix_to(b->basis)}};
}

void flatten(const json& j, const std::string& path, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), os);
  } else {
    os << path << "," << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string verify_report(const RunConfig& cfg, const DichotomyCertificate& cert,
                          const ViolationReport& rep,
                          const std::optional<DichotomyCertificate>& grid_fit,
                          const std::string& timestamp) {
  json j;
  j["command"] = "verify";
  j["provenance"] = provenance(cfg, timestamp);
  j["certificate"] = json::parse(certificate_to_json(cert));
  j["pass"] = rep.pass;
  j["max_stable_excess"] = rep.max_stable_excess;
  j["stable_witness"] = witness(rep.stable_witness);
  j["max_unstable_excess"] = rep.max_unstable_excess;
  j["unstable_witness"] = witness(rep.unstable_witness);
  j["grid_fit"] = grid_fit ? json::parse(certificate_to_json(*grid_fit)) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string spectrum_report(const RunConfig& cfg, const SpectrumEstimate& est,
                            const std::optional<CandidateComparison>& cmp,
                            const std::string& timestamp) {
  json j;
  j["command"] = "spectrum";
  j["provenance"] = provenance(cfg, timestamp);
  j["bracket"] = {est.bracket_lo, est.bracket_hi};
  if (est.growth)
    j["growth_bound"] = {{"K", est.growth->K}, {"a", est.growth->a}, {"epsilon", est.growth->epsilon}};
  json ivs = json::array();
  for (const auto& iv : est.intervals) {
    ivs.push_back({{"lo", iv.lo},
                   {"hi", iv.hi},
                   {"lo_bracket", {iv.lo, iv.lo_inner}},
                   {"hi_bracket", {iv.hi_inner, iv.hi}},
                   {"unbounded_below", iv.unbounded_below},
                   {"unbounded_above", iv.unbounded_above}});
  }
  j["intervals"] = std::move(ivs);
  json cuts = json::array();
  json dims = json::array();
  for (const auto& c : est.cuts) {
    cuts.push_back(verdict_json(c));
    dims.push_back(c.stable_dim);
  }
  j["cuts"] = std::move(cuts);
  j["stable_dims"] = std::move(dims);
  j["saturated"] = est.saturated;
  j["monotone_dims"] = est.monotone_dims;
  j["diagnostics"] = est.diagnostics;
  if (cmp) {
    json c;
    json cands = json::array();
    for (std::size_t i = 0; i < cmp->candidates.size(); ++i)
      cands.push_back({{"interval", {cmp->candidates[i].first, cmp->candidates[i].second}},
                       {"relative_error", cmp->relative_errors[i]}});
    c["candidates"] = std::move(cands);
    c["matched"] = cmp->matched;
    c["discrepancy"] = cmp->candidates_disagree;
    j["candidate_comparison"] = std::move(c);
  }
  return j.dump(2) + "\n";
}

std::string reduce_report(const RunConfig& cfg, const SpectrumEstimate& est, const CascadeResult& res,
                          const SimilarityReport& sim, const std::string& timestamp) {
  const Reduction& red = res.reduction;
  json j;
  j["command"] = "reduce";
  j["provenance"] = provenance(cfg, timestamp);
  json cuts = json::array();
  for (const auto& c : est.cuts) cuts.push_back({{"gamma", c.gamma}, {"stable_dim", c.stable_dim}});
  j["cuts"] = std::move(cuts);
  j["block_dims"] = red.blocks.dims;
  j["transform_window"] = {red.transform.window.lo, red.transform.window.hi};
  j["fitted_M"] = red.transform.fitted_M;
  j["fitted_eps"] = red.transform.fitted_eps;
  j["degeneracy"] = std::string(to_string(red.transform.degeneracy));
  j["max_off_diagonal"] = red.blocks.max_off_diagonal;
  j["conjugation_residual"] = sim.max_residual;
  j["conjugation_worst_k"] = sim.worst_k;
  j["similarity_pass"] = sim.pass;
  json spectra = json::array();
  for (const auto& e : res.block_spectra) {
    json ivs = json::array();
    for (const auto& iv : e.intervals) ivs.push_back({iv.lo, iv.hi});
    spectra.push_back(std::move(ivs));
  }
  j["block_spectra"] = std::move(spectra);
  json per_k = json::array();
  for (long k = red.transform.window.lo; k <= red.transform.window.hi; ++k) {
    json e{{"k", k}, {"S", matrix_to(red.transform.at(k))}};
    if (k < red.transform.window.hi) e["B"] = matrix_to(red.blocks.assembled.transition(k));
    per_k.push_back(std::move(e));
  }
  j["per_k"] = std::move(per_k);
  j["diagnostics"] = res.diagnostics;
  return j.dump(2) + "\n";
}

std::string bundles_report(const RunConfig& cfg, double gamma, long fiber,
                           const std::optional<BundleBasis>& stable,
                           const std::optional<BundleBasis>& unstable, bool complementary,
                           const std::string& error, const std::string& timestamp) {
  json j;
  j["command"] = "bundles";
  j["provenance"] = provenance(cfg, timestamp);
  j["gamma"] = gamma;
  j["fiber"] = fiber;
  j["stable"] = basis_json(stable);
  j["unstable"] = basis_json(unstable);
  j["complementary"] = complementary;
  j["error"] = error.empty() ? json(nullptr) : json(error);
  return j.dump(2) + "\n";
}

std::string scan_csv(const SpectrumEstimate& est) {
  std::ostringstream os;
  os << std::setprecision(17) << "gamma,status,stable_dim\n";
  for (const auto& p : est.scan) os << p.gamma << "," << to_string(p.status) << "," << p.stable_dim << "\n";
  return os.str();
}

std::string profile_csv(const DichotomyProfile& profile, const DichotomyCertificate& cert,
                        ExponentMode mode) {
  std::ostringstream os;
  os << std::setprecision(17) << "side,k,l,log_norm,log_bound\n";
  const double lk = std::log(cert.K), la = std::log(cert.alpha), le = std::log(cert.epsilon);
  for (const auto& e : profile.stable())
    os << "stable," << e.k << "," << e.l << "," << e.log_norm << ","
       << lk + e.distance * la + nonuniform_exponent(e.l, mode) * le << "\n";
  for (const auto& e : profile.unstable())
    os << "unstable," << e.k << "," << e.l << "," << e.log_norm << ","
       << lk + e.distance * la + nonuniform_exponent(e.l, mode) * le << "\n";
  return os.str();
}

std::string blocks_csv(const BlockSystem& blocks, const Window& w) {
  std::ostringstream os;
  os << std::setprecision(17) << "k,block,row,col,value\n";
  for (long k = w.lo; k < w.hi; ++k) {
    for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
      const Matrix m = blocks.blocks[b].transition(k);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          os << k << "," << b << "," << r << "," << c << "," << m(r, c) << "\n";
    }
  }
  return os.str();
}

std::string flatten_csv(const std::string& json_report) {
  std::ostringstream os;
  os << "path,value\n";
  flatten(json::parse(json_report), "", os);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace ned
