// ned: dichotomy certificates, spectrum estimates and block reductions for
// nonautonomous linear difference systems, driven by a JSON config.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ned/io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;
constexpr int kNotResolvent = 3;
constexpr int kNoGap = 4;

struct Args {
  std::string config;
  std::string out;
  std::string cert;
  std::optional<double> gamma;
  std::optional<long> fiber;
};

fs::path out_dir(const ned::RunConfig& cfg, const Args& args) {
  return args.out.empty() ? fs::path(cfg.output_dir) : fs::path(args.out);
}

// Writes the report as JSON or as flattened CSV per the config.
void emit(const ned::RunConfig& cfg, const fs::path& dir, const std::string& stem, const std::string& report) {
  if (cfg.report_format == ned::ReportFormat::Json)
    ned::write_file(dir / (stem + ".json"), report);
  else
    ned::write_file(dir / (stem + ".csv"), ned::flatten_csv(report));
}

int cmd_verify(const Args& args) {
  const ned::RunConfig cfg = ned::load_config(args.config);
  if (args.cert.empty()) throw ned::Error(ned::ErrorKind::ParseError, "verify needs --cert <path>");
  const ned::DichotomyCertificate cert =
      ned::certificate_from_json(ned::read_file(args.cert), cfg.system, cfg.window);
  const ned::DichotomyProfile profile(cfg.system, cert.projector, cfg.window);
  const ned::ViolationReport rep = ned::verify_certificate(profile, cert, cfg.exponent);
  const auto grid_fit = ned::fit_constants(profile, cert.projector, cfg.alpha_grid, cfg.eps_grid, cfg.fit());
  const fs::path dir = out_dir(cfg, args);
  emit(cfg, dir, "verify_report", ned::verify_report(cfg, cert, rep, grid_fit, ned::utc_timestamp()));
  ned::write_file(dir / "verify_lognorms.csv", ned::profile_csv(profile, cert, cfg.exponent));
  std::cout << (rep.pass ? "pass" : "fail") << " max_stable_excess=" << rep.max_stable_excess
            << " max_unstable_excess=" << rep.max_unstable_excess << "\n";
  return rep.pass ? kPass : kFail;
}

int cmd_spectrum(const Args& args) {
  const ned::RunConfig cfg = ned::load_config(args.config);
  const ned::SpectrumEstimate est =
      ned::estimate_spectrum(cfg.system, cfg.window, cfg.gamma_bracket, cfg.spectrum());
  std::optional<ned::CandidateComparison> cmp;
  const auto& p = cfg.system.params();
  if (cfg.system.name() == "paper_scalar" && est.intervals.size() == 1 && p.size() == 2)
    cmp = ned::compare_to_candidates(est.intervals.front(), ned::oscillating_scalar_candidates(p[0], p[1]),
                                     5e-3);
  const fs::path dir = out_dir(cfg, args);
  emit(cfg, dir, "spectrum_report", ned::spectrum_report(cfg, est, cmp, ned::utc_timestamp()));
  ned::write_file(dir / "spectrum_scan.csv", ned::scan_csv(est));
  for (const auto& iv : est.intervals) std::cout << "[" << iv.lo << ", " << iv.hi << "]\n";
  if (cmp && cmp->candidates_disagree)
    std::cout << "note: the two stated intervals for this example disagree; matched candidate "
              << cmp->matched << "\n";
  for (const auto& d : est.diagnostics) std::cout << "diagnostic: " << d << "\n";
  return est.saturated ? kPass : kFail;
}

int cmd_reduce(const Args& args) {
  const ned::RunConfig cfg = ned::load_config(args.config);
  const ned::SpectrumConfig sc = cfg.spectrum();
  const ned::SpectrumEstimate est = ned::estimate_spectrum(cfg.system, cfg.window, cfg.gamma_bracket, sc);
  bool resolvent_cut = false;
  for (const auto& c : est.cuts) resolvent_cut = resolvent_cut || c.status == ned::Status::Resolvent;
  if (!resolvent_cut) {
    std::cerr << "no resolvent cut points in the bracket; nothing to reduce\n";
    return kNotResolvent;
  }
  const ned::Window w = cfg.system.clip(cfg.window.expanded(cfg.reduce_margin));
  const ned::CascadeResult res = ned::full_reduction(cfg.system, est, w, sc);
  const ned::SimilarityReport sim =
      ned::verify_weak_similarity(cfg.system, res.reduction.blocks.assembled, res.reduction.transform, w);
  const fs::path dir = out_dir(cfg, args);
  emit(cfg, dir, "reduce_report", ned::reduce_report(cfg, est, res, sim, ned::utc_timestamp()));
  ned::write_file(dir / "reduce_blocks.csv", ned::blocks_csv(res.reduction.blocks, w));
  std::cout << "blocks:";
  for (int d : res.reduction.blocks.dims) std::cout << " " << d;
  std::cout << " residual=" << sim.max_residual << "\n";
  return sim.pass ? kPass : kFail;
}

int cmd_bundles(const Args& args) {
  const ned::RunConfig cfg = ned::load_config(args.config);
  if (!args.gamma) throw ned::Error(ned::ErrorKind::ParseError, "bundles needs --gamma <float>");
  const double gamma = *args.gamma;
  const long l = args.fiber.value_or(cfg.window.mid());
  std::optional<ned::BundleBasis> s, u;
  std::string error;
  bool complementary = false;
  try {
    s = ned::stable_bundle(cfg.system, gamma, l, cfg.horizon, 1.0, cfg.exponent);
    u = ned::unstable_bundle(cfg.system, gamma, l, cfg.horizon, 1.0, cfg.exponent);
    complementary = s->dim() + u->dim() == cfg.system.dimension() &&
                    ned::intersect_subspaces(*s, *u).dim() == 0;
  } catch (const ned::Error& e) {
    if (e.kind() != ned::ErrorKind::NoSpectralGap) throw;
    error = e.what();
  }
  emit(cfg, out_dir(cfg, args), "bundles_report",
       ned::bundles_report(cfg, gamma, l, s, u, complementary, error, ned::utc_timestamp()));
  if (!error.empty()) {
    std::cerr << error << "\n";
    return kNoGap;
  }
  std::cout << "stable dim " << s->dim() << ", unstable dim " << u->dim()
            << (complementary ? ", complementary" : ", not complementary") << "\n";
  return complementary ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonuniform dichotomy spectrum toolkit"};
  app.require_subcommand(1);
  Args args;
  const auto common = [&args](CLI::App* sub) {
    sub->add_option("--config", args.config, "JSON run configuration")->required();
    sub->add_option("--out", args.out, "output directory (overrides output_dir)");
    sub->add_option("--gamma", args.gamma, "weight gamma > 0");
    sub->add_option("--fiber", args.fiber, "fiber index l");
  };
  CLI::App* verify = app.add_subcommand("verify", "check a dichotomy certificate");
  common(verify);
  verify->add_option("--cert", args.cert, "certificate JSON");
  CLI::App* spectrum = app.add_subcommand("spectrum", "estimate the dichotomy spectrum");
  common(spectrum);
  CLI::App* reduce = app.add_subcommand("reduce", "block-diagonalize along the spectral cuts");
  common(reduce);
  CLI::App* bundles = app.add_subcommand("bundles", "stable and unstable bundles at one fiber");
  common(bundles);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadInput;
  }

  try {
    if (verify->parsed()) return cmd_verify(args);
    if (spectrum->parsed()) return cmd_spectrum(args);
    if (reduce->parsed()) return cmd_reduce(args);
    if (bundles->parsed()) return cmd_bundles(args);
  } catch (const ned::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.kind()) {
      case ned::ErrorKind::BracketNotResolvent:
        std::cerr << "hint: widen gamma_bracket, e.g. to [1/(a eps^2), a eps^2] from the growth bound\n";
        return kNotResolvent;
      case ned::ErrorKind::CutPointNotResolvent:
        return kNotResolvent;
      case ned::ErrorKind::NoSpectralGap:
        return kNoGap;
      case ned::ErrorKind::BlockSpectrumMismatch:
      case ned::ErrorKind::WhitneyFailure:
        return kFail;
      default:
        return kBadInput;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
