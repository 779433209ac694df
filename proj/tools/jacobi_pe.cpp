#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jpe/fsm.hpp"
#include "jpe/io.hpp"
#include "jpe/pseudospec.hpp"
#include "jpe/raster.hpp"
#include "jpe/regions.hpp"
#include "jpe/symbols.hpp"
#include "jpe/tridiag.hpp"

namespace {

using jpe::cplx;

constexpr int kExitParse = 2;
constexpr int kExitGrid = 3;
constexpr int kExitDiverging = 4;
constexpr int kExitSingularWitness = 5;

[[noreturn]] void fail(int code, const std::string& message,
                       nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = message;
  extra["code"] = code;
  std::cerr << extra.dump() << "\n";
  std::exit(code);
}

std::vector<double> parse_doubles(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(sep, pos);
    std::string tok = text.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(kExitParse, "cannot parse number: '" + tok + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

// "a..b[:step]" or a comma list.
std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    std::size_t colon = text.find(':', dots);
    try {
      int a = std::stoi(text.substr(0, dots));
      int b = std::stoi(text.substr(
          dots + 2, colon == std::string::npos ? std::string::npos
                                               : colon - dots - 2));
      int step = colon == std::string::npos
                     ? 1
                     : std::stoi(text.substr(colon + 1));
      if (step < 1 || b < a) throw std::invalid_argument(text);
      for (int n = a; n <= b; n += step) out.push_back(n);
    } catch (const std::exception&) {
      fail(kExitParse, "cannot parse size range: '" + text + "'");
    }
  } else {
    for (double d : parse_doubles(text)) out.push_back(static_cast<int>(d));
  }
  for (int n : out)
    if (n < 1) fail(kExitParse, "sizes must be >= 1");
  return out;
}

jpe::ComplexGrid parse_grid(const std::string& window, const std::string& res) {
  std::vector<double> w = parse_doubles(window);
  if (w.size() != 4) fail(kExitGrid, "--window needs x0,x1,y0,y1");
  std::vector<double> r = parse_doubles(res);
  if (r.empty() || r.size() > 2) fail(kExitGrid, "--res needs N or NX,NY");
  int nx = static_cast<int>(r[0]);
  int ny = static_cast<int>(r.size() == 2 ? r[1] : r[0]);
  try {
    return jpe::ComplexGrid(w[0], w[1], w[2], w[3], nx, ny);
  } catch (const std::exception& e) {
    fail(kExitGrid, e.what());
  }
}

jpe::SymbolTriple parse_triple_or_exit(const std::string& text) {
  try {
    return jpe::parse_triple(text);
  } catch (const std::exception& e) {
    fail(kExitParse, std::string("bad --triple: ") + e.what());
  }
}

cplx parse_complex_pair(const std::string& text) {
  std::vector<double> v = parse_doubles(text);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  fail(kExitParse, "expected 're' or 're,im': '" + text + "'");
}

jpe::NormKind parse_norm(const std::string& text) {
  if (text == "1") return jpe::NormKind::P1;
  if (text == "2") return jpe::NormKind::P2;
  if (text == "inf") return jpe::NormKind::Pinf;
  fail(kExitParse, "--norm must be 1, 2 or inf");
}

unsigned resolve_threads(unsigned flag_value) {
  if (flag_value != 0) return flag_value;
  if (const char* env = std::getenv("JACOBI_PE_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 0;  // library default: hardware concurrency
}

struct OutputSet {
  std::filesystem::path dir;
  jpe::RunManifest manifest;

  void emit(const std::string& name, const std::string& bytes) {
    jpe::write_file((dir / name).string(), bytes);
    manifest.outputs.emplace_back(name, jpe::fnv1a(bytes));
  }
  void finish() {
    jpe::write_file((dir / "manifest.json").string(), manifest.to_json());
  }
};

OutputSet open_outputs(const std::string& out_dir, const std::string& command,
                       const jpe::SymbolTriple& triple, std::uint64_t seed) {
  OutputSet o;
  o.dir = out_dir;
  std::filesystem::create_directories(o.dir);
  o.manifest.command = command;
  o.manifest.triple = triple.to_string();
  o.manifest.seed = seed;
  return o;
}

int cmd_regions(const std::string& triple_text, const std::string& window,
                const std::string& res, const std::string& out_dir,
                unsigned threads, bool exact_bidiagonal,
                const std::string& format) {
  jpe::SymbolTriple triple = parse_triple_or_exit(triple_text);
  jpe::ComplexGrid grid = parse_grid(window, res);
  jpe::RegionMap map = jpe::region_map(triple, grid, threads);

  std::map<std::string, std::size_t> counts;
  for (jpe::RegionLabel l : map.labels) ++counts[jpe::label_name(l)];
  for (const char* name : {"E0", "E", "E1", "Em1", "OnBoundary"})
    std::cout << name << " " << counts[name] << "\n";

  OutputSet out = open_outputs(out_dir, "regions", triple, 0);
  out.manifest.params = {{"window", window}, {"res", res}};
  if (format == "csv" || format == "all")
    out.emit("regions.csv", jpe::region_map_csv(map));
  if (format == "ppm" || format == "all")
    out.emit("regions.ppm", jpe::region_map_ppm(map));
  if (exact_bidiagonal) {
    try {
      jpe::BidiagonalSpectra bs = jpe::bidiagonal_spectra(triple, grid);
      out.emit("sigma.csv", jpe::mask_csv(grid, bs.sigma_mask));
      out.emit("sigma_plus.csv", jpe::mask_csv(grid, bs.sigma_plus_mask));
      out.emit("sigma.pbm", jpe::mask_pbm(grid, bs.sigma_mask));
      out.emit("sigma_plus.pbm", jpe::mask_pbm(grid, bs.sigma_plus_mask));
    } catch (const std::invalid_argument& e) {
      fail(kExitParse, e.what());
    }
  }
  out.finish();
  return 0;
}

int cmd_pseudospec(const std::string& triple_text, std::uint64_t seed,
                   const std::string& sizes_text, const std::string& window,
                   const std::string& res, const std::string& eps_text,
                   const std::string& norm_text, const std::string& out_dir,
                   unsigned threads, const std::string& format) {
  jpe::SymbolTriple triple = parse_triple_or_exit(triple_text);
  jpe::ComplexGrid grid = parse_grid(window, res);
  std::vector<int> sizes = parse_sizes(sizes_text);
  std::vector<double> eps_list = parse_doubles(eps_text);
  for (double e : eps_list)
    if (!(e > 0)) fail(kExitParse, "--eps entries must be > 0");
  jpe::NormKind kind = parse_norm(norm_text);

  jpe::DiagonalStream stream(triple, seed);
  OutputSet out = open_outputs(out_dir, "pseudospec", triple, seed);
  out.manifest.params = {{"window", window}, {"res", res},
                         {"sizes", sizes_text}, {"eps", eps_text},
                         {"norm", norm_text}};

  std::size_t lower_bound_points = 0;
  jpe::ResolventField field;
  for (int n : sizes) {
    field = jpe::resolvent_field(stream, n, grid, kind, threads);
    for (std::uint8_t c : field.certified_lower) lower_bound_points += c;
    std::string tag = "n" + std::to_string(n);
    if (format == "csv" || format == "all")
      out.emit("field_" + tag + ".csv", jpe::field_csv(field));
    if (format == "ppm" || format == "all")
      out.emit("field_" + tag + ".pgm", jpe::field_pgm(field));
    for (double e : eps_list) {
      jpe::EpsSet set = jpe::eps_set(field, e);
      std::string ename = "eps" + jpe::fmt(e) + "_" + tag;
      if (format == "csv" || format == "all")
        out.emit(ename + ".csv", jpe::eps_set_csv(set));
      if (format == "ppm" || format == "all")
        out.emit(ename + ".pbm", jpe::mask_pbm(grid, set.membership));
    }
  }
  if (sizes.size() > 1 && kind == jpe::NormKind::P2) {
    jpe::ConvergenceReport rep =
        jpe::convergence_sweep(stream, grid, eps_list.front(), sizes, threads);
    nlohmann::json j;
    j["sizes"] = rep.sizes;
    j["counts"] = rep.counts;
    j["consecutive_hausdorff"] = rep.consecutive_hausdorff;
    j["inclusion_violations"] = rep.inclusion_violations;
    j["counts_nondecreasing"] = rep.counts_nondecreasing;
    out.emit("convergence.json", j.dump(2) + "\n");
  }
  out.finish();
  if (lower_bound_points > 0)
    std::cerr << nlohmann::json{
                     {"warning", "norm estimates not fully converged"},
                     {"points", lower_bound_points}}
                     .dump()
              << "\n";
  std::cout << "fields " << sizes.size() << "\n";
  return 0;
}

int cmd_fsm(const std::string& triple_text, std::uint64_t seed,
            const std::string& side_text, const std::string& rhs_text,
            int cutoff_count, int cutoff_step, const std::string& shift_text,
            const std::string& lambda_text, const std::string& out_dir) {
  jpe::SymbolTriple triple = parse_triple_or_exit(triple_text);
  cplx lambda = parse_complex_pair(lambda_text);
  jpe::Side side;
  if (side_text == "semi")
    side = jpe::Side::SemiInfinite;
  else if (side_text == "bi")
    side = jpe::Side::BiInfinite;
  else
    fail(kExitParse, "--side must be semi or bi");

  jpe::Rhs rhs;
  if (rhs_text.empty()) {
    rhs = jpe::Rhs::unit(1);
  } else {
    // "j:re[,im];j:re[,im];..."
    std::size_t pos = 0;
    while (pos < rhs_text.size()) {
      std::size_t next = rhs_text.find(';', pos);
      std::string tok = rhs_text.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos);
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        fail(kExitParse, "bad --rhs entry: '" + tok + "'");
      try {
        std::int64_t j = std::stoll(tok.substr(0, colon));
        rhs.support.emplace_back(j, parse_complex_pair(tok.substr(colon + 1)));
      } catch (const std::exception&) {
        fail(kExitParse, "bad --rhs entry: '" + tok + "'");
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }

  if (cutoff_count < 1 || cutoff_step < 1)
    fail(kExitParse, "--cutoffs needs count >= 1 and step >= 1");

  int kappa = 0;
  bool shift_auto = shift_text == "auto";
  if (shift_auto) {
    jpe::IndexClass ic = jpe::kappa_at(triple, lambda);
    if (!ic.kappa)
      fail(kExitDiverging,
           "lambda lies in the E region or on a boundary: no Fredholm index, "
           "the finite section method cannot be repaired by shifting");
    kappa = *ic.kappa;
  } else if (shift_text == "0") {
    kappa = 0;
  } else if (shift_text == "+1" || shift_text == "1") {
    kappa = 1;
  } else if (shift_text == "-1") {
    kappa = -1;
  } else {
    fail(kExitParse, "--shift must be auto, 0, +1 or -1");
  }
  if (kappa != 0 && side != jpe::Side::BiInfinite)
    fail(kExitParse, "index cancellation requires --side bi");

  jpe::FsmProblem problem{
      jpe::DiagonalStream(triple.shifted(lambda), seed), side, rhs,
      jpe::make_cutoffs(side, cutoff_count, cutoff_step), 0};
  if (kappa != 0) problem = jpe::cancel_index(problem, kappa);

  jpe::FsmReport report = jpe::fsm_solve(problem);

  OutputSet out = open_outputs(out_dir, "fsm", triple, seed);
  out.manifest.params = {{"side", side_text},
                         {"cutoff_count", std::to_string(cutoff_count)},
                         {"cutoff_step", std::to_string(cutoff_step)},
                         {"shift", shift_text},
                         {"lambda", lambda_text}};
  std::vector<int> ns;
  for (const jpe::Cutoff& c : problem.cutoffs)
    ns.push_back(static_cast<int>(c.hi - c.lo + 1));
  ns.resize(report.stability_profile.size());
  out.emit("report.json", jpe::fsm_report_json(report));
  out.emit("profile.csv", jpe::profile_csv(ns, report.stability_profile));
  out.finish();

  bool diverged =
      report.failure_mode == jpe::FsmFailure::ProfileDiverging ||
      report.failure_mode == jpe::FsmFailure::TruncationSingular;
  if (diverged && !shift_auto && kappa == 0) {
    jpe::IndexClass ic = jpe::kappa_at(triple, lambda);
    if (ic.kappa && *ic.kappa != 0) {
      std::string hint = "kappa=" + std::string(*ic.kappa > 0 ? "+" : "") +
                         std::to_string(*ic.kappa) + "; retry with --shift auto";
      fail(kExitDiverging, "finite sections diverge (" + hint + ")");
    }
  }
  std::cout << (report.converged ? "converged" : "not converged") << "\n";
  return 0;
}

int cmd_check(const std::string& triple_text, const std::string& lambda_text,
              int seed_count, const std::string& sizes_text,
              const std::string& out_dir) {
  jpe::SymbolTriple triple = parse_triple_or_exit(triple_text);
  cplx lambda = parse_complex_pair(lambda_text);
  std::vector<int> sizes = parse_sizes(sizes_text);
  if (seed_count < 1) fail(kExitParse, "--seeds must be >= 1");

  std::vector<std::uint64_t> seeds(seed_count);
  for (int i = 0; i < seed_count; ++i) seeds[i] = i + 1;
  jpe::StabilityEvidence ev =
      jpe::stability_check(triple, lambda, seeds, sizes);

  // Duality spot test on the sampled windows.
  double duality_err = 0;
  for (std::uint64_t seed : seeds) {
    jpe::FiniteJacobi F = jpe::shift_lambda(
        jpe::sample_finite(triple, sizes.back(), seed), lambda);
    double a = jpe::inv_norm(F, jpe::NormKind::P1).value;
    double b = jpe::inv_norm(jpe::reflect(F), jpe::NormKind::Pinf).value;
    if (std::isfinite(a) && std::isfinite(b) && std::max(a, b) > 0)
      duality_err = std::max(duality_err, std::abs(a - b) / std::max(a, b));
  }

  // Glueing trend: sigma_min of glued copies of a sampled window.
  std::vector<double> glue_sigmas;
  {
    jpe::FiniteJacobi F = jpe::shift_lambda(
        jpe::sample_finite(triple, std::min(sizes.back(), 40), seeds[0]),
        lambda);
    jpe::GlueFill fill{triple.U().front(), triple.V().front() - lambda,
                       triple.W().front()};
    for (int copies = 1; copies <= 4; ++copies)
      glue_sigmas.push_back(
          jpe::sigma_min(jpe::glueing_matrix(F, fill, copies)));
  }

  nlohmann::json j;
  j["ok"] = ev.ok;
  j["max_inv_norm"] = ev.max_inv_norm;
  j["duality_rel_err"] = duality_err;
  j["glueing_sigma_min"] = glue_sigmas;
  if (ev.witness) {
    j["witness"] = {{"seed", ev.witness->seed},
                    {"n", ev.witness->n},
                    {"inv_norm", std::isfinite(ev.witness->inv_norm)
                                     ? jpe::fmt(ev.witness->inv_norm)
                                     : "inf"}};
  }

  OutputSet out = open_outputs(out_dir, "check", triple, 0);
  out.manifest.params = {{"lambda", lambda_text},
                         {"seeds", std::to_string(seed_count)},
                         {"sizes", sizes_text}};
  out.emit("check.json", j.dump(2) + "\n");
  out.finish();

  std::cout << (ev.ok ? "pass" : "fail") << "\n";
  if (!ev.ok && ev.witness && !std::isfinite(ev.witness->inv_norm))
    fail(kExitSingularWitness,
         "singular finite section found: the triple is not compatible with "
         "index 0 at this lambda",
         {{"seed", ev.witness->seed}, {"n", ev.witness->n}});
  return ev.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectra, pseudospectra and finite sections of random Jacobi operators "
      "over finite alphabets"};
  app.require_subcommand(1);

  std::string triple_text, window = "-4,4,-4,4", res = "201";
  std::string sizes_text = "100..400:100", eps_text = "0.1", norm_text = "2";
  std::string out_dir = ".", format = "all", shift_text = "0";
  std::string side_text = "semi", rhs_text, lambda_text = "0";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int seed_count = 10, cutoff_count = 8, cutoff_step = 50;
  bool exact_bidiagonal = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--triple", triple_text, "alphabets, e.g. U=[-1,1];V=[0];W=[2]")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", threads,
                    "thread cap (0 = JACOBI_PE_THREADS or hardware)");
  };

  CLI::App* regions = app.add_subcommand("regions", "region map of the plane");
  add_common(regions);
  regions->add_option("--window", window, "x0,x1,y0,y1");
  regions->add_option("--res", res, "N or NX,NY");
  regions->add_flag("--exact-bidiagonal", exact_bidiagonal,
                    "also emit exact spectra masks (U={0} or W={0})");
  regions->add_option("--format", format, "csv|ppm|all");

  CLI::App* pseudospec =
      app.add_subcommand("pseudospec", "resolvent norm fields and eps-sets");
  add_common(pseudospec);
  pseudospec->add_option("--seed", seed, "stream seed");
  pseudospec->add_option("--window", window, "x0,x1,y0,y1");
  pseudospec->add_option("--res", res, "N or NX,NY");
  pseudospec->add_option("--sizes", sizes_text, "a..b[:step] or list");
  pseudospec->add_option("--eps", eps_text, "eps list");
  pseudospec->add_option("--norm", norm_text, "1|2|inf");
  pseudospec->add_option("--format", format, "csv|ppm|all");

  CLI::App* fsm = app.add_subcommand("fsm", "finite section solve");
  add_common(fsm);
  fsm->add_option("--seed", seed, "stream seed");
  fsm->add_option("--side", side_text, "semi|bi");
  fsm->add_option("--rhs", rhs_text, "j:re[,im];... (default 1:1)");
  fsm->add_option("--cutoff-count", cutoff_count, "number of truncations");
  fsm->add_option("--cutoff-step", cutoff_step, "truncation growth step");
  fsm->add_option("--shift", shift_text, "auto|0|+1|-1");
  fsm->add_option("--lambda", lambda_text, "spectral parameter re[,im]");

  CLI::App* check = app.add_subcommand("check", "stability / Coburn check");
  add_common(check);
  check->add_option("--lambda", lambda_text, "spectral parameter re[,im]");
  check->add_option("--seeds", seed_count, "number of sampling seeds");
  check->add_option("--sizes", sizes_text, "a..b[:step] or list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << nlohmann::json{{"error", e.what()}, {"code", kExitParse}}
                     .dump()
              << "\n";
    return kExitParse;
  }

  threads = resolve_threads(threads);
  if (regions->parsed())
    return cmd_regions(triple_text, window, res, out_dir, threads,
                       exact_bidiagonal, format);
  if (pseudospec->parsed())
    return cmd_pseudospec(triple_text, seed, sizes_text, window, res, eps_text,
                          norm_text, out_dir, threads, format);
  if (fsm->parsed())
    return cmd_fsm(triple_text, seed, side_text, rhs_text, cutoff_count,
                   cutoff_step, shift_text, lambda_text, out_dir);
  if (check->parsed())
    return cmd_check(triple_text, lambda_text, seed_count, sizes_text, out_dir);
  return kExitParse;
}
