#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "gridtomo/bench.hpp"
#include "gridtomo/bra.hpp"
#include "gridtomo/error.hpp"
#include "gridtomo/ghost.hpp"
#include "gridtomo/image_io.hpp"
#include "gridtomo/lattice.hpp"
#include "gridtomo/oracle.hpp"
#include "gridtomo/phantom.hpp"
#include "gridtomo/projector.hpp"
#include "gridtomo/solver.hpp"

using namespace gridtomo;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::string format;
};

struct Problem {
  std::string grid;
  std::string dirs;
};

void add_problem(CLI::App* cmd, Problem& p, bool grid_required = true) {
  auto* g = cmd->add_option("--grid", p.grid, "grid size MxN");
  if (grid_required) g->required();
  cmd->add_option("--dirs", p.dirs, "direction set JSON file")->required()->check(CLI::ExistingFile);
}

ImageFormat out_format(const Globals& g, const std::string& path) {
  return g.format.empty() ? format_for_path(path) : parse_image_format(g.format);
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file(path, j.dump(2) + "\n");
  }
}

std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find(':');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item));
      } else {
        // a:b:step
        const auto second = item.find(':', dash + 1);
        const int a = std::stoi(item.substr(0, dash));
        const int b = std::stoi(item.substr(dash + 1, second == std::string::npos ? std::string::npos : second - dash - 1));
        const int step = second == std::string::npos ? 1 : std::stoi(item.substr(second + 1));
        if (step <= 0) throw Error(ErrorCode::InvalidArgument, "schedule step must be positive");
        for (int k = a; k <= b; k += step) out.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad schedule entry '" + item + "'");
    }
  }
  return out;
}

struct PhantomArgs {
  std::string image;
  std::string kind;
  double density = 0.5;
  std::string shape = "smooth";
  std::string fixture;
};

void add_phantom_args(CLI::App* cmd, PhantomArgs& a) {
  cmd->add_option("--image", a.image, "phantom image file")->check(CLI::ExistingFile);
  cmd->add_option("--kind", a.kind, "generated phantom: random, shapes or fixture")
      ->check(CLI::IsMember({"random", "shapes", "fixture"}));
  cmd->add_option("--density", a.density, "density of random phantoms")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--shape", a.shape, "shape class: smooth, fragmented, holed");
  cmd->add_option("--fixture", a.fixture, "fixture name");
}

Image make_phantom(const PhantomArgs& a, std::optional<GridDims> grid, const Globals& g) {
  if (!a.image.empty()) return threshold(load_image(a.image, grid));
  PhantomSpec spec;
  if (a.kind == "fixture" || (!a.fixture.empty() && a.kind.empty())) {
    spec = PhantomSpec::fixture(a.fixture.empty() ? "sample-5x5" : a.fixture);
  } else {
    if (!grid) throw Error(ErrorCode::InvalidArgument, "--grid is required for generated phantoms");
    if (a.kind == "shapes") {
      spec = PhantomSpec::shapes(*grid, parse_shape_class(a.shape), g.seed);
    } else if (a.kind == "random") {
      spec = PhantomSpec::random(*grid, a.density, g.seed);
    } else {
      throw Error(ErrorCode::InvalidArgument, "give --image, --kind or --fixture");
    }
  }
  Image img = generate_phantom(spec);
  if (grid && img.dims() != *grid) throw Error(ErrorCode::DimensionMismatch, "fixture size differs from --grid");
  return img;
}

std::optional<GridDims> optional_grid(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_grid(s);
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotUniquenessSet: return 2;
    case ErrorCode::DimensionMismatch: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary reconstruction from four lattice directions"};
  app.require_subcommand(1);
  Globals glob;
  app.add_option("--seed", glob.seed, "seed for generated phantoms");
  app.add_flag("--deterministic", glob.deterministic, "single-threaded, bitwise reproducible products");
  app.add_option("--format", glob.format, "image output format: pgm-ascii, pgm-binary, csv")
      ->check(CLI::IsMember({"pgm-ascii", "pgm-binary", "pgm", "csv"}));

  // validate
  Problem vprob;
  std::string vout;
  auto* validate = app.add_subcommand("validate", "check a four-direction set for binary uniqueness");
  add_problem(validate, vprob);
  validate->add_option("--out", vout, "write the report JSON here instead of stdout");

  // ghost
  Problem gprob;
  std::string gout, gimage;
  std::vector<int> gu;
  auto* ghost = app.add_subcommand("ghost", "describe F_S, the enlarging region and the ghost basis");
  add_problem(ghost, gprob);
  ghost->add_option("--out", gout, "write the description JSON here instead of stdout");
  ghost->add_option("--u", gu, "translation p q of a basis ghost to write")->expected(2);
  ghost->add_option("--image", gimage, "CSV file for the basis ghost g_u");

  // project
  Problem pprob;
  PhantomArgs pph;
  std::string pout, pmanifest, psave;
  auto* project = app.add_subcommand("project", "forward-project a phantom");
  add_problem(project, pprob, false);
  add_phantom_args(project, pph);
  project->add_option("--out", pout, "projection file (GTP1)")->required();
  project->add_option("--manifest", pmanifest, "bin manifest JSON (default: <out>.json)");
  project->add_option("--save-phantom", psave, "also write the phantom image");

  // reconstruct
  Problem rprob;
  std::string rproj, rout, rdiag, rtrace, rtruth, rreal;
  int rkappa = 0;
  double rtol = 0.0;
  bool rforce = false, rgeneral = false;
  auto* reconstruct = app.add_subcommand("reconstruct", "run BRA on a projection file");
  add_problem(reconstruct, rprob);
  reconstruct->add_option("--proj", rproj, "projection file (GTP1)")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--kappa", rkappa, "CGLS iterations")->required()->check(CLI::NonNegativeNumber);
  reconstruct->add_option("--out", rout, "binary image output")->required();
  reconstruct->add_flag("--force", rforce, "run even if the set fails the uniqueness check");
  reconstruct->add_option("--diag", rdiag, "diagnostics JSON");
  reconstruct->add_option("--tol", rtol, "stop once the normal residual falls below this");
  reconstruct->add_option("--trace", rtrace, "per-iteration residual CSV");
  reconstruct->add_option("--truth", rtruth, "compare the result with this image")->check(CLI::ExistingFile);
  reconstruct->add_option("--real-out", rreal, "CSV of the CGLS iterate");
  reconstruct->add_flag("--no-fast-path", rgeneral, "always subtract the ghost weights");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "brute-force checks for small instances");
  oracle->require_subcommand(1);
  Problem eprob;
  std::string eproj, edir;
  std::size_t ecap = 1000;
  auto* enumerate = oracle->add_subcommand("enumerate", "list every binary solution");
  add_problem(enumerate, eprob);
  enumerate->add_option("--proj", eproj, "projection file")->required()->check(CLI::ExistingFile);
  enumerate->add_option("--cap", ecap, "stop after this many solutions");
  enumerate->add_option("--out-dir", edir, "write each solution as solution_<i>.pgm");

  Problem mprob;
  std::string mproj, mout;
  auto* minnorm = oracle->add_subcommand("minnorm", "dense minimum-norm solution");
  add_problem(minnorm, mprob);
  minnorm->add_option("--proj", mproj, "projection file")->required()->check(CLI::ExistingFile);
  minnorm->add_option("--out", mout, "CSV output")->required();

  Problem aprob;
  std::string aimage, aproj, aout;
  int akappa = 0;
  auto* alphas = oracle->add_subcommand("alphas", "ghost weights of a known phantom");
  add_problem(alphas, aprob);
  alphas->add_option("--image", aimage, "the true phantom")->required()->check(CLI::ExistingFile);
  alphas->add_option("--kappa", akappa, "also recover the weights with this many CGLS iterations");
  alphas->add_option("--out", aout, "JSON output");

  // bench
  Problem bprob;
  PhantomArgs bph;
  std::string bschedule = "10,20,50,100", bout;
  auto* bench = app.add_subcommand("bench", "CGLS rounding versus BRA over a schedule of kappa");
  add_problem(bench, bprob, false);
  add_phantom_args(bench, bph);
  bench->add_option("--schedule", bschedule, "comma list, entries may be a:b:step");
  bench->add_option("--out", bout, "CSV output (default stdout)");

  // suggest-dirs
  int odd_n = 0;
  std::string sout, sgrid;
  auto* suggest = app.add_subcommand("suggest-dirs", "a set of binary uniqueness for an odd side");
  suggest->add_option("--odd-n", odd_n, "odd grid side N >= 5")->required();
  suggest->add_option("--grid", sgrid, "grid to validate against (default NxN)");
  suggest->add_option("--out", sout, "write the direction set JSON here");

  // phantom
  PhantomArgs phargs;
  std::string phgrid, phout;
  auto* phantom = app.add_subcommand("phantom", "generate a phantom image");
  phantom->add_option("--grid", phgrid, "grid size MxN");
  add_phantom_args(phantom, phargs);
  phantom->add_option("--out", phout, "image output")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto s = load_directions(vprob.dirs);
      const auto r = check_binary_uniqueness(s, parse_grid(vprob.grid));
      emit(report_json(r), vout);
      return r.is_binary_uniqueness_set ? 0 : 2;
    }

    if (*ghost) {
      const auto s = load_directions(gprob.dirs);
      const GridDims g = parse_grid(gprob.grid);
      const auto b = build_bad_configuration(s);
      const auto e = enlarging_region(s, g);
      const auto idx = build_ghost_index(b, e, g);
      json terms = json::array();
      for (const auto& px : b.pixels) terms.push_back({{"pos", {px.pos.x, px.pos.y}}, {"weight", px.weight}});
      json j{{"polynomial", expand_fs(s).to_string()},
             {"structure", std::string(to_string(b.structure.sign))},
             {"lambda0", {b.lambda0().x, b.lambda0().y}},
             {"lambda_delta", {b.lambda_delta().x, b.lambda_delta().y}},
             {"delta_weight", b.delta_weight()},
             {"terms", terms},
             {"region", {e.width, e.height}},
             {"ghost_dimension", ghost_dimension(s, g)},
             {"pixels_in_h", idx.pixels().size()},
             {"max_coverage", idx.max_coverage()},
             {"simple_rounding", simple_rounding_applicable(idx)}};
      emit(j, gout);
      if (!gu.empty()) {
        const Image gi = build_ghost_gu(b, e, g, {gu[0], gu[1]});
        if (gimage.empty()) throw Error(ErrorCode::InvalidArgument, "--u needs --image");
        save_image(gimage, gi, ImageFormat::Csv);
      }
      return 0;
    }

    if (*project) {
      const auto s = load_directions(pprob.dirs);
      const Image ph = make_phantom(pph, optional_grid(pprob.grid), glob);
      const auto a = build_matrix(s, ph.dims());
      const auto p = forward_project(a, ph, glob.deterministic);
      save_projection(pout, a.layout(), p);
      emit(manifest_json(a.layout()), pmanifest.empty() ? pout + ".json" : pmanifest);
      if (!psave.empty()) save_image(psave, ph, out_format(glob, psave));
      return 0;
    }

    if (*reconstruct) {
      const auto s = load_directions(rprob.dirs);
      const GridDims g = parse_grid(rprob.grid);
      const auto pf = load_projection(rproj);
      check_projection_layout(pf, build_layout(s, g));
      const BinaryReconstructor rec(s, g, rforce);
      BraOptions opt;
      opt.kappa = rkappa;
      if (rtol > 0.0) opt.residual_tol = rtol;
      opt.deterministic = glob.deterministic;
      opt.force = rforce;
      opt.fast_path = !rgeneral;
      const auto res = rec.reconstruct(pf.p, opt);
      save_image(rout, res.binary, out_format(glob, rout));
      if (!rreal.empty()) save_image(rreal, res.xk, ImageFormat::Csv);
      json diag = diagnostics_json(res);
      if (!rtruth.empty()) {
        const Metrics m = compare(threshold(load_image(rtruth, g)), res.binary);
        diag["percent_correct"] = m.percent_correct;
        diag["wrong_count"] = m.wrong_count;
        std::printf("%.4f%% correct, %zu wrong\n", m.percent_correct, m.wrong_count);
      }
      if (!rdiag.empty()) emit(diag, rdiag);
      if (!rtrace.empty()) {
        std::string csv = "iteration,residual_norm,normal_residual\n";
        for (std::size_t i = 0; i < res.trace.residual_norms.size(); ++i) {
          csv += std::to_string(i) + "," + format_double(res.trace.residual_norms[i]) + "," +
                 format_double(res.trace.normal_residuals[i]) + "\n";
        }
        write_file(rtrace, csv);
      }
      for (const auto& w : res.diagnostics.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }

    if (*enumerate) {
      const auto s = load_directions(eprob.dirs);
      const auto a = build_matrix(s, parse_grid(eprob.grid));
      const auto pf = load_projection(eproj);
      check_projection_layout(pf, a.layout());
      const auto r = enumerate_binary_solutions(a, pf.p, ecap);
      std::printf("%zu solutions%s\n", r.solutions.size(), r.truncated ? " (truncated)" : "");
      if (!edir.empty()) {
        for (std::size_t i = 0; i < r.solutions.size(); ++i) {
          const std::string name = edir + "/solution_" + std::to_string(i) + ".pgm";
          save_image(name, r.solutions[i], glob.format.empty() ? ImageFormat::PgmAscii : parse_image_format(glob.format));
        }
      }
      return 0;
    }

    if (*minnorm) {
      const auto s = load_directions(mprob.dirs);
      const auto a = build_matrix(s, parse_grid(mprob.grid));
      const auto pf = load_projection(mproj);
      check_projection_layout(pf, a.layout());
      save_image(mout, dense_min_norm(a, pf.p), ImageFormat::Csv);
      return 0;
    }

    if (*alphas) {
      const auto s = load_directions(aprob.dirs);
      const GridDims g = parse_grid(aprob.grid);
      const Image truth = threshold(load_image(aimage, g));
      const BinaryReconstructor rec(s, g, true);
      const auto exact = exact_alphas(truth, rec.configuration(), rec.region());
      std::optional<ReconstructionResult> res;
      if (akappa > 0) {
        BraOptions opt;
        opt.kappa = akappa;
        opt.deterministic = glob.deterministic;
        res = rec.reconstruct(forward_project(rec.matrix(), truth), opt);
      }
      json rows = json::array();
      for (std::size_t i = 0; i < exact.alpha.size(); ++i) {
        const Vec2 u = rec.region().point(i);
        json r{{"u", {u.x, u.y}},
               {"closed_form", alpha_closed_form(truth, rec.configuration(), u)},
               {"exact", exact.alpha[i]}};
        if (res) r["recovered"] = res->weights.alpha[i];
        rows.push_back(r);
      }
      emit(rows, aout);
      return 0;
    }

    if (*bench) {
      const auto s = load_directions(bprob.dirs);
      const Image truth = make_phantom(bph, optional_grid(bprob.grid), glob);
      const auto rows = run_bench(truth, s, parse_schedule(bschedule), glob.deterministic);
      for (const auto& r : rows) {
        if (r.bra_percent < r.cgls_percent) {
          std::cerr << "note: at kappa " << r.kappa << " BRA is below plain rounding\n";
        }
      }
      const std::string csv = bench_csv(rows);
      if (bout.empty()) {
        std::cout << csv;
      } else {
        write_file(bout, csv);
      }
      return 0;
    }

    if (*suggest) {
      const auto s = construct_set_odd_n(odd_n);
      const GridDims g = sgrid.empty() ? GridDims(odd_n, odd_n) : parse_grid(sgrid);
      const auto r = check_binary_uniqueness(s, g);
      emit(directions_json(s), sout);
      if (!r.is_binary_uniqueness_set) {
        std::cerr << "warning: not a set of binary uniqueness on this grid: " << r.reason << "\n";
      }
      return 0;
    }

    if (*phantom) {
      const Image img = make_phantom(phargs, optional_grid(phgrid), glob);
      save_image(phout, img, out_format(glob, phout));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
