#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gainterm/collision.hpp"
#include "gainterm/config.hpp"
#include "gainterm/grid.hpp"
#include "gainterm/report.hpp"
#include "gainterm/symbol.hpp"
#include "gainterm/verify.hpp"

namespace {

using namespace gainterm;

Vec3 parse_vec3(const std::string& s) {
  Vec3 v;
  char c1, c2;
  std::istringstream is(s);
  if (!(is >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
    throw CLI::ValidationError("expected 'x,y,z', got '" + s + "'");
  return v;
}

std::vector<report::Format> parse_formats(const std::string& s) {
  std::vector<report::Format> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "json") out.push_back(report::Format::Json);
    else if (item == "csv") out.push_back(report::Format::Csv);
    else if (item == "md") out.push_back(report::Format::Md);
    else throw CLI::ValidationError("unknown format '" + item + "'");
  }
  if (out.empty()) out = {report::Format::Json, report::Format::Csv, report::Format::Md};
  return out;
}

int emit_and_status(const std::vector<report::EstimateReport>& reps,
                    const std::string& dir, const std::string& formats) {
  auto fmts = parse_formats(formats);
  bool ok = true;
  for (const auto& r : reps) {
    auto written = report::emit_report(r, dir, fmts);
    int failed = r.failed_count();
    std::printf("suite %-18s checks %3zu  failed %d%s\n", r.suite.c_str(),
                r.checks.size(), failed,
                failed == 0 ? "" : "  (see report for details)");
    for (const auto& c : r.checks)
      if (!c.passed)
        std::printf("  %-6s %s  value=%.6g threshold=%.6g\n",
                    c.expected_defect ? "xfail" : "FAIL", c.name.c_str(), c.value,
                    c.threshold);
    for (const auto& w : written) std::printf("  wrote %s\n", w.c_str());
    if (failed > 0) ok = false;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gainterm: collision gain-operator quadrature, oscillatory-symbol "
      "machinery and the verification harness.\n\n"
      "Analytic function grammar (for --f/--g/--h):\n"
      "  gaussian(c=0,0,0;w=1;a=1)   bump(c=1,0,0;r=2)   constant(a=1)\n"
      "  modulate(kx,ky,kz; EXPR)    dilate(lambda; EXPR)\n"
      "  translate(mx,my,mz; EXPR)   EXPR+EXPR\n"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (env GAINTERM_* wins)");

  // ---- symbol ----
  auto* sym = app.add_subcommand("symbol", "oscillatory symbol evaluation / scans");
  std::string sx{"0,0,20"}, sxi{"20,0,0"};
  double sgamma = 1.0;
  std::string method{"both"};
  int scan_n = 0;
  std::uint64_t scan_seed = 7;
  std::string scan_out{"region3_scan.csv"};
  sym->add_option("--x", sx, "x as 'x,y,z'");
  sym->add_option("--xi", sxi, "xi as 'x,y,z'");
  sym->add_option("--gamma", sgamma, "kinetic exponent in [0,1]");
  sym->add_option("--method", method, "quad | stat | both");
  sym->add_option("--scan-region3", scan_n, "run a zone-III scan with N samples");
  sym->add_option("--seed", scan_seed, "scan seed");
  sym->add_option("--out", scan_out, "scan CSV path");

  // ---- qplus ----
  auto* qp = app.add_subcommand("qplus", "gain-term evaluation and checks");
  std::string qf{"gaussian()"}, qg{"gaussian()"}, qcheck, qout, qpoints;
  double qgamma = 0.0;
  std::string qcutoff{"full"};
  qp->add_option("--f", qf, "first function");
  qp->add_option("--g", qg, "second function");
  qp->add_option("--gamma", qgamma, "kinetic exponent");
  qp->add_option("--cutoff", qcutoff, "full | small | large");
  qp->add_option("--check", qcheck, "named check: mass");
  qp->add_option("--out", qout, "write the output grid (GFv1)");
  qp->add_option("--points", qpoints, "evaluate at 'x,y,z;x,y,z;...' (CSV rows)");

  // ---- radon ----
  auto* rd = app.add_subcommand("radon", "Radon-type angular averages");
  std::string rh{"gaussian()"}, rxs{"0,0,2"}, rvariant{"T"};
  double rgamma = 1.0;
  rd->add_option("--h", rh, "function");
  rd->add_option("--x", rxs, "evaluation point");
  rd->add_option("--gamma", rgamma, "kinetic exponent");
  rd->add_option("--variant", rvariant, "T | T_small");

  // ---- norms ----
  auto* nm = app.add_subcommand("norms", "grid norms of an analytic function");
  std::string nf{"gaussian()"};
  nm->add_option("--f", nf, "function");

  // ---- verify ----
  auto* vf = app.add_subcommand("verify", "run verification suites");
  std::string suite;
  std::string out_dir;
  std::string formats{"json,csv,md"};
  std::uint64_t vseed = 0;
  int vtrials = 0;
  vf->add_option("suite", suite,
                 "partition | geometry | stationary | identity | estimate | "
                 "schur | region3 | all")
      ->required();
  vf->add_option("--out", out_dir, "report directory (default from config)");
  vf->add_option("--format", formats, "comma list: json,csv,md");
  vf->add_option("--seed", vseed, "override config seed");
  vf->add_option("--trials", vtrials, "override config trial count");

  // ---- report ----
  auto* rp = app.add_subcommand("report", "re-emit a JSON report as csv/md");
  std::string rin, rformats{"md"}, rdir{"."};
  rp->add_option("--in", rin, "ERv1 JSON file")->required();
  rp->add_option("--format", rformats, "comma list: json,csv,md");
  rp->add_option("--out", rdir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Config cfg = Config::load(config_path);
    if (vseed != 0) cfg.seed = vseed;
    if (vtrials != 0) cfg.trials = vtrials;
    partitions::BumpChain bc(cfg.ramp == "quintic" ? partitions::Ramp::Quintic
                                                   : partitions::Ramp::Exp);

    if (*sym) {
      if (scan_n > 0) {
        auto rows = symbol::region3_scan(scan_seed, scan_n, sgamma, bc, cfg.node_mult);
        std::ofstream os(scan_out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + scan_out);
        symbol::write_scan_csv(os, rows);
        std::printf("wrote %s (%d rows), slope %.4f\n", scan_out.c_str(), scan_n,
                    symbol::scan_slope(rows));
        return 0;
      }
      Vec3 x = parse_vec3(sx), xi = parse_vec3(sxi);
      std::printf("lambda,theta0,re_a,im_a,abs_norm,method\n");
      auto print_row = [&](const symbol::SymbolEval& ev, const char* name) {
        std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", ev.lambda, ev.theta0,
                    ev.value.real(), ev.value.imag(),
                    std::abs(ev.value) * std::sqrt(ev.lambda), name);
      };
      if (method == "quad" || method == "both")
        print_row(symbol::symbol_direct_auto(x, xi, sgamma, cfg.node_mult), "quadrature");
      if (method == "stat" || method == "both")
        print_row(symbol::symbol_stationary(x, xi, sgamma, cfg.lambda_min), "stationary");
      if (method == "both") {
        auto cmp = symbol::symbol_compare(x, xi, sgamma, cfg.node_mult, cfg.lambda_min);
        std::printf("# rel_err %.17g\n", cmp.rel_err);
      }
      return 0;
    }

    if (*qp) {
      auto f = parse_analytic(qf);
      auto g = parse_analytic(qg);
      collision::Cutoff ct = qcutoff == "small" ? collision::Cutoff::Small
                             : qcutoff == "large" ? collision::Cutoff::Large
                                                  : collision::Cutoff::Full;
      auto kernel = collision::KernelSpec::make(qgamma, ct);
      grid::VelocityGrid vg = grid::VelocityGrid::make(cfg.out_n, cfg.grid_L);
      collision::QuadConfig quad = collision::QuadConfig::make_default(
          vg, cfg.mu_nodes, cfg.phi_nodes, cfg.tail_cutoff);
      quad.threads = cfg.threads;

      if (!qpoints.empty()) {
        std::vector<Vec3> pts;
        std::stringstream ss(qpoints);
        std::string item;
        while (std::getline(ss, item, ';')) pts.push_back(parse_vec3(item));
        auto vals = collision::qplus_points(*f, *g, pts, kernel, quad, bc);
        for (std::size_t i = 0; i < pts.size(); ++i)
          std::printf("%.17g,%.17g,%.17g,%.17g\n", pts[i].x, pts[i].y, pts[i].z,
                      vals[i].real());
        return 0;
      }
      if (qcheck == "mass") {
        if (qgamma != 0.0)
          throw std::runtime_error("mass check requires --gamma 0");
        auto out = collision::qplus_eval(*f, *g, vg, kernel, quad, bc);
        std::complex<double> total{};
        for (auto& v : out.values) total += v;
        total *= std::pow(vg.h(), 3);
        std::vector<GaussComponent> cf, cg;
        if (!f->flatten(cf) || !g->flatten(cg))
          throw std::runtime_error("mass check needs gaussian-mixture inputs");
        auto l1 = [](const std::vector<GaussComponent>& cs) {
          double acc = 0.0;
          for (const auto& c : cs)
            acc += c.amp.real() * std::pow(2.0 * M_PI, 1.5) * std::pow(c.width, 3);
          return acc;
        };
        double want = M_PI * l1(cf) * l1(cg);
        double rel = std::abs(total.real() - want) / want;
        std::printf("mass %.12g expected %.12g relative_error %.3e\n",
                    total.real(), want, rel);
        return rel < cfg.tol_mass ? 0 : 1;
      }
      if (!qout.empty()) {
        auto out = collision::qplus_eval(*f, *g, vg, kernel, quad, bc);
        grid::write_gridfunction_file(qout, out);
        std::printf("wrote %s\n", qout.c_str());
        return 0;
      }
      throw CLI::ValidationError("qplus: need one of --check/--out/--points");
    }

    if (*rd) {
      auto h = parse_analytic(rh);
      auto variant = rvariant == "T_small" ? collision::RadonVariant::TSmall
                                           : collision::RadonVariant::T;
      auto sph = quadrature::SphereQuadrature::make(cfg.mu_nodes, cfg.phi_nodes);
      auto val = collision::radon_eval(*h, parse_vec3(rxs), rgamma, variant, sph, bc);
      std::printf("%.17g %.17g\n", val.real(), val.imag());
      return 0;
    }

    if (*nm) {
      auto f = parse_analytic(nf);
      grid::VelocityGrid vg = grid::VelocityGrid::make(cfg.grid_n, cfg.grid_L);
      auto gf = grid::sample_on_grid(*f, vg, 1e-10, grid::GuardPolicy::Warn).gf;
      using grid::NormSpec;
      std::printf("L1        %.12g\n", grid::norm(gf, NormSpec::lebesgue(1)));
      std::printf("L2        %.12g\n", grid::norm(gf, NormSpec::lebesgue(2)));
      std::printf("L2_w1     %.12g\n", grid::norm(gf, NormSpec::lebesgue(2, 1)));
      std::printf("Hdot_half %.12g\n", grid::norm(gf, NormSpec::sobolev_hom(0.5)));
      std::printf("Hdot_1    %.12g\n", grid::norm(gf, NormSpec::sobolev_hom(1)));
      std::printf("H_1       %.12g\n", grid::norm(gf, NormSpec::sobolev_inhom(1)));
      return 0;
    }

    if (*vf) {
      std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;
      std::vector<report::EstimateReport> reps;
      auto pqs = std::vector<std::pair<double, double>>{
          {1.0, 2.0}, {2.0, 1.0}, {4.0 / 3.0, 4.0 / 3.0}};
      if (suite == "partition") reps.push_back(verify::partition_suite(cfg));
      else if (suite == "geometry")
        reps.push_back(verify::geometry_suite(cfg, cfg.seed, 1000));
      else if (suite == "stationary")
        reps.push_back(verify::stationary_decay_suite(
            cfg, {0.0, 1.0}, {M_PI / 3.0, M_PI / 2.0}, {1e2, 1e3, 1e4}));
      else if (suite == "identity")
        reps.push_back(verify::identity_suite(cfg, cfg.seed, 10));
      else if (suite == "estimate")
        reps.push_back(verify::estimate_suite(cfg, cfg.seed, cfg.trials, pqs,
                                              {0.0, 0.5, 1.0}));
      else if (suite == "schur") reps.push_back(verify::schur_suite(cfg));
      else if (suite == "region3")
        reps.push_back(verify::region3_suite(cfg, cfg.seed, 500));
      else if (suite == "all") reps = verify::run_all(cfg);
      else throw CLI::ValidationError("unknown suite '" + suite + "'");
      return emit_and_status(reps, dir, formats);
    }

    if (*rp) {
      std::ifstream is(rin);
      if (!is) throw std::runtime_error("cannot open " + rin);
      auto r = report::read_json(is);
      auto written = report::emit_report(r, rdir, parse_formats(rformats), false);
      for (const auto& w : written) std::printf("wrote %s\n", w.c_str());
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
