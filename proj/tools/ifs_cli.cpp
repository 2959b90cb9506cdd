// Command-line driver: attractors, chain graphs, Hutchinson diagnostics,
// bifurcation sweeps, and chaos-game rasters over the builtin IFS catalog.
//
// Exit codes: 0 success, 1 I/O failure, 2 config or precondition failure,
// 3 non-convergence within budget.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ifs/attractor.hpp"
#include "ifs/chaingraph.hpp"
#include "ifs/chaosgame.hpp"
#include "ifs/config.hpp"
#include "ifs/io.hpp"
#include "ifs/jacobian.hpp"
#include "ifs/parallel.hpp"
#include "ifs/system.hpp"

namespace fs = std::filesystem;
using namespace ifs;

namespace {

struct CliError {
  int code;
  std::string message;
};

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw CliError{1, "cannot open " + p.string()};
  os << content;
  if (!os) throw CliError{1, "write failed: " + p.string()};
}

fs::path ensure_outdir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{1, "cannot create output directory " + dir.string()};
  return dir;
}

std::string trap_report_text(const TrapReport& rep, const GridSpec& g) {
  std::ostringstream os;
  os << "forward_invariant " << (rep.forward_invariant ? "yes" : "no") << "\n";
  os << "escape_cells " << rep.escape_cells.size() << "\n";
  for (std::size_t i = 0; i < rep.escape_cells.size() && i < 32; ++i) {
    const Point p = g.cell_center(rep.escape_cells[i]);
    os << "escape " << rep.escape_cells[i] << " " << format_double(p.x) << " "
       << format_double(p.y) << "\n";
  }
  for (const auto& a : rep.absorption)
    os << "absorption cell " << a.start << " "
       << (a.absorbed ? "entered" : "timeout") << " steps " << a.steps << "\n";
  return os.str();
}

std::string trap_report_csv(const TrapReport& rep) {
  std::ostringstream os;
  os << "start_cell,absorbed,steps\n";
  for (const auto& a : rep.absorption)
    os << a.start << "," << (a.absorbed ? 1 : 0) << "," << a.steps << "\n";
  return os.str();
}

GridSet trap_support(const RunConfig& cfg, const IfsSystem& sys,
                     const GridSpec& g) {
  RunConfig c = cfg;
  if (c.support == "domain") {
    // natural defaults per catalog system
    if (sys.name == "sierpinski") c.support = "trapping:disc";
    else if (sys.name == "logistic_triangle") c.support = "trapping:qeps:0.1";
  }
  return support_from_config(c, sys, g);
}

int cmd_attractor(const RunConfig& cfg) {
  const IfsSystem sys = system_from_config(cfg);
  const GridSpec g = grid_from_config(cfg, sys);
  const fs::path dir = ensure_outdir(cfg);
  const GridSet q = trap_support(cfg, sys, g);
  if (q.empty()) throw CliError{2, "empty support"};

  const auto rep = verify_trapping(sys, q, default_sample_compacts(sys, g), 200);
  if (!rep.forward_invariant)
    throw CliError{2, "support is not forward-invariant; " +
                          std::to_string(rep.escape_cells.size()) +
                          " escape cells"};
  const double tol = cfg.tol < 0 ? g.cell_diameter() : cfg.tol;
  const auto res = global_attractor(sys, q, tol, cfg.max_iters);

  std::ostringstream pgm, rle, report;
  write_pgm(pgm, res.set);
  write_rle(rle, res.set);
  report << "system " << sys.name << "\n";
  report << "cells " << res.set.count() << "\n";
  report << "iterations " << res.iterations << "\n";
  report << "converged " << (res.converged ? "yes" : "no") << "\n";
  report << "defect " << format_double(h_invariance_defect(sys, res.set))
         << "\n";
  report << "dh_trace";
  for (double d : res.dh_trace) report << " " << format_double(d);
  report << "\n";
  write_text(dir / "attractor.pgm", pgm.str());
  write_text(dir / "attractor.rle", rle.str());
  write_text(dir / "report.txt", report.str());
  if (!res.converged) return 3;
  return 0;
}

int cmd_chaingraph(const RunConfig& cfg) {
  const IfsSystem sys = system_from_config(cfg);
  const GridSpec g = grid_from_config(cfg, sys);
  const fs::path dir = ensure_outdir(cfg);
  const GridSet support = support_from_config(cfg, sys, g);
  if (support.empty()) throw CliError{2, "empty support"};

  const auto graph = build_graph(sys, g, support, cfg.eta);
  auto cg = condense(graph);
  classify(cg, graph);

  std::ostringstream csv, dot, pgm;
  write_nodes_csv(csv, cg);
  write_node_dot(dot, cg, RecurrenceClass::strong, "strong");
  write_node_dot(dot, cg, RecurrenceClass::weak, "weak");
  write_recurrent_pgm(pgm, recurrent_set(cg, RecurrenceClass::strong),
                      recurrent_set(cg, RecurrenceClass::weak));
  write_text(dir / "nodes.csv", csv.str());
  write_text(dir / "graph.dot", dot.str());
  write_text(dir / "recurrent.pgm", pgm.str());
  return 0;
}

int cmd_hutchinson(const RunConfig& cfg) {
  const IfsSystem sys = system_from_config(cfg);
  const GridSpec g = grid_from_config(cfg, sys);
  const fs::path dir = ensure_outdir(cfg);
  if (cfg.panel.empty() && cfg.chain.empty())
    throw CliError{2, "hutchinson needs --panel or --chain"};

  std::ostringstream csv, report;
  if (!cfg.panel.empty()) {
    if (cfg.panel != "tent2")
      throw CliError{2, "unknown panel: " + cfg.panel};
    const double s = cfg.params.count("s") ? cfg.params.at("s") : 1.9;
    const double s2 = cfg.params.count("s2") ? cfg.params.at("s2") : 1.5;
    const IfsSystem t2 = tent2_system(s, s2);
    const double ell = s2 * (1 - s / 2), c1 = s / 2;
    GridSet zero(g);
    zero.set(g.cell_of_point({0, 0}));
    const GridSet a = interval_cells(g, ell, c1);
    csv << "set,cells,defect\n";
    const std::pair<std::string, GridSet> panel[] = {
        {"zero", zero},
        {"A", a},
        {"zero_and_A", zero | a},
        {"interval", interval_cells(g, 0.0, c1)},
    };
    for (const auto& [name, set] : panel)
      csv << name << "," << set.count() << ","
          << format_double(h_invariance_defect(t2, set)) << "\n";
    write_text(dir / "defects.csv", csv.str());
  }
  if (!cfg.chain.empty()) {
    TentChainKind kind;
    if (cfg.chain == "zero_to_zeroA") kind = TentChainKind::zero_to_zeroA;
    else if (cfg.chain == "zeroA_to_A") kind = TentChainKind::zeroA_to_A;
    else if (cfg.chain == "interval_to_zeroA")
      kind = TentChainKind::interval_to_zeroA;
    else
      throw CliError{2, "unknown chain: " + cfg.chain};
    const double s = cfg.params.count("s") ? cfg.params.at("s") : 1.9;
    const double s2 = cfg.params.count("s2") ? cfg.params.at("s2") : 1.5;
    const IfsSystem t2 = tent2_system(s, s2);
    auto chain = tent_hyperchain(s, s2, kind, cfg.epsilon, g);
    chain = verify_hyperchain(t2, chain);
    report << "chain " << cfg.chain << "\n";
    report << "epsilon " << format_double(cfg.epsilon) << "\n";
    report << "sets " << chain.sets.size() << "\n";
    for (std::size_t i = 0; i < chain.gaps.size(); ++i)
      report << "gap " << i << " " << format_double(chain.gaps[i]) << "\n";
    report << "verified " << (chain.verified ? "yes" : "no") << "\n";
    write_text(dir / "chains_report.txt", report.str());
    std::ostringstream ccsv;
    ccsv << "chain,link,gap,below_epsilon\n";
    for (std::size_t i = 0; i < chain.gaps.size(); ++i)
      ccsv << cfg.chain << "," << i << "," << format_double(chain.gaps[i])
           << "," << (chain.gaps[i] < chain.epsilon ? 1 : 0) << "\n";
    write_text(dir / "chains.csv", ccsv.str());
  }
  return 0;
}

int cmd_bifurcation(const RunConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg);
  SweepFamily family;
  if (cfg.family == "tent2_fixed_second")
    family = SweepFamily::tent2_fixed_second;
  else if (cfg.family == "logistic2_fixed_second")
    family = SweepFamily::logistic2_fixed_second;
  else if (cfg.family == "tent1") family = SweepFamily::tent1;
  else if (cfg.family == "logistic1") family = SweepFamily::logistic1;
  else
    throw CliError{2, "unknown family: " + cfg.family};

  GridSpec bins(box1d(0, 1), static_cast<std::uint32_t>(cfg.res));
  OrbitConfig per;
  per.start = {cfg.start_x, 0};
  per.total = cfg.orbit_total;
  per.burn_in = cfg.orbit_burn;
  per.seed = cfg.seed;
  const auto sweep =
      bifurcation_sweep(family, cfg.second_param, cfg.param_lo, cfg.param_hi,
                        static_cast<int>(cfg.sweep_steps), per, bins);

  std::ostringstream csv;
  csv << "param,bin_lo,bin_hi,count\n";
  for (const auto& r : sweep.rows)
    csv << format_double(r.param) << "," << r.bin_lo << "," << r.bin_hi << ","
        << r.count << "\n";
  write_text(dir / "sweep.csv", csv.str());

  // raster: param on x, bins on y (top row = highest bin)
  std::ostringstream pgm;
  const std::uint32_t W = static_cast<std::uint32_t>(sweep.params.size());
  const std::uint32_t H = bins.size();
  pgm << "P5\n" << W << " " << H << "\n255\n";
  std::string row(W, '\0');
  for (std::uint32_t y = 0; y < H; ++y) {
    const std::uint32_t bin = H - 1 - y;
    for (std::uint32_t x = 0; x < W; ++x)
      row[x] = sweep.hits[x][bin] >= 2 ? char(255) : char(0);
    pgm.write(row.data(), row.size());
  }
  write_text(dir / "sweep.pgm", pgm.str());
  return 0;
}

int cmd_chaosgame(const RunConfig& cfg) {
  const IfsSystem sys = system_from_config(cfg);
  const GridSpec g = grid_from_config(cfg, sys);
  const fs::path dir = ensure_outdir(cfg);
  OrbitConfig orbit;
  orbit.start = {cfg.start_x, sys.domain.dim == 2 ? cfg.start_y : 0.0};
  orbit.total = cfg.orbit_total;
  orbit.burn_in = cfg.orbit_burn;
  orbit.seed = cfg.seed;
  const auto res = random_orbit(sys, orbit, g);

  std::ostringstream pgm, rle, report;
  write_pgm(pgm, res.cells);
  write_rle(rle, res.cells);
  report << "system " << sys.name << "\n";
  report << "steps " << res.steps_done << "\n";
  report << "exited " << (res.exited ? "yes" : "no") << "\n";
  report << "cells " << res.cells.count() << "\n";
  write_text(dir / "orbit.pgm", pgm.str());
  write_text(dir / "orbit.rle", rle.str());
  write_text(dir / "report.txt", report.str());
  return 0;
}

int cmd_verify_trap(const RunConfig& cfg) {
  const IfsSystem sys = system_from_config(cfg);
  const GridSpec g = grid_from_config(cfg, sys);
  const fs::path dir = ensure_outdir(cfg);
  const GridSet q = trap_support(cfg, sys, g);
  if (q.empty()) throw CliError{2, "empty support"};
  const auto rep =
      verify_trapping(sys, q, default_sample_compacts(sys, g),
                      cfg.max_iters > 0 ? cfg.max_iters : 200);
  write_text(dir / "report.txt", trap_report_text(rep, g));
  write_text(dir / "trap.csv", trap_report_csv(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qualitative dynamics of iterated function systems"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  bool dump = false;

  app.add_option("--config", config_path, "INI config file ([run] section)");
  app.add_flag("--dump-config", dump, "print the effective config and exit");

  // shared options, attached to every subcommand
  std::vector<CLI::App*> subs;
  for (const char* name :
       {"attractor", "chaingraph", "hutchinson", "bifurcation", "chaosgame",
        "verify-trap"})
    subs.push_back(app.add_subcommand(name));

  double opt_s = -1, opt_s2 = -1, opt_mu = -1, opt_mu2 = -1;
  for (CLI::App* sub : subs) {
    sub->add_option("--system", cfg.system);
    sub->add_option("--res", cfg.res);
    sub->add_option("--eta", cfg.eta);
    sub->add_option("--seed", cfg.seed);
    sub->add_option("--threads", cfg.threads);
    sub->add_option("--out", cfg.out);
    sub->add_option("--support", cfg.support);
    sub->add_option("--tol", cfg.tol);
    sub->add_option("--max-iters", cfg.max_iters);
    sub->add_option("--epsilon", cfg.epsilon);
    sub->add_option("--panel", cfg.panel);
    sub->add_option("--chain", cfg.chain);
    sub->add_option("--family", cfg.family);
    sub->add_option("--param-lo", cfg.param_lo);
    sub->add_option("--param-hi", cfg.param_hi);
    sub->add_option("--second-param", cfg.second_param);
    sub->add_option("--sweep-steps", cfg.sweep_steps);
    sub->add_option("--orbit-total", cfg.orbit_total);
    sub->add_option("--orbit-burn", cfg.orbit_burn);
    sub->add_option("--start-x", cfg.start_x);
    sub->add_option("--start-y", cfg.start_y);
    sub->add_option("--s", opt_s);
    sub->add_option("--s2", opt_s2);
    sub->add_option("--mu", opt_mu);
    sub->add_option("--mu2", opt_mu2);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path, std::ios::binary);
      if (!is) {
        std::cerr << "error: cannot open config " << config_path << "\n";
        return 1;
      }
      std::stringstream buf;
      buf << is.rdbuf();
      RunConfig file_cfg = parse_config(buf.str());
      // flags already parsed into cfg override the file values
      RunConfig merged = file_cfg;
      for (CLI::App* sub : subs)
        if (sub->parsed()) merged.command = sub->get_name();
      auto overridden = [&](const char* flag) {
        for (CLI::App* sub : subs)
          if (sub->parsed() && sub->count(flag)) return true;
        return false;
      };
      if (overridden("--system")) merged.system = cfg.system;
      if (overridden("--res")) merged.res = cfg.res;
      if (overridden("--eta")) merged.eta = cfg.eta;
      if (overridden("--seed")) merged.seed = cfg.seed;
      if (overridden("--threads")) merged.threads = cfg.threads;
      if (overridden("--out")) merged.out = cfg.out;
      if (overridden("--support")) merged.support = cfg.support;
      if (overridden("--tol")) merged.tol = cfg.tol;
      if (overridden("--max-iters")) merged.max_iters = cfg.max_iters;
      if (overridden("--epsilon")) merged.epsilon = cfg.epsilon;
      if (overridden("--panel")) merged.panel = cfg.panel;
      if (overridden("--chain")) merged.chain = cfg.chain;
      if (overridden("--family")) merged.family = cfg.family;
      if (overridden("--param-lo")) merged.param_lo = cfg.param_lo;
      if (overridden("--param-hi")) merged.param_hi = cfg.param_hi;
      if (overridden("--second-param")) merged.second_param = cfg.second_param;
      if (overridden("--sweep-steps")) merged.sweep_steps = cfg.sweep_steps;
      if (overridden("--orbit-total")) merged.orbit_total = cfg.orbit_total;
      if (overridden("--orbit-burn")) merged.orbit_burn = cfg.orbit_burn;
      if (overridden("--start-x")) merged.start_x = cfg.start_x;
      if (overridden("--start-y")) merged.start_y = cfg.start_y;
      cfg = merged;
    } else {
      for (CLI::App* sub : subs)
        if (sub->parsed()) cfg.command = sub->get_name();
    }
    if (opt_s >= 0) cfg.params["s"] = opt_s;
    if (opt_s2 >= 0) cfg.params["s2"] = opt_s2;
    if (opt_mu >= 0) cfg.params["mu"] = opt_mu;
    if (opt_mu2 >= 0) cfg.params["mu2"] = opt_mu2;

    set_worker_count(cfg.threads);

    if (dump) {
      std::cout << dump_config(cfg);
      return 0;
    }

    if (cfg.command == "attractor") return cmd_attractor(cfg);
    if (cfg.command == "chaingraph") return cmd_chaingraph(cfg);
    if (cfg.command == "hutchinson") return cmd_hutchinson(cfg);
    if (cfg.command == "bifurcation") return cmd_bifurcation(cfg);
    if (cfg.command == "chaosgame") return cmd_chaosgame(cfg);
    if (cfg.command == "verify-trap") return cmd_verify_trap(cfg);
    std::cerr << "error: unknown command " << cfg.command << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
