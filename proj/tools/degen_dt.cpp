// degen-dt: command-line front end.
//
// Every command writes a JSON document {"manifest": ..., "result": ...} to
// stdout or --out. `gen` writes CSV with the manifest on a leading comment
// line. Exit status: 0 ok, 1 numeric failure (JSON error record), 2 usage.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "report_io.hpp"

using namespace degen_dt;
using degen_dt::cli::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool timing = false;
  std::string out;
};

class Run {
 public:
  Run(const Globals& g, std::string command) : g_(g), start_(std::chrono::steady_clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["parameters"] = ordered_json::object();
  }

  template <class T>
  Run& param(const std::string& key, const T& value) {
    manifest_["parameters"][key] = value;
    return *this;
  }
  Run& seeded() {
    seeded_ = true;
    return *this;
  }
  void discards(std::uint64_t d) { discards_ = d; }

  ordered_json manifest() const {
    ordered_json m = manifest_;
    m["master_seed"] = seeded_ ? ordered_json(g_.seed) : ordered_json(nullptr);
    m["tool_version"] = kVersion;
    m["discards"] = discards_;
    if (g_.timing) {
      m["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    return m;
  }

  void emit(ordered_json result) const {
    ordered_json doc;
    doc["manifest"] = manifest();
    doc["result"] = std::move(result);
    write_text(doc.dump(2) + "\n");
  }

  void write_text(const std::string& text) const {
    if (g_.out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(g_.out, std::ios::binary);
    if (!f) throw InvalidInput("cannot open output file " + g_.out);
    f << text;
  }

 private:
  const Globals& g_;
  std::chrono::steady_clock::time_point start_;
  ordered_json manifest_;
  bool seeded_ = false;
  std::uint64_t discards_ = 0;
};

SimulationOptions sim_options(const Globals& g, double scale, std::size_t top_k) {
  SimulationOptions o;
  o.threads = g.threads;
  o.scale_factor = scale;
  o.top_k = top_k;
  return o;
}

// Groups nearly equal probabilities (sorted descending) into levels.
ordered_json group_levels(std::vector<std::pair<std::string, OrthantResult>> probs, double tol) {
  std::sort(probs.begin(), probs.end(), [](const auto& a, const auto& b) {
    return a.second.probability != b.second.probability ? a.second.probability > b.second.probability : a.first < b.first;
  });
  ordered_json groups = ordered_json::array();
  std::size_t k = 0;
  while (k < probs.size()) {
    std::size_t e = k + 1;
    while (e < probs.size() && probs[e - 1].second.probability - probs[e].second.probability <= tol) ++e;
    double mean = 0.0;
    ordered_json codes = ordered_json::array();
    for (std::size_t t = k; t < e; ++t) {
      mean += probs[t].second.probability;
      codes.push_back(probs[t].first);
    }
    groups.push_back({{"size", e - k}, {"mean_probability", mean / static_cast<double>(e - k)}, {"codes", codes}});
    k = e;
  }
  return groups;
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open input file " + path);
  try {
    return ordered_json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("input is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bias of Delaunay triangulations of perturbed degenerate point sets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->envname("DEGEN_DT_SEED")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker cap; 0 = all cores. Never changes results");
  app.add_flag("--timing", g.timing, "Record wall-clock seconds in the manifest");
  app.add_option("--out", g.out, "Write output here instead of stdout");

  // gen
  auto* gen = app.add_subcommand("gen", "Emit a point set as CSV");
  std::string gen_kind = "grid";
  int gen_size = 2;
  bool gen_perturb = false;
  std::uint64_t gen_index = 0;
  double gen_scale = 0.001;
  gen->add_option("--kind", gen_kind, "grid or polygon")->check(CLI::IsMember({"grid", "polygon"}))->capture_default_str();
  gen->add_option("--size", gen_size, "m for grids, n for polygons")->required();
  gen->add_flag("--perturb", gen_perturb, "Apply the Gaussian perturbation");
  gen->add_option("--index", gen_index, "Iteration index of the perturbation stream")->capture_default_str();
  gen->add_option("--scale", gen_scale, "sigma = scale * d_min")->capture_default_str();

  // sim-grid
  auto* sim_grid = app.add_subcommand("sim-grid", "Empirical DT distribution of a perturbed m x m grid");
  int sg_m = 0;
  std::uint64_t sg_iters = 0;
  std::size_t sg_top = 0;
  double sg_scale = 0.001;
  bool sg_analytic = false;
  sim_grid->add_option("--m", sg_m, "Cells per side")->required();
  sim_grid->add_option("--iters", sg_iters, "Iterations")->required();
  sim_grid->add_option("--top-k", sg_top, "Report only the k most frequent codes");
  sim_grid->add_option("--scale", sg_scale, "sigma = scale * d_min")->capture_default_str();
  sim_grid->add_flag("--analytic", sg_analytic, "Attach first-order probabilities (m = 2 only)");

  // sim-poly
  auto* sim_poly = app.add_subcommand("sim-poly", "Empirical DT distribution of a perturbed regular n-gon");
  int sp_n = 0;
  std::uint64_t sp_iters = 0;
  std::size_t sp_top = 0;
  double sp_scale = 0.001;
  bool sp_analytic = false;
  sim_poly->add_option("--n", sp_n, "Vertices")->required();
  sim_poly->add_option("--iters", sp_iters, "Iterations")->required();
  sim_poly->add_option("--top-k", sp_top, "Report only the k most frequent codes");
  sim_poly->add_option("--scale", sp_scale, "sigma = scale * d_min")->capture_default_str();
  sim_poly->add_flag("--analytic", sp_analytic, "Attach first-order probabilities (n <= 7)");

  // tri-freq
  auto* tri = app.add_subcommand("tri-freq", "Per-triangle frequencies for a perturbed regular n-gon");
  int tf_n = 0;
  std::uint64_t tf_iters = 0;
  double tf_scale = 0.001;
  tri->add_option("--n", tf_n, "Vertices")->required();
  tri->add_option("--iters", tf_iters, "Iterations")->required();
  tri->add_option("--scale", tf_scale, "sigma = scale * d_min")->capture_default_str();

  // analytic-grid2
  auto* an_grid = app.add_subcommand("analytic-grid2", "First-order probabilities of the 16 codes of the 2 x 2 grid");
  double ag_se = 2e-5;
  an_grid->add_option("--se", ag_se, "Target standard error")->capture_default_str();

  // analytic-poly
  auto* an_poly = app.add_subcommand("analytic-poly", "First-order probabilities of every triangulation of an n-gon");
  int ap_n = 0;
  double ap_se = 2e-5;
  an_poly->add_option("--n", ap_n, "Vertices, 3..7")->required();
  an_poly->add_option("--se", ap_se, "Target standard error")->capture_default_str();

  // walk
  auto* walk = app.add_subcommand("walk", "Capped cycle walks from the centre of a large grid");
  std::string w_model;
  std::uint64_t w_walks = 0;
  int w_cap = 40, w_m = 41;
  double w_scale = 0.001;
  walk->add_option("--model", w_model, "dt or uniform")->required();
  walk->add_option("--walks", w_walks, "Number of walks")->required();
  walk->add_option("--cap", w_cap, "Step cap")->capture_default_str();
  walk->add_option("--m", w_m, "Grid size")->capture_default_str();
  walk->add_option("--scale", w_scale, "sigma = scale * d_min (dt model)")->capture_default_str();

  // census
  auto* census = app.add_subcommand("census", "Component counts of the diagonal graph over many instances");
  int c_m = 0;
  std::uint64_t c_iters = 0;
  std::string c_model;
  census->add_option("--m", c_m, "Grid size")->required();
  census->add_option("--iters", c_iters, "Instances")->required();
  census->add_option("--model", c_model, "dt or uniform")->required();

  // corner
  auto* corner = app.add_subcommand("corner", "Probability that the corner triangle 123 is Delaunay");
  std::vector<int> k_n;
  int k_nodes = 8;
  double k_tol = 1e-3;
  std::uint64_t k_mc = 0;
  corner->add_option("--n", k_n, "Vertices; a comma-separated list gives one row each")->required()->delimiter(',');
  corner->add_option("--nodes", k_nodes, "Quadrature nodes per axis and panel")->capture_default_str();
  corner->add_option("--tolerance", k_tol, "Allowed change under node doubling")->capture_default_str();
  corner->add_option("--mc-iters", k_mc, "Also estimate by simulation with this many iterations");

  // report
  auto* report = app.add_subcommand("report", "Re-render a JSON result as JSON, CSV and/or an SVG chart");
  std::string r_format = "json", r_input, r_svg;
  report->add_option("--format", r_format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  report->add_option("--input", r_input, "JSON document written by another command")->required();
  report->add_option("--svg", r_svg, "Also write a bar chart here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto* sub = app.get_subcommands().front();
  Run run(g, sub->get_name());

  auto error_record = [&](const std::string& type, const std::string& message, ordered_json details) {
    ordered_json doc;
    doc["manifest"] = run.manifest();
    doc["error"] = {{"type", type}, {"message", message}, {"details", std::move(details)}};
    std::cerr << "degen-dt: " << message << '\n';
    try {
      run.write_text(doc.dump(2) + "\n");
    } catch (...) {
      std::cout << doc.dump(2) << '\n';
    }
  };

  try {
    if (sub == gen) {
      run.param("kind", gen_kind).param("size", gen_size).param("perturb", gen_perturb);
      PointSet p = gen_kind == "grid" ? make_grid(gen_size) : make_polygon(gen_size);
      if (gen_perturb) {
        run.seeded().param("index", gen_index).param("scale", gen_scale);
        p = perturb(p, default_params(p, gen_scale), SeedSpec{g.seed, gen_index, 0});
      }
      std::ostringstream os;
      os << "# manifest: " << run.manifest().dump() << '\n';
      write_csv(os, p);
      run.write_text(os.str());
    } else if (sub == sim_grid) {
      run.seeded().param("m", sg_m).param("iters", sg_iters).param("top_k", sg_top).param("scale", sg_scale).param(
          "analytic", sg_analytic);
      if (sg_analytic && sg_m != 2) throw InvalidInput("--analytic needs --m 2");
      auto r = estimate_grid_distribution(sg_m, sg_iters, g.seed, sim_options(g, sg_scale, sg_top));
      if (sg_analytic) attach_grid2_analytic(r);
      run.discards(r.discards);
      run.emit(cli::to_json(r));
    } else if (sub == sim_poly) {
      run.seeded().param("n", sp_n).param("iters", sp_iters).param("top_k", sp_top).param("scale", sp_scale).param(
          "analytic", sp_analytic);
      if (sp_analytic && (sp_n < 3 || sp_n > 7)) throw InvalidInput("--analytic needs 3 <= n <= 7");
      auto r = estimate_polygon_distribution(sp_n, sp_iters, g.seed, sim_options(g, sp_scale, sp_top));
      if (sp_analytic) attach_polygon_analytic(r);
      run.discards(r.discards);
      ordered_json j = cli::to_json(r);
      j["uniform_probability"] = 1.0 / static_cast<double>(catalan(sp_n - 2));
      run.emit(std::move(j));
    } else if (sub == tri) {
      run.seeded().param("n", tf_n).param("iters", tf_iters).param("scale", tf_scale);
      const auto r = estimate_triangle_frequencies(tf_n, tf_iters, g.seed, sim_options(g, tf_scale, 0));
      run.discards(r.discards);
      ordered_json j = cli::to_json(r);
      double total = 0.0;
      for (const auto& e : r.entries) total += e.frequency;
      j["frequency_sum"] = total;
      run.emit(std::move(j));
    } else if (sub == an_grid) {
      run.param("se", ag_se);
      const auto probs = grid2_distribution(ag_se);
      ordered_json rows = ordered_json::array();
      std::vector<std::pair<std::string, OrthantResult>> flat;
      double sum = 0.0;
      for (const auto& p : probs) {
        ordered_json x = {{"code", to_key(p.code)}, {"rows", to_rows(p.code)}};
        x.update(cli::to_json(p.result));
        rows.push_back(std::move(x));
        flat.emplace_back(to_key(p.code), p.result);
        sum += p.result.probability;
      }
      run.emit({{"m", 2}, {"sum", sum}, {"probabilities", rows}, {"groups", group_levels(flat, 1e-3)}});
    } else if (sub == an_poly) {
      run.param("n", ap_n).param("se", ap_se);
      const auto probs = polygon_distribution(ap_n, ap_se);
      ordered_json rows = ordered_json::array();
      std::vector<std::pair<std::string, OrthantResult>> flat;
      double sum = 0.0;
      for (const auto& p : probs) {
        ordered_json x = {{"code", to_key(p.code)},
                          {"diagonals", cli::diagonals_json(p.code)},
                          {"class", to_key(canonical_class(p.code))}};
        x.update(cli::to_json(p.result));
        rows.push_back(std::move(x));
        flat.emplace_back(to_key(p.code), p.result);
        sum += p.result.probability;
      }
      run.emit({{"n", ap_n},
                {"sum", sum},
                {"uniform_probability", 1.0 / static_cast<double>(catalan(ap_n - 2))},
                {"probabilities", rows},
                {"groups", group_levels(flat, 1e-3)}});
    } else if (sub == walk) {
      const DiagonalModel model = parse_model(w_model);
      run.seeded().param("model", to_string(model)).param("walks", w_walks).param("cap", w_cap).param("m", w_m).param(
          "scale", w_scale);
      const auto s = walk_statistics(model, w_walks, w_cap, g.seed, w_m, g.threads, w_scale);
      run.discards(s.discards);
      run.emit(cli::to_json(s, model));
    } else if (sub == census) {
      const DiagonalModel model = parse_model(c_model);
      run.seeded().param("m", c_m).param("iters", c_iters).param("model", to_string(model));
      const auto r = component_census(c_m, c_iters, model, g.seed, g.threads);
      run.discards(r.discards);
      run.emit(cli::to_json(r));
    } else if (sub == corner) {
      run.param("n", k_n).param("nodes", k_nodes).param("tolerance", k_tol).param("mc_iters", k_mc);
      if (k_mc > 0) run.seeded();
      ordered_json rows = ordered_json::array();
      std::uint64_t discards = 0;
      for (int n : k_n) {
        if (n < 4) throw InvalidInput("corner: n must be at least 4");
        ordered_json row;
        row["n"] = n;
        if (n <= kCornerMaxN) {
          CornerIntegralSpec spec;
          spec.n = n;
          spec.nodes = k_nodes;
          spec.tolerance = k_tol;
          const auto p = corner_probability(spec);
          row["p_n"] = p.probability;
          row["truncation_error"] = p.truncation_error;
        } else {
          // Beyond the quadrature's range only the simulation estimate is reported.
          row["p_n"] = nullptr;
          row["truncation_error"] = nullptr;
        }
        if (k_mc > 0) {
          const auto r = estimate_triangle_frequencies(n, k_mc, g.seed, sim_options(g, 0.001, 0));
          const auto* e = r.find(1, 2, 3);
          const double q = e ? e->frequency : 0.0;
          row["q_n"] = q;
          row["q_n_standard_error"] = std::sqrt(q * (1 - q) / static_cast<double>(k_mc));
          discards += r.discards;
        } else {
          row["q_n"] = nullptr;
          row["q_n_standard_error"] = nullptr;
        }
        const Rational r = uniform_corner_prob(n);
        row["r_n"] = cli::rational_string(r);
        row["r_n_value"] = static_cast<double>(r);
        rows.push_back(std::move(row));
      }
      run.discards(discards);
      run.emit({{"triangle", {1, 2, 3}}, {"rows", rows}});
    } else if (sub == report) {
      run.param("input", r_input).param("format", r_format).param("svg", r_svg);
      const ordered_json doc = read_json_file(r_input);
      if (!doc.contains("manifest") || !doc.contains("result"))
        throw InvalidInput("input lacks a manifest/result pair");
      if (!r_svg.empty()) {
        std::ofstream f(r_svg, std::ios::binary);
        if (!f) throw InvalidInput("cannot open " + r_svg);
        cli::write_svg(f, doc["manifest"].value("command", std::string("result")), cli::bars_of(doc["result"]));
      }
      // The original manifest travels with the converted report.
      if (r_format == "json") {
        run.write_text(doc.dump(2) + "\n");
      } else {
        std::ostringstream os;
        cli::write_csv(os, doc);
        run.write_text(os.str());
      }
    }
  } catch (const InvalidInput& e) {
    error_record("invalid_input", e.what(), ordered_json::object());
    return 2;
  } catch (const AccuracyFailure& e) {
    error_record("accuracy_failure", e.what(), {{"coarse", e.coarse()}, {"fine", e.fine()}});
    return 1;
  } catch (const BudgetExceeded& e) {
    error_record("budget_exceeded", e.what(), {{"best_estimate", cli::to_json(e.best_estimate())}});
    return 1;
  } catch (const DegenerateSystem& e) {
    error_record("degenerate_system", e.what(), ordered_json::object());
    return 1;
  } catch (const std::exception& e) {
    error_record("numeric_failure", e.what(), ordered_json::object());
    return 1;
  }
  return 0;
}
