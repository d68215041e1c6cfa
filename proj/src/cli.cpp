#include "stochlp/cli.hpp"

#include "stochlp/exact_exponential.hpp"
#include "stochlp/fptas.hpp"
#include "stochlp/generators.hpp"
#include "stochlp/numeric.hpp"
#include "stochlp/oracles.hpp"
#include "stochlp/taylor.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace stochlp {

using nlohmann::json;

namespace {

void dump(const json& j, std::string& s) {
  switch (j.type()) {
    case json::value_t::object: {
      s += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) s += ',';
        first = false;
        s += json(it.key()).dump();
        s += ':';
        dump(it.value(), s);
      }
      s += '}';
      break;
    }
    case json::value_t::array: {
      s += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ',';
        dump(j[i], s);
      }
      s += ']';
      break;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        s += "null";
        break;
      }
      std::string t = format_double(v);
      // Keep a float marker so the value re-parses as a float.
      if (t.find_first_of(".eE") == std::string::npos) t += ".0";
      s += t;
      break;
    }
    default: s += j.dump(); break;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

struct Inputs {
  std::string graph_path, td_path, x_text;
  Dag graph;
  std::optional<TreeDecomposition> td;
  mpq_class x;

  void load(bool want_td) {
    graph = parse_graph(read_file(graph_path));
    if (want_td && !td_path.empty()) td = to_internal(parse_td(read_file(td_path)), graph);
    if (!x_text.empty()) x = parse_rational(x_text);
  }

  json echo() const {
    json j{{"graph", graph_path}, {"n", graph.n()}, {"m", graph.m()}};
    if (!td_path.empty()) j["td"] = td_path;
    if (!x_text.empty()) {
      j["x"] = x.get_d();
      std::string q = format_rational(x);
      if (!q.empty()) j["x_rational"] = q;
    }
    return j;
  }
};

json widths(int original, int separated, int separated_n) {
  return {{"original_width", original}, {"separated_width", separated}, {"separated_n", separated_n}};
}

}  // namespace

std::string format_report(const json& j) {
  std::string s;
  dump(j, s);
  return s;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Longest-path distribution in DAGs with random edge lengths", "stochlp"};
  app.require_subcommand(1);
  int threads = 0;
  bool timing = false;
  app.add_option("--threads", threads, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
  app.add_flag("--timing", timing, "Include elapsed_ms in reports");
  app.set_version_flag("--version", kVersion);

  Inputs in;
  std::string out_format = "json";
  auto add_graph = [&](CLI::App* c, bool with_td, bool with_x) {
    c->add_option("--graph", in.graph_path, "Graph file")->required();
    if (with_td) c->add_option("--td", in.td_path, "Tree decomposition (.td); heuristic if omitted");
    if (with_x) c->add_option("--x", in.x_text, "Horizon x (decimal or p/q)")->required();
    c->add_option("--out", out_format, "Output format")->check(CLI::IsMember({"json"}));
  };

  // approx
  auto* approx = app.add_subcommand("approx", "Grid FPTAS for uniform edge lengths");
  add_graph(approx, true, true);
  std::optional<double> epsilon;
  std::optional<std::int64_t> grid_m;
  std::optional<std::uint64_t> max_cells;
  approx->add_option("--epsilon", epsilon, "Relative accuracy; picks M");
  approx->add_option("--grid-m", grid_m, "Explicit grid resolution M")->check(CLI::PositiveNumber);
  approx->add_option("--max-cells", max_cells, "Cell budget per bag");

  // exact-exp
  auto* exact = app.add_subcommand("exact-exp", "Exact value for standard exponential edge lengths");
  add_graph(exact, true, true);
  bool emit_symbolic = false;
  exact->add_flag("--emit-symbolic", emit_symbolic, "Include the symbolic root expression");

  // taylor
  auto* taylor = app.add_subcommand("taylor", "Taylor-truncation scheme for oracle distributions");
  add_graph(taylor, true, true);
  std::optional<double> eps_add;
  std::optional<int> tau;
  std::string oracle_name;
  taylor->add_option("--epsilon-additive", eps_add, "Additive accuracy; picks tau by formula");
  taylor->add_option("--tau", tau, "Explicit Taylor order")->check(CLI::NonNegativeNumber);
  taylor->add_option("--oracle", oracle_name, "expcdf or unitslab")->required();

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate");
  add_graph(mc, false, true);
  std::uint64_t samples = 1000000, seed = 1;
  mc->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "Seed");

  // bracket
  auto* bracket = app.add_subcommand("bracket", "Riemann volume bracket for uniform edge lengths");
  add_graph(bracket, false, true);
  int resolution = 10;
  bracket->add_option("--resolution", resolution, "Cells per axis")->check(CLI::PositiveNumber);

  // sp-exact
  auto* sp = app.add_subcommand("sp-exact", "Exact value on series-parallel graphs");
  add_graph(sp, false, true);

  // validate-td
  auto* vtd = app.add_subcommand("validate-td", "Check a tree decomposition");
  vtd->add_option("--graph", in.graph_path, "Graph file")->required();
  vtd->add_option("--td", in.td_path, "Tree decomposition")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph and a matching decomposition");
  std::string shape, dist_text = "uniform", out_graph, out_td;
  int gen_n = 0, gen_k = 2;
  std::uint64_t gen_seed = 1;
  gen->add_option("--shape", shape, "chain, diamond-ladder or random-tw")->required();
  gen->add_option("--n", gen_n, "Vertices (diamonds for diamond-ladder)")->required();
  gen->add_option("--k", gen_k, "Width for random-tw");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--dist", dist_text, "uniform, uniform:A, exp or oracle:NAME");
  gen->add_option("--out-graph", out_graph, "Write the graph here");
  gen->add_option("--out-td", out_td, "Write the decomposition here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  if (threads > 0) omp_set_num_threads(threads);

  json report;
  int status = 0;
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (approx->parsed()) {
      if (!epsilon && !grid_m) {
        err << "approx: either --epsilon or --grid-m is required\n" << approx->help();
        return 1;
      }
      in.load(true);
      ApproxOptions opt;
      if (epsilon) opt.epsilon = *epsilon;
      opt.grid_m = grid_m;
      if (max_cells) opt.budgets.max_cells = *max_cells;
      ApproxResult r = approx_dag(in.graph, in.td, in.x.get_d(), opt);
      json guarantee{{"kind", "multiplicative"},
                     {"horizontal_shift", (r.separated_width + 1.0) * r.separated_n * in.x.get_d() /
                                              static_cast<double>(r.M)}};
      if (epsilon && !grid_m) guarantee["epsilon"] = *epsilon;
      json bags = json::array();
      for (const BagReport& b : r.per_bag)
        bags.push_back({{"bag", b.bag},
                        {"edges", b.edges},
                        {"uniform_edges", b.uniform_edges},
                        {"cells", b.cells},
                        {"patterns", b.patterns},
                        {"entries", b.entries}});
      report = {{"value", r.value}, {"guarantee", guarantee}, {"M", r.M}, {"cells_used", r.cells_used},
                {"per_bag", bags}};
      report.update(widths(r.original_width, r.separated_width, r.separated_n));
    } else if (exact->parsed()) {
      in.load(true);
      ExactResult r = exact_exp(in.graph, in.td, in.x);
      report = {{"value", r.value},
                {"digits", r.digits},
                {"guarantee", {{"kind", "exact"}, {"radius", r.radius}}},
                {"peak_regions", r.stats.peak_regions},
                {"peak_terms", r.stats.peak_terms}};
      report.update(widths(r.original_width, r.separated_width, r.separated_n));
      if (emit_symbolic) report["expression"] = r.expression.str();
    } else if (taylor->parsed()) {
      if (!eps_add && !tau) {
        err << "taylor: either --epsilon-additive or --tau is required\n" << taylor->help();
        return 1;
      }
      in.load(true);
      TaylorOptions opt;
      opt.tau = tau;
      opt.epsilon = eps_add;
      TaylorResult r = approx_taylor(in.graph, in.td, in.x, find_oracle(oracle_name), opt);
      json guarantee{{"kind", "additive"}, {"theoretical_bound", r.theoretical_bound}};
      if (eps_add && !tau) guarantee["epsilon"] = *eps_add;
      report = {{"value", r.value},
                {"oracle", oracle_name},
                {"tau", r.tau},
                {"theoretical_bound", r.theoretical_bound},
                {"guarantee", guarantee},
                {"monomials_peak", r.monomials_peak},
                {"regions_peak", r.regions_peak},
                {"bags", r.bags}};
      report.update(widths(r.original_width, r.separated_width, r.separated_n));
    } else if (mc->parsed()) {
      in.load(false);
      McResult r = monte_carlo(in.graph, in.x.get_d(), samples, seed);
      report = {{"value", r.estimate},
                {"guarantee", {{"kind", "statistical"}, {"stderr", r.stderr_}}},
                {"hits", r.hits},
                {"samples", r.samples},
                {"seed", seed}};
    } else if (bracket->parsed()) {
      in.load(false);
      VolumeBracket b = riemann_bracket(in.graph, in.x, resolution);
      json lower{{"value", b.lower.get_d()}}, upper{{"value", b.upper.get_d()}};
      if (auto q = format_rational(b.lower); !q.empty()) lower["rational"] = q;
      if (auto q = format_rational(b.upper); !q.empty()) upper["rational"] = q;
      report = {{"guarantee", {{"kind", "bracket"}}},
                {"lower", lower},
                {"upper", upper},
                {"resolution", resolution},
                {"cells", b.cells}};
    } else if (sp->parsed()) {
      in.load(false);
      SpResult r = series_parallel_exact(in.graph, in.x);
      report = {{"value", r.value}, {"digits", r.digits}, {"guarantee", {{"kind", "exact"}}}};
      if (r.is_rational)
        if (auto q = format_rational(r.rational); !q.empty()) report["rational"] = q;
    } else if (vtd->parsed()) {
      in.load(true);
      TdCheck c = validate_td(in.graph, *in.td);
      report = {{"valid", c.ok}};
      if (!c.ok) {
        json witness = json::array();
        for (int v : c.witness) witness.push_back(v);
        report["condition"] = c.condition;
        report["message"] = c.message;
        report["witness"] = witness;
        status = 1;
      } else {
        report["width"] = in.td->width();
        report["bags"] = in.td->size();
      }
    } else if (gen->parsed()) {
      Instance inst = generate(shape, gen_n, gen_k, gen_seed, parse_dist_option(dist_text));
      TdCheck c = validate_td(inst.graph, inst.td);
      if (!c.ok) throw InvariantError("generated decomposition is invalid: " + c.message);
      std::string gtext = write_graph(inst.graph);
      std::string ttext = write_td(inst.td, inst.graph.n(), &inst.graph);
      report = {{"shape", shape},
                {"seed", gen_seed},
                {"dist", to_string(inst.graph.edge(0).dist)},
                {"vertices", inst.graph.n()},
                {"edges", inst.graph.m()},
                {"width", inst.td.width()},
                {"bags", inst.td.size()}};
      if (shape == "random-tw") report["k"] = gen_k;
      if (!out_graph.empty()) {
        write_file(out_graph, gtext);
        report["graph_file"] = out_graph;
      } else {
        report["graph"] = gtext;
      }
      if (!out_td.empty()) {
        write_file(out_td, ttext);
        report["td_file"] = out_td;
      } else {
        report["td"] = ttext;
      }
    }
  } catch (const InputError& e) {
    err << "stochlp: " << e.what() << '\n';
    return 1;
  } catch (const BudgetError& e) {
    err << "stochlp: budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const InvariantError& e) {
    err << "stochlp: internal error: " << e.what() << '\n';
    return 3;
  }

  json full{{"command", app.get_subcommands().front()->get_name()}, {"version", kVersion}};
  if (!gen->parsed()) full["inputs"] = in.echo();
  full.update(report);
  if (timing)
    full["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out << format_report(full) << '\n';
  return status;
}

}  // namespace stochlp
