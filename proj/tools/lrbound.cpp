// lrbound: Lieb-Robinson speeds, bound envelopes, and verification tools
// for local quantum Hamiltonians described by interaction-type models.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrbound/cycles.hpp"
#include "lrbound/dynamics.hpp"
#include "lrbound/errors.hpp"
#include "lrbound/format.hpp"
#include "lrbound/model_io.hpp"
#include "lrbound/oracle.hpp"
#include "lrbound/regions.hpp"
#include "lrbound/speed.hpp"

namespace {

using namespace lrbound;

// data goes to --output or stdout; diagnostics and the resolved-config
// header stay on stderr so piped output is clean
void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
  out << data;
}

void echo_config(const std::string& line) { std::cerr << "# " << line << "\n"; }

std::string json_string_array(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += "\"" + items[i] + "\"";
  }
  return out + "]";
}

std::string cycle_labels_json(const ModelSpec& spec, const Cycle& c) {
  std::vector<std::string> labels;
  for (int t : c.type_sequence) labels.push_back(spec.interactions[t].label);
  return json_string_array(labels);
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

struct Range {
  double lo = 0.0, hi = 0.0;
  int steps = 0;
};

Range parse_range(const std::string& text, const std::string& flag) {
  Range r;
  char c1 = 0, c2 = 0;
  std::stringstream ss(text);
  if (!(ss >> r.lo >> c1 >> r.hi >> c2 >> r.steps) || c1 != ',' || c2 != ',')
    fail(Errc::invalid_field, flag + ": expected MIN,MAX,STEPS");
  return r;
}

int run_cycles(const std::string& model_path, const std::string& format,
               const std::string& output) {
  echo_config("lrbound cycles model=" + model_path + " format=" + format +
              " output=" + (output.empty() ? "-" : output));
  ModelSpec spec = load_model_file(model_path);
  std::vector<Cycle> census = enumerate_cycles(spec);
  std::string data;
  if (format == "csv") {
    data = "sequence,k,xi\n";
    for (const auto& c : census)
      data += sequence_string(spec, c.type_sequence) + "," + fmt_g12(c.k) +
              "," + fmt_g12(c.xi) + "\n";
  } else {
    data = "[\n";
    for (std::size_t i = 0; i < census.size(); ++i) {
      data += "  {\"sequence\":" + cycle_labels_json(spec, census[i]) +
              ",\"k\":" + fmt_g12(census[i].k) +
              ",\"xi\":" + fmt_g12(census[i].xi) + "}";
      data += i + 1 < census.size() ? ",\n" : "\n";
    }
    data += "]\n";
  }
  write_output(output, data);
  return 0;
}

int run_speed(const std::string& model_path, const std::string& lambda_grid,
              const std::string& grid_output, const std::string& output) {
  echo_config("lrbound speed model=" + model_path +
              (lambda_grid.empty() ? "" : " lambda-grid=" + lambda_grid) +
              " output=" + (output.empty() ? "-" : output));
  ModelSpec spec = load_model_file(model_path);
  std::vector<Cycle> census = enumerate_cycles(spec);
  SpeedResult res = solve_speed(spec, census);

  std::string data = "{\n";
  data += "  \"v_lr\": " + fmt_g12(res.v_lr) + ",\n";
  data += "  \"lambda_star\": " + fmt_g12(res.lambda_star) + ",\n";
  data += "  \"form\": \"" + std::string(to_string(res.form)) + "\",\n";
  data += "  \"active_cycles\": [";
  for (std::size_t i = 0; i < res.active_cycles.size(); ++i) {
    if (i) data += ",";
    data += cycle_labels_json(spec, res.active_cycles[i]);
  }
  data += "],\n";
  data += "  \"C\": " + fmt_g12(res.C) + "\n";
  data += "}\n";
  write_output(output, data);

  if (!lambda_grid.empty()) {
    Range r = parse_range(lambda_grid, "--lambda-grid");
    if (!(r.lo > 0.0) || r.hi <= r.lo || r.steps < 2)
      fail(Errc::invalid_field, "--lambda-grid: need 0 < MIN < MAX, STEPS >= 2");
    std::vector<EnvelopeTerm> terms = envelope_terms(census);
    std::string csv = "lambda,a_max\n";
    for (int i = 0; i < r.steps; ++i) {
      double lambda = r.lo + (r.hi - r.lo) * i / (r.steps - 1);
      csv += fmt_g12(lambda) + "," +
             fmt_g12(big_L(terms, lambda) / lambda) + "\n";
    }
    if (grid_output.empty())
      fail(Errc::invalid_field, "--lambda-grid requires --grid-output");
    write_output(grid_output, csv);
  }
  return 0;
}

int run_regions(const std::string& model_path, const std::string& x_labels,
                const std::string& y_labels, const std::string& x_range,
                const std::string& y_range, bool log_spaced,
                const std::string& output, const std::string& boundaries_path) {
  echo_config("lrbound regions model=" + model_path + " x=" + x_labels +
              " y=" + y_labels + " x-range=" + x_range + " y-range=" + y_range +
              (log_spaced ? " log" : "") +
              " output=" + (output.empty() ? "-" : output));
  SweepSpec sw;
  sw.base = load_model_file(model_path);
  sw.x_labels = split_labels(x_labels);
  sw.y_labels = split_labels(y_labels);
  Range xr = parse_range(x_range, "--x-range");
  Range yr = parse_range(y_range, "--y-range");
  sw.x_min = xr.lo;
  sw.x_max = xr.hi;
  sw.x_steps = xr.steps;
  sw.y_min = yr.lo;
  sw.y_max = yr.hi;
  sw.y_steps = yr.steps;
  sw.log_spaced = log_spaced;

  RegionGrid grid = sweep(sw);
  std::string csv = "x,y,v_lr,region_id\n";
  for (const auto& p : grid.points)
    csv += fmt_g12(p.x) + "," + fmt_g12(p.y) + "," + fmt_g12(p.v_lr) + "," +
           p.region_id + "\n";
  write_output(output, csv);

  if (!boundaries_path.empty()) {
    std::string bcsv = "x1,y1,x2,y2,region_a,region_b\n";
    for (const auto& s : find_boundaries(grid))
      bcsv += fmt_g12(s.x1) + "," + fmt_g12(s.y1) + "," + fmt_g12(s.x2) + "," +
              fmt_g12(s.y2) + "," + s.region_a + "," + s.region_b + "\n";
    write_output(boundaries_path, bcsv);
  }
  return 0;
}

ExplicitGraphModel build_named_model(const std::string& name,
                                     const std::string& size) {
  int a = 0, b = 0;
  char sep = 0;
  std::stringstream ss(size);
  if (name == "ising") {
    if (!(ss >> a)) fail(Errc::invalid_field, "--size: expected N for ising");
    return build_ising_chain(a);
  }
  if (name == "xy") {
    if (!(ss >> a >> sep >> b) || sep != ',')
      fail(Errc::invalid_field, "--size: expected ROWS,COLS for xy");
    return build_xy_lattice(a, b);
  }
  fail(Errc::invalid_field, "--model must be ising or xy");
}

std::vector<int> parse_cellspec(const ExplicitGraphModel& g,
                                const std::string& text,
                                const std::string& flag) {
  std::stringstream ss(text);
  if (g.name == "ising") {
    int site = -1;
    if (!(ss >> site) || site < 0 || site >= g.cells())
      fail(Errc::invalid_field, flag + ": expected a site index 0.." +
                                    std::to_string(g.cells() - 1));
    return {site};
  }
  int r = -1, c = -1;
  char sep = 0;
  if (!(ss >> r >> sep >> c) || sep != ',')
    fail(Errc::invalid_field, flag + ": expected ROW,COL");
  for (int cell = 0; cell < g.cells(); ++cell)
    if (g.cell_pos[cell][0] == r && g.cell_pos[cell][1] == c) return {cell};
  fail(Errc::invalid_field, flag + ": site off the lattice");
}

int run_chains(const std::string& model, const std::string& size,
               const std::string& from, const std::string& to, int nmax,
               double lambda, const std::string& output) {
  echo_config("lrbound chains model=" + model + " size=" + size + " from=" +
              from + " to=" + to + " nmax=" + std::to_string(nmax) +
              " lambda=" + fmt_g12(lambda) +
              " output=" + (output.empty() ? "-" : output));
  ExplicitGraphModel g = build_named_model(model, size);
  std::vector<int> p = parse_cellspec(g, from, "--from");
  std::vector<int> q = parse_cellspec(g, to, "--to");
  BoundReport report = check_count_bounds(g, p, q, nmax, lambda);

  std::string csv = "n,count,bound_generic,bound_lattice,slack\n";
  for (const auto& row : report.rows) {
    csv += std::to_string(row.n) + "," + row.count.str() + "," +
           fmt_g12(std::exp(row.log_generic)) + ",";
    if (row.log_lattice) csv += fmt_g12(std::exp(*row.log_lattice));
    csv += "," + fmt_g12(row.min_slack) + "\n";
  }
  write_output(output, csv);
  return 0;
}

int run_verify(const std::string& model, int sites, double g_field, double j,
               double epsilon, double t_max, int steps,
               const std::string& observable, const std::string& trace_output,
               const std::string& output) {
  echo_config("lrbound verify model=" + model + " sites=" +
              std::to_string(sites) + " g=" + fmt_g12(g_field) + " j=" +
              fmt_g12(j) + " epsilon=" + fmt_g12(epsilon) + " tmax=" +
              fmt_g12(t_max) + " steps=" + std::to_string(steps) +
              " observable=" + observable +
              " output=" + (output.empty() ? "-" : output));
  if (model != "ising") fail(Errc::invalid_field, "--model must be ising");
  if (!(j > 0.0)) fail(Errc::invalid_field, "--j must be positive");
  PauliAxis axis;
  if (observable == "z")
    axis = PauliAxis::z;
  else if (observable == "x")
    axis = PauliAxis::x;
  else
    fail(Errc::invalid_field, "--observable must be z or x");

  ExplicitGraphModel chain = build_ising_chain(sites);
  std::vector<double> couplings = {g_field * j, j};
  LightConeScan scan =
      light_cone_scan(chain, couplings, axis, epsilon, t_max, steps);

  std::string data = "{\n";
  data += "  \"empirical_velocity\": ";
  data += scan.empirical_velocity ? fmt_g12(*scan.empirical_velocity) : "null";
  data += ",\n  \"v_lr\": " + fmt_g12(scan.v_lr);
  data += ",\n  \"ratio\": ";
  data += scan.ratio ? fmt_g12(*scan.ratio) : "null";
  data += "\n}\n";
  write_output(output, data);

  if (!trace_output.empty()) {
    std::string csv = "d,t,norm\n";
    for (const auto& tr : scan.traces)
      for (std::size_t i = 0; i < tr.times.size(); ++i)
        csv += fmt_g12(tr.distance) + "," + fmt_g12(tr.times[i]) + "," +
               fmt_g12(tr.norms[i]) + "\n";
    write_output(trace_output, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lieb-Robinson speeds and bounds for interaction-type models"};
  app.require_subcommand(1);

  std::string model_path, format = "json", output, lambda_grid, grid_output;
  std::string x_labels, y_labels, x_range, y_range, boundaries_path;
  bool log_spaced = false;
  std::string chain_model = "ising", chain_size, from_spec, to_spec;
  int nmax = 10;
  double lambda = 1.0;
  int sites = 10, steps = 60;
  double g_field = 1.0, j_coupling = 1.0, epsilon = 0.01, t_max = 6.0;
  std::string observable = "z", trace_output;

  auto* cycles = app.add_subcommand("cycles", "enumerate elementary cycles");
  cycles->add_option("model", model_path, "model JSON file")->required();
  cycles->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  cycles->add_option("--output", output);

  auto* speed = app.add_subcommand("speed", "solve for the Lieb-Robinson speed");
  speed->add_option("model", model_path, "model JSON file")->required();
  speed->add_option("--lambda-grid", lambda_grid, "MIN,MAX,STEPS envelope samples");
  speed->add_option("--grid-output", grid_output, "CSV path for envelope samples");
  speed->add_option("--output", output);

  auto* regions = app.add_subcommand("regions", "map functional-form regions");
  regions->add_option("model", model_path, "model JSON file")->required();
  regions->add_option("--x", x_labels, "labels driven by the x axis")->required();
  regions->add_option("--y", y_labels, "labels driven by the y axis")->required();
  regions->add_option("--x-range", x_range, "MIN,MAX,STEPS")->required();
  regions->add_option("--y-range", y_range, "MIN,MAX,STEPS")->required();
  regions->add_flag("--log", log_spaced, "log-spaced grid");
  regions->add_option("--output", output);
  regions->add_option("--boundaries", boundaries_path, "boundary segments CSV");

  auto* chains = app.add_subcommand("chains", "count operator chains and check bounds");
  chains->add_option("--model", chain_model)->check(CLI::IsMember({"ising", "xy"}));
  chains->add_option("--size", chain_size, "N or ROWS,COLS")->required();
  chains->add_option("--from", from_spec, "source cell")->required();
  chains->add_option("--to", to_spec, "target cell")->required();
  chains->add_option("--nmax", nmax, "largest chain length");
  chains->add_option("--lambda", lambda, "bound decay rate");
  chains->add_option("--output", output);

  auto* verify = app.add_subcommand("verify", "exact dynamics light-cone scan");
  verify->add_option("--model", chain_model)->check(CLI::IsMember({"ising"}));
  verify->add_option("--sites", sites, "chain length (<= 12)");
  verify->add_option("--g", g_field, "transverse field ratio");
  verify->add_option("--j", j_coupling, "overall coupling");
  verify->add_option("--epsilon", epsilon, "arrival threshold");
  verify->add_option("--tmax", t_max, "scan horizon");
  verify->add_option("--steps", steps, "time grid steps");
  verify->add_option("--observable", observable, "z or x");
  verify->add_option("--trace-output", trace_output, "CSV path for (d,t,norm)");
  verify->add_option("--output", output);

  try {
    app.parse(argc, argv);
    if (cycles->parsed()) return run_cycles(model_path, format, output);
    if (speed->parsed())
      return run_speed(model_path, lambda_grid, grid_output, output);
    if (regions->parsed())
      return run_regions(model_path, x_labels, y_labels, x_range, y_range,
                         log_spaced, output, boundaries_path);
    if (chains->parsed())
      return run_chains(chain_model, chain_size, from_spec, to_spec, nmax,
                        lambda, output);
    if (verify->parsed())
      return run_verify(chain_model, sites, g_field, j_coupling, epsilon,
                        t_max, steps, observable, trace_output, output);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const lrbound::LrError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const lrbound::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
