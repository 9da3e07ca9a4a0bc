#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "entest/entest.hpp"

namespace entest::cli {

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (!v.is_string()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

Json big_or_number(const BigInt& v) {
  if (v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return Json(v.convert_to<std::uint64_t>());
  return Json(v.str());
}

PriorDensity parse_prior(const std::string& spec) {
  if (spec == "quadratic") return PriorDensity::quadratic();
  if (spec == "uniform") return PriorDensity::uniform();
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<Rational> coeffs;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(parse_rational(item));
    if (coeffs.empty()) throw ValidationError("polynomial prior needs coefficients");
    return PriorDensity::polynomial(RationalPolynomial(std::move(coeffs)), spec);
  }
  throw ValidationError("unknown prior '" + spec + "' (quadratic, uniform, poly:c0,c1,...)");
}

oracle::AverageMethod parse_method(const std::string& s) {
  if (s == "quadrature" || s == "euler-quadrature") return oracle::AverageMethod::euler_quadrature;
  if (s == "mc" || s == "monte-carlo") return oracle::AverageMethod::monte_carlo;
  throw ValidationError("unknown method '" + s + "' (quadrature, mc)");
}

struct Output {
  std::string format = "csv";
  std::string path;
};

void add_output_options(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", o.path, "Output file (default: stdout)");
}

void emit(const Table& table, const Output& o, std::ostream& out) {
  const std::string text = o.format == "json" ? to_json(table) : to_csv(table);
  if (o.path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path = resolve_output_path(o.path);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path.string());
  file << text;
}

QuadratureOptions quadrature_options(int nodes) {
  if (nodes < 2) throw ValidationError("quadrature nodes must be at least 2");
  QuadratureOptions q;
  q.initial_nodes = nodes;
  q.max_nodes = std::max(q.max_nodes, nodes);
  return q;
}

// spectrum ------------------------------------------------------------------

struct SpectrumArgs {
  int n = 0;
  std::string b = "0.5";
  Output out;
};

Table cmd_spectrum(const SpectrumArgs& a) {
  const Spectrum spec(a.n);
  const auto bs = parse_double_list(a.b);
  Table t;
  t.command = "spectrum";
  t.metadata["N"] = a.n;
  t.metadata["blocks"] = spec.outcome_count();
  t.columns = {"k", "j", "d_j", "n_j", "b", "weight", "eigenvalue"};
  for (double b : bs) {
    const auto w = spec.weights(b);
    for (std::size_t k = 0; k < spec.outcome_count(); ++k) {
      const auto& blk = spec.block(k);
      t.rows.push_back({k + 1, blk.spin.to_string(), big_or_number(blk.copies), blk.block_dim, b, w[k],
                        w[k] / static_cast<double>(blk.block_dim)});
    }
  }
  return t;
}

// table / local -------------------------------------------------------------

struct TableArgs {
  std::string n;
  std::string prior = "quadratic";
  bool nats = false;
  int nodes = QuadratureOptions{}.initial_nodes;
  Output out;
};

template <class MakeModel>
Table gain_table(const std::string& command, const TableArgs& a, MakeModel make_model) {
  const auto ns = parse_int_list(a.n);
  const PriorDensity prior = parse_prior(a.prior);
  const QuadratureOptions q = quadrature_options(a.nodes);
  const double scale = a.nats ? nats_per_bit : 1.0;
  Table t;
  t.command = command;
  t.metadata["prior"] = prior.name();
  t.metadata["unit"] = a.nats ? "nats" : "bits";
  t.metadata["initial_nodes"] = q.initial_nodes;
  t.metadata["tolerance"] = q.tolerance;
  t.columns = {"N", "gain", "quad_error", "nodes"};
  for (int n : ns) {
    const GainReport r = average_gain(make_model(n), prior, q);
    t.rows.push_back({n, round6(r.average_gain * scale), r.quad_error * scale, r.nodes});
  }
  return t;
}

// fit -----------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string n;
  std::string prior = "quadratic";
  int min_n = 40;
  Output out;
};

Table cmd_fit(const FitArgs& a) {
  std::vector<GainPoint> points;
  std::string source;
  if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw ValidationError("cannot read " + a.input);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(a.input + " is empty");
    const auto header = split_csv_line(line);
    auto column = [&](const std::string& name) {
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
      throw ValidationError(a.input + " has no '" + name + "' column");
    };
    const std::size_t cn = column("N"), cg = column("gain");
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      const auto cells = split_csv_line(line);
      if (cells.size() <= std::max(cn, cg)) throw ValidationError("short row in " + a.input);
      try {
        points.push_back({std::stoi(cells[cn]), std::stod(cells[cg])});
      } catch (const std::logic_error&) {
        throw ValidationError("bad number in " + a.input + ": " + line);
      }
    }
    source = "input";
  } else if (!a.n.empty()) {
    const PriorDensity prior = parse_prior(a.prior);
    for (int n : parse_int_list(a.n)) points.push_back({n, average_gain(Spectrum(n), prior).average_gain});
    source = "computed";
  } else {
    throw ValidationError("fit needs --input or --n");
  }
  std::vector<GainPoint> used;
  for (const auto& p : points)
    if (p.copies >= a.min_n) used.push_back(p);
  const AsymptoteFit fit = fit_asymptote(used);
  Table t;
  t.command = "fit";
  t.metadata["source"] = source;
  t.metadata["min_n"] = a.min_n;
  t.columns = {"slope", "intercept", "points"};
  t.rows.push_back({round6(fit.slope), round6(fit.intercept), fit.points});
  return t;
}

// oracle --------------------------------------------------------------------

struct OracleArgs {
  int n = 0;
  std::string b = "0,0.3,0.7,1";
  std::string method = "quadrature";
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  Output out;
};

Table cmd_oracle(const OracleArgs& a, bool& passed) {
  const auto method = parse_method(a.method);
  std::uint64_t budget = a.budget;
  if (method == oracle::AverageMethod::monte_carlo && budget == 0) budget = 100000;
  const auto report = oracle::verify_spectrum(a.n, parse_double_list(a.b), method, budget, a.seed);
  passed = report.passed;
  Table t;
  t.command = "oracle";
  t.metadata["N"] = a.n;
  t.metadata["method"] = oracle::to_string(method);
  t.metadata["budget"] = budget;
  t.metadata["seed"] = a.seed;
  t.metadata["structure_matches"] = report.structure_matches;
  t.metadata["max_deviation"] = report.max_deviation;
  t.metadata["max_eigen_deviation"] = report.max_eigen_deviation;
  t.metadata["passed"] = report.passed;
  t.columns = {"b",         "j",         "block_dim",       "closed_form",     "trace", "deviation",
               "tolerance", "eigen_deviation", "eigen_tolerance", "leakage", "passed"};
  for (const auto& p : report.points)
    for (const auto& c : p.blocks)
      t.rows.push_back({p.b, c.spin.to_string(), c.block_dim, c.closed_form, c.trace, c.deviation, c.tolerance,
                        c.eigen_deviation, c.eigen_tolerance, p.leakage, c.passed});
  return t;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  int n = 0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> fixed_b;
  std::string prior = "quadratic";
  bool trace = false;
  Output out;
};

Table cmd_simulate(const SimulateArgs& a) {
  const Spectrum spec(a.n);
  const PriorDensity prior = parse_prior(a.prior);
  SimulationOptions o;
  o.trials = a.trials;
  o.seed = a.seed;
  o.fixed_parameter = a.fixed_b;
  o.keep_trace = a.trace;
  const SimulationResult r = simulate_experiment(spec, prior, o);
  Table t;
  t.command = "simulate";
  t.metadata["N"] = a.n;
  t.metadata["prior"] = prior.name();
  t.metadata["trials"] = a.trials;
  t.metadata["seed"] = a.seed;
  t.metadata["fixed_b"] = a.fixed_b ? Json(*a.fixed_b) : Json(nullptr);
  t.metadata["mean_gain"] = round6(r.mean_gain);
  t.metadata["expected_gain"] = round6(r.expected_gain);
  if (a.trace) {
    t.columns = {"trial", "b", "k", "j", "gain"};
    for (const auto& rec : r.trace)
      t.rows.push_back({rec.trial + 1, rec.b_true, rec.outcome + 1, spec.block(rec.outcome).spin.to_string(),
                        round6(rec.gain)});
  } else {
    t.columns = {"k", "j", "count", "frequency", "marginal", "posterior_mean", "posterior_sd", "gain"};
    for (std::size_t k = 0; k < spec.outcome_count(); ++k) {
      const auto& s = r.outcomes[k];
      t.rows.push_back({k + 1, spec.block(k).spin.to_string(), r.counts[k], r.frequency(k), s.marginal,
                        s.posterior_mean, s.posterior_sd, round6(s.gain)});
    }
  }
  return t;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string s;
  for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? "," : "") + csv_cell(Json(table.columns[i]));
  s += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
    s += "\r\n";
  }
  return s;
}

std::string to_json(const Table& table) {
  Json doc;
  doc["schema_version"] = schema_version;
  doc["command"] = table.command;
  doc["metadata"] = table.metadata;
  doc["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::logic_error&) {
      throw ValidationError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ValidationError("not an integer: '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(to_int(item));
      continue;
    }
    const auto second = item.find(':', colon + 1);
    const int lo = to_int(item.substr(0, colon));
    const int hi = to_int(item.substr(colon + 1, second == std::string::npos ? std::string::npos : second - colon - 1));
    const int step = second == std::string::npos ? 1 : to_int(item.substr(second + 1));
    if (step < 1 || hi < lo) throw ValidationError("bad range '" + item + "'");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty N list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::logic_error&) {
      throw ValidationError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw ValidationError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

double round6(double value) {
  const double r = std::round(value * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return p.string();
  if (const char* dir = std::getenv("ENTEST_OUTPUT_DIR"); dir && *dir) return (std::filesystem::path(dir) / p).string();
  return p.string();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement estimation: optimal spectra, information gains and checks"};
  app.name(args.empty() ? "entest-cli" : std::filesystem::path(args[0]).filename().string());
  app.require_subcommand(1);

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Spin blocks of the N-copy state: j, d_j, n_j, weights");
  spectrum->add_option("--n", spectrum_args.n, "Number of copies")->required();
  spectrum->add_option("--b", spectrum_args.b, "Comma-separated b values");
  add_output_options(spectrum, spectrum_args.out);

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Optimal average gain for each N");
  TableArgs local_args;
  auto* local = app.add_subcommand("local", "Average gain for the single-qubit mixing problem");
  for (auto [cmd, a] : {std::pair{table, &table_args}, std::pair{local, &local_args}}) {
    cmd->add_option("--n", a->n, "N list, e.g. 1,2,3 or 40:80:10")->required();
    cmd->add_option("--prior", a->prior, "quadratic | uniform | poly:c0,c1,...");
    cmd->add_flag("--nats", a->nats, "Report gains in nats");
    cmd->add_option("--nodes", a->nodes, "Initial Gauss-Legendre nodes");
    add_output_options(cmd, a->out);
  }

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Least-squares fit of gain against log2 N");
  fit->add_option("--input", fit_args.input, "CSV with N and gain columns");
  fit->add_option("--n", fit_args.n, "Compute gains for this N list instead");
  fit->add_option("--prior", fit_args.prior, "Prior when computing");
  fit->add_option("--min-n", fit_args.min_n, "Use only N >= this");
  add_output_options(fit, fit_args.out);

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Check the spectrum against the dense Haar average");
  oracle_cmd->add_option("--n", oracle_args.n, "Number of copies (<= 4)")->required();
  oracle_cmd->add_option("--b", oracle_args.b, "Comma-separated b values");
  oracle_cmd->add_option("--method", oracle_args.method, "quadrature | mc");
  oracle_cmd->add_option("--budget", oracle_args.budget, "Grid points per angle or MC samples");
  oracle_cmd->add_option("--seed", oracle_args.seed, "Random seed");
  add_output_options(oracle_cmd, oracle_args.out);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Simulate the optimal measurement");
  simulate->add_option("--n", sim_args.n, "Number of copies")->required();
  simulate->add_option("--trials", sim_args.trials, "Number of trials");
  simulate->add_option("--seed", sim_args.seed, "Random seed");
  simulate->add_option("--fixed-b", sim_args.fixed_b, "Use this b in every trial");
  simulate->add_option("--prior", sim_args.prior, "quadratic | uniform | poly:c0,c1,...");
  simulate->add_flag("--trace", sim_args.trace, "Emit one row per trial");
  add_output_options(simulate, sim_args.out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("entest-cli");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_validation;
  }

  try {
    if (spectrum->parsed()) {
      emit(cmd_spectrum(spectrum_args), spectrum_args.out, out);
    } else if (table->parsed()) {
      emit(gain_table("table", table_args, [](int n) { return Spectrum(n); }), table_args.out, out);
    } else if (local->parsed()) {
      emit(gain_table("local", local_args, [](int n) { return LocalSpectrum(n); }), local_args.out, out);
    } else if (fit->parsed()) {
      emit(cmd_fit(fit_args), fit_args.out, out);
    } else if (oracle_cmd->parsed()) {
      bool passed = false;
      emit(cmd_oracle(oracle_args, passed), oracle_args.out, out);
      if (!passed) {
        err << "error: oracle check failed\n";
        return exit_check_failed;
      }
    } else if (simulate->parsed()) {
      emit(cmd_simulate(sim_args), sim_args.out, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const DimensionLimitError& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_ok;
}

}  // namespace entest::cli
