#include "sumlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "parse_util.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/serialize.hpp"

namespace sumlab {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class T>
T parse_number(std::string_view text, std::string_view key) {
  T value{};
  std::istringstream in{std::string(detail::trim(text))};
  in >> value;
  if (in.fail() || !in.eof()) throw ParseError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  return value;
}

}  // namespace

void RunConfig::apply_file_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto body = detail::trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = std::string(detail::trim(body.substr(0, eq)));
    auto value = detail::trim(body.substr(eq + 1));
    if (key == "eps") eps = parse_number<double>(value, key);
    else if (key == "horizon") horizon = parse_number<std::int64_t>(value, key);
    else if (key == "min_hits") min_hits = parse_number<std::int64_t>(value, key);
    else if (key == "tol") tol = parse_number<double>(value, key);
    else if (key == "candidate_bound") candidate_bound = parse_number<std::int64_t>(value, key);
    else if (key == "max_candidates") max_candidates = parse_number<std::int64_t>(value, key);
    else if (key == "anchor_bound") anchor_bound = parse_number<std::int64_t>(value, key);
    else if (key == "bound") bound = parse_number<std::int64_t>(value, key);
    else if (key == "max_search_space") max_search_space = parse_number<double>(value, key);
    else if (key == "max_atoms") max_atoms = parse_number<std::int64_t>(value, key);
    else if (key == "time_limit_ms") time_limit_ms = parse_number<std::int64_t>(value, key);
    else if (key == "format") format = std::string(value);
    else if (key == "plot_path") plot_path = std::string(value);
    else throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

void RunConfig::validate() const {
  if (eps && !(*eps > 0)) throw ValidationError("eps must be positive");
  if (horizon && *horizon < 1) throw ValidationError("horizon must be positive");
  if (min_hits < 1) throw ValidationError("min_hits must be positive");
  if (!(tol >= 0)) throw ValidationError("tol must be non-negative");
  if (candidate_bound < 1) throw ValidationError("candidate_bound must be positive");
  if (max_candidates < 1) throw ValidationError("max_candidates must be positive");
  if (anchor_bound < 1) throw ValidationError("anchor_bound must be positive");
  if (bound < 1) throw ValidationError("bound must be positive");
  if (!(max_search_space > 0)) throw ValidationError("max_search_space must be positive");
  if (max_atoms < 1) throw ValidationError("max_atoms must be positive");
  if (time_limit_ms < 0) throw ValidationError("time_limit_ms must be non-negative");
  if (format != "auto" && format != "json" && format != "plain" && format != "csv") {
    throw ValidationError("format must be json, plain or csv");
  }
}

namespace {

enum class Format { kJson, kPlain, kCsv };

/// Everything a subcommand needs once flags are parsed.
struct Context {
  RunConfig cfg;
  std::ostream& out;

  Format format(Format fallback) const {
    if (cfg.format == "json") return Format::kJson;
    if (cfg.format == "plain") return Format::kPlain;
    if (cfg.format == "csv") return Format::kCsv;
    return fallback;
  }

  std::pair<double, std::int64_t> recurrence() const {
    if (!cfg.eps || !cfg.horizon) throw ValidationError("recurrence scans need --eps and --horizon (or config values)");
    return {*cfg.eps, *cfg.horizon};
  }

  SearchBudget budget() const {
    SearchBudget b{cfg.candidate_bound, cfg.max_candidates, std::nullopt};
    if (cfg.time_limit_ms > 0) b.time_limit = std::chrono::milliseconds(cfg.time_limit_ms);
    return b;
  }
};

void print_plain(std::ostream& out, const Json& doc) {
  for (const auto& [key, value] : doc.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

/// Writes a document in json or plain form; csv goes through `csv` when the
/// command has a tabular form.
void emit(const Context& ctx, const Json& doc, const std::string& command,
          const std::function<void(std::ostream&)>& csv = {}) {
  switch (ctx.format(Format::kJson)) {
    case Format::kJson:
      ctx.out << doc.dump(2) << '\n';
      break;
    case Format::kPlain:
      print_plain(ctx.out, doc);
      break;
    case Format::kCsv:
      if (!csv) throw ValidationError("csv output is not available for " + command);
      csv(ctx.out);
      break;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

/// A cube argument is either inline JSON or a path to a JSON file.
Json load_json_arg(const std::string& arg) {
  auto body = detail::trim(arg);
  if (!body.empty() && (body.front() == '{' || body.front() == '[')) return parse_json(arg);
  return parse_json(read_file(arg));
}

Interval parse_interval(std::string_view text) {
  auto parts = detail::split(text, '-');
  if (parts.size() != 2) throw ParseError("window must look like L-M, got '" + std::string(text) + "'");
  Interval w{detail::parse_int(parts[0], "window bound"), detail::parse_int(parts[1], "window bound")};
  if (w.lo < 0 || w.hi <= w.lo) throw ParseError("window must satisfy 0 <= L < M");
  return w;
}

SetTuple parse_sets(std::string_view text) {
  SetTuple sets;
  for (auto piece : detail::split(text, ';')) sets.push_back(detail::parse_int_list(piece, "set element"));
  return sets;
}

void measure_csv(std::ostream& out, const SystemSpec& system, const DiscreteMeasure& m) {
  out << "point,weight\n";
  for (const auto& [p, w] : m.atoms()) out << csv_field(format_point(system, p)) << ',' << to_string(w) << '\n';
}

/// Size of the base finite rotation under any number of powers, or 0 for
/// circle systems.
std::int64_t finite_base_size(const SystemSpec& system) {
  const SystemSpec* base = &system;
  while (const auto* pw = base->as<ProductPower>()) base = pw->base.get();
  const auto* f = base->as<FiniteRotation>();
  return f ? f->size : 0;
}

/// `lo,hi[,lo,hi…]`: ranges for the leading coordinates; the rest are full.
BoxObservable parse_box(const SystemSpec& system, std::string_view text) {
  auto pieces = detail::split(text, ',');
  if (pieces.size() % 2 != 0) throw ParseError("--box needs pairs lo,hi");
  if (pieces.size() / 2 > system.point_width()) throw ParseError("--box has more ranges than coordinates");
  const auto n = finite_base_size(system);
  std::vector<CoordRange> ranges(system.point_width(), CoordRange{0, n > 0 ? static_cast<double>(n) : 1.0});
  for (std::size_t i = 0; i + 1 < pieces.size(); i += 2) {
    ranges[i / 2] = {parse_number<double>(pieces[i], "--box"), parse_number<double>(pieces[i + 1], "--box")};
  }
  return BoxObservable::box(std::move(ranges));
}

struct MeasureArgs {
  std::string system;
  std::string subop;
  std::optional<int> k;
  std::string t;
  std::string x;
  std::string x0;
  std::string x1;
  std::string box;
  std::int64_t n = 100'000;
  std::int64_t stride = 0;
  std::string start;
};

int cmd_measure(const Context& ctx, const MeasureArgs& a) {
  auto system = parse_system_spec(a.system);
  const auto max_atoms = static_cast<std::size_t>(ctx.cfg.max_atoms);
  auto need_k = [&] {
    if (!a.k) throw ValidationError("measure " + a.subop + " needs --k");
    return *a.k;
  };
  auto need_point = [&](const std::string& text, const char* flag) {
    if (text.empty()) throw ValidationError("measure " + a.subop + " needs " + flag);
    return parse_point(system, text);
  };
  auto emit_measure = [&](const SystemSpec& space, const DiscreteMeasure& m) {
    emit(ctx, measure_to_json(space, m), "measure", [&](std::ostream& o) { measure_csv(o, space, m); });
    return kExitOk;
  };

  if (a.subop == "cubic" || a.subop == "cubic-alt") {
    int k = need_k();
    auto m = a.subop == "cubic" ? cubic_measure(system, k, max_atoms) : cubic_measure_alt(system, k, max_atoms);
    return emit_measure(cube_system(system, k), m);
  }
  if (a.subop == "sigma") {
    int k = need_k();
    return emit_measure(cube_system(system, k), sigma_k(system, need_point(a.t, "--t"), k, max_atoms));
  }
  if (a.subop == "decompose") {
    auto kernel = ergodic_decomposition_finite(system, max_atoms);
    return emit_measure(system, kernel(need_point(a.x, "--x")));
  }
  if (a.subop == "lambda") {
    auto m = lambda1(system, need_point(a.x0, "--x0"), need_point(a.x1, "--x1"));
    return emit_measure(SystemSpec::power(system, 2), m);
  }
  if (a.subop == "birkhoff") {
    if (a.box.empty()) throw ValidationError("measure birkhoff needs --box");
    if (a.n < 1) throw ValidationError("--n must be positive");
    auto f = parse_box(system, a.box);
    auto start = a.start.empty() ? SystemPoint{std::vector<std::uint64_t>(system.point_width(), 0)}
                                 : parse_point(system, a.start);
    auto stride = a.stride > 0 ? a.stride : std::max<std::int64_t>(1, a.n / 1000);
    auto trace = birkhoff_trace(system, start, f, a.n, stride);
    auto csv = birkhoff_csv(trace);
    if (!ctx.cfg.plot_path.empty()) {
      std::ofstream plot(ctx.cfg.plot_path);
      if (!plot) throw ValidationError("cannot write " + ctx.cfg.plot_path);
      plot << csv;
    }
    Json samples = Json::array();
    for (const auto& s : trace) samples.push_back({{"n", s.n}, {"average", s.average}});
    Json doc{{"schema_version", kSchemaVersion},
             {"system", system.describe()},
             {"start", format_point(system, start)},
             {"iterations", a.n},
             {"average", trace.back().average},
             {"trace", std::move(samples)}};
    switch (ctx.format(Format::kCsv)) {
      case Format::kCsv:
        ctx.out << csv;
        break;
      case Format::kJson:
        ctx.out << doc.dump(2) << '\n';
        break;
      case Format::kPlain:
        print_plain(ctx.out, doc);
        break;
    }
    return kExitOk;
  }
  throw ValidationError("unknown measure operation '" + a.subop +
                        "' (expected cubic, cubic-alt, sigma, decompose, lambda, birkhoff)");
}

struct SumsetArgs {
  std::string set;
  int k = 0;
  std::string sizes;
  bool oracle = false;
  std::string variant = "plain";
  std::optional<std::int64_t> window;
};

int cmd_find_sumset(const Context& ctx, const SumsetArgs& a) {
  if (a.k < 1) throw ValidationError("--k must be >= 1");
  auto set = parse_set_spec(a.set);
  auto sizes = detail::parse_int_list(a.sizes, "size");
  if (static_cast<int>(sizes.size()) != a.k) throw ValidationError("--sizes needs exactly k entries");
  if (a.variant != "plain" && a.variant != "union") throw ValidationError("--variant must be plain or union");

  if (a.oracle) {
    OracleOptions options{ctx.cfg.bound, ctx.cfg.max_search_space, a.window};
    auto witness = a.variant == "union" ? union_sumset_oracle(set, sizes, options)
                                        : find_sumset_oracle(set, sizes, options);
    Json doc{{"schema_version", kSchemaVersion}, {"mode", "oracle"}, {"variant", a.variant},
             {"sizes", sizes},                   {"bound", ctx.cfg.bound}};
    doc["witness"] = witness ? Json(*witness) : Json(nullptr);
    if (witness) doc["checks"] = {{"all_sums_verified", verify_sumset(set, *witness).ok}};
    emit(ctx, doc, "find-sumset");
    return kExitOk;
  }

  if (a.variant == "union") throw ValidationError("the union variant is only available with --oracle");
  auto result = find_sumset_greedy(set, a.k, sizes, ctx.budget(), ctx.cfg.anchor_bound, a.window);
  SumsetChecks checks{check_acceptable(result.tuple).acceptable, verify_sumset(set, result.tuple.sets).ok};
  emit(ctx, greedy_to_json(result, checks), "find-sumset");
  return !result.target_met && result.budget_exhausted ? kExitBoundExceeded : kExitOk;
}

int dispatch(CLI::App& app, Context& ctx, const std::vector<std::string>& args) {
  std::string config_path, set_spec, window_spec, system_spec, start, target, cube_arg, sets_arg, window_arg;
  std::int64_t radius = 0, shift_t = 1;
  MeasureArgs margs;
  SumsetArgs sargs;
  auto& cfg = ctx.cfg;

  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", config_path, "Config file (flat key = value); defaults to $" + std::string(kConfigEnvVar));
  app.add_option("--format", cfg.format, "Output format: json, plain or csv");

  auto* density = app.add_subcommand("density", "Densities of a set along a window family");
  density->add_option("set", set_spec)->required();
  density->add_option("windows", window_spec)->required();

  auto* defect = app.add_subcommand("folner-defect", "Translate overlap defect of a window family");
  defect->add_option("windows", window_spec)->required();
  defect->add_option("--t", shift_t, "Translation");

  auto* correspond = app.add_subcommand("correspond", "Symbolic point and cylinder for a set");
  correspond->add_option("set", set_spec)->required();
  correspond->add_option("--radius", radius, "Coordinates -W..W are recorded")->required();
  correspond->add_option("--window", window_arg, "Frequency window L-M");

  auto add_recurrence = [&](CLI::App* sub) {
    sub->add_option("--eps", cfg.eps);
    sub->add_option("--horizon", cfg.horizon);
    sub->add_option("--min-hits", cfg.min_hits);
  };
  auto* orbit = app.add_subcommand("orbit", "Approximate omega-limit membership");
  orbit->add_option("system", system_spec)->required();
  orbit->add_option("start", start)->required();
  orbit->add_option("target", target)->required();
  add_recurrence(orbit);

  auto* cube_verify = app.add_subcommand("cube-verify", "Erdős-cube verification of a cube configuration");
  cube_verify->add_option("system", system_spec)->required();
  cube_verify->add_option("cube", cube_arg, "Cube JSON, inline or a file path")->required();
  add_recurrence(cube_verify);

  auto* qk = app.add_subcommand("qk-test", "Dynamical-cube membership test");
  qk->add_option("system", system_spec)->required();
  qk->add_option("cube", cube_arg, "Cube JSON, inline or a file path")->required();
  qk->add_option("--tol", cfg.tol);

  auto* measure = app.add_subcommand("measure", "Cubic measures, kernels and Birkhoff traces");
  measure->add_option("system", margs.system)->required();
  measure->add_option("op", margs.subop, "cubic, cubic-alt, sigma, decompose, lambda or birkhoff")->required();
  measure->add_option("--k", margs.k);
  measure->add_option("--t", margs.t, "Base point of sigma");
  measure->add_option("--x", margs.x, "Point for decompose");
  measure->add_option("--x0", margs.x0);
  measure->add_option("--x1", margs.x1);
  measure->add_option("--box", margs.box, "lo,hi pairs for the leading coordinates");
  measure->add_option("--n", margs.n, "Birkhoff iterations");
  measure->add_option("--stride", margs.stride, "Trace stride");
  measure->add_option("--start", margs.start, "Birkhoff start point");
  measure->add_option("--max-atoms", cfg.max_atoms);
  measure->add_option("--plot", cfg.plot_path, "Also write the CSV trace to this path");

  auto* find = app.add_subcommand("find-sumset", "Search for B_1 + ... + B_k inside a set");
  find->add_option("set", sargs.set)->required();
  find->add_option("--k", sargs.k)->required();
  find->add_option("--sizes", sargs.sizes)->required();
  find->add_flag("--oracle", sargs.oracle, "Exhaustive search");
  find->add_option("--variant", sargs.variant, "plain or union");
  find->add_option("--bound", cfg.bound, "Oracle element bound");
  find->add_option("--window", sargs.window);
  find->add_option("--anchor-bound", cfg.anchor_bound);
  find->add_option("--candidate-bound", cfg.candidate_bound);
  find->add_option("--max-candidates", cfg.max_candidates);
  find->add_option("--time-limit-ms", cfg.time_limit_ms);
  find->add_option("--max-search-space", cfg.max_search_space);

  auto* verify = app.add_subcommand("verify-sumset", "Check that every b_1 + ... + b_k lies in the set");
  verify->add_option("set", set_spec)->required();
  verify->add_option("--sets", sets_arg, "Sets separated by ';', elements by ','")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
  cfg.validate();

  if (density->parsed()) {
    auto set = parse_set_spec(set_spec);
    auto windows = parse_window_spec(window_spec);
    auto report = density_along(set, windows);
    emit(ctx, density_to_json(report, windows), "density", [&](std::ostream& o) {
      o << "lo,hi,density\n";
      for (std::size_t i = 0; i < windows.size(); ++i) {
        o << windows.windows()[i].lo << ',' << windows.windows()[i].hi << ',' << to_string(report.values[i]) << '\n';
      }
    });
    return kExitOk;
  }
  if (defect->parsed()) {
    auto windows = parse_window_spec(window_spec);
    auto values = folner_defect(windows, shift_t);
    Json rows = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      rows.push_back({{"lo", windows.windows()[i].lo}, {"hi", windows.windows()[i].hi}, {"defect", to_string(values[i])}});
    }
    emit(ctx, {{"schema_version", kSchemaVersion}, {"t", shift_t}, {"windows", rows}}, "folner-defect",
         [&](std::ostream& o) {
           o << "lo,hi,defect\n";
           for (const auto& r : rows) {
             o << r["lo"].get<std::int64_t>() << ',' << r["hi"].get<std::int64_t>() << ','
               << r["defect"].get<std::string>() << '\n';
           }
         });
    return kExitOk;
  }
  if (correspond->parsed()) {
    auto set = parse_set_spec(set_spec);
    auto c = build_correspondence(set, radius);
    auto doc = correspondence_to_json(c);
    if (!window_arg.empty()) {
      auto w = parse_interval(window_arg);
      auto members = reconstruct(c.point, c.cylinder, w).members_in(w);
      doc["window"] = {{"lo", w.lo}, {"hi", w.hi}};
      doc["frequency"] = to_string(empirical_frequency(c.point, w, c.cylinder));
      doc["members"] = members;
    }
    emit(ctx, doc, "correspond");
    return kExitOk;
  }
  if (orbit->parsed()) {
    auto system = parse_system_spec(system_spec);
    auto [eps, horizon] = ctx.recurrence();
    auto v = omega_member_approx(system, parse_point(system, start), parse_point(system, target), eps, horizon,
                                 cfg.min_hits);
    auto doc = Json{{"schema_version", kSchemaVersion}, {"system", system.describe()}};
    doc.update(omega_to_json(v));
    emit(ctx, doc, "orbit");
    return kExitOk;
  }
  if (cube_verify->parsed()) {
    auto system = parse_system_spec(system_spec);
    auto cube = cube_from_json(load_json_arg(cube_arg), &system);
    auto [eps, horizon] = ctx.recurrence();
    emit(ctx, erdos_to_json(verify_erdos_cube(cube, eps, horizon, cfg.min_hits)), "cube-verify");
    return kExitOk;
  }
  if (qk->parsed()) {
    auto system = parse_system_spec(system_spec);
    auto cube = cube_from_json(load_json_arg(cube_arg), &system);
    bool skew = system.as<SkewProduct>() != nullptr;
    bool member = skew ? q2_membership_skew(cube, cfg.tol) : qk_membership_rotation(cube, cfg.tol);
    emit(ctx,
         {{"schema_version", kSchemaVersion},
          {"test", skew ? "q2-skew" : "qk-rotation"},
          {"k", cube.dimension()},
          {"tol", cfg.tol},
          {"member", member}},
         "qk-test");
    return kExitOk;
  }
  if (measure->parsed()) return cmd_measure(ctx, margs);
  if (find->parsed()) return cmd_find_sumset(ctx, sargs);
  if (verify->parsed()) {
    auto set = parse_set_spec(set_spec);
    auto report = verify_sumset(set, parse_sets(sets_arg));
    Json doc{{"schema_version", kSchemaVersion}, {"ok", report.ok}};
    doc["violating_sum"] = report.violating_sum ? Json(*report.violating_sum) : Json(nullptr);
    emit(ctx, doc, "verify-sumset");
    return kExitOk;
  }
  return kExitInvalid;
}

/// Finds --config in the raw arguments so file values can be loaded before
/// flags are bound.
std::optional<std::string> config_flag(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            std::optional<std::string> config_env) {
  CLI::App app("Toolkit for dense sets, cube structures and sumset search", "sumlab");
  try {
    Context ctx{RunConfig{}, out};
    auto config_path = config_flag(args);
    if (!config_path) config_path = config_env;
    if (config_path && !config_path->empty()) ctx.cfg.apply_file_text(read_file(*config_path));
    return dispatch(app, ctx, args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const WindowOverflow& e) {
    err << "window overflow: " << e.what() << '\n';
    return kExitWindowOverflow;
  } catch (const BoundExceeded& e) {
    err << "bound exceeded: " << e.what() << '\n';
    return kExitBoundExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<std::string> env;
  if (const char* v = std::getenv(kConfigEnvVar)) env = v;
  return run_cli(args, out, err, env);
}

}  // namespace sumlab
