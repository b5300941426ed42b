#include "hs6v/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hs6v/airy_tw.hpp"
#include "hs6v/asymptotics.hpp"
#include "hs6v/contour.hpp"
#include "hs6v/dpp.hpp"
#include "hs6v/errors.hpp"
#include "hs6v/macdonald_measure.hpp"
#include "hs6v/matching.hpp"
#include "hs6v/vertex.hpp"

#ifndef HS6V_VERSION
#define HS6V_VERSION "0.0.0"
#endif

namespace hs6v::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int schema_version = 1;

// Effective configuration plus everything a command needs to emit artifacts.
struct Context {
  json config = json::object();
  double tol = 1e-8;
  unsigned workers = 1;
  fs::path out = ".";
  std::vector<std::string> written;

  std::uint64_t seed() const {
    if (!config.contains("seed")) throw ConfigurationError("this command samples and needs a seed (--seed or \"seed\")");
    return config["seed"].get<std::uint64_t>();
  }
};

// ---- config access ---------------------------------------------------------

json& block(json& parent, const std::string& key) {
  if (!parent.contains(key)) throw ConfigurationError("missing config block \"" + key + "\"");
  if (!parent[key].is_object()) throw ConfigurationError("config block \"" + key + "\" must be an object");
  return parent[key];
}

// Reads key, or records and returns the default so the effective config is complete.
template <class T>
T take(json& b, const std::string& key, const T& fallback) {
  if (!b.contains(key)) {
    b[key] = fallback;
    return fallback;
  }
  try {
    return b.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError("config key \"" + key + "\": " + e.what());
  }
}

template <class T>
T need(const json& b, const std::string& key) {
  if (!b.contains(key)) throw ConfigurationError("missing config key \"" + key + "\"");
  try {
    return b.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError("config key \"" + key + "\": " + e.what());
  }
}

Rational as_rational(const json& v, const std::string& what) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      throw ConfigurationError(what + ": " + e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ConfigurationError(what + ": exact parameters are integers or strings such as \"1/4\"");
}

Rational rational_key(json& b, const std::string& key) {
  if (!b.contains(key)) throw ConfigurationError("missing config key \"" + key + "\"");
  const Rational r = as_rational(b[key], key);
  b[key] = to_string(r);
  return r;
}

Rational rational_key(json& b, const std::string& key, const Rational& fallback) {
  if (!b.contains(key)) b[key] = to_string(fallback);
  return rational_key(b, key);
}

std::vector<Rational> rational_list(json& b, const std::string& key, bool required = true) {
  if (!b.contains(key)) {
    if (required) throw ConfigurationError("missing config key \"" + key + "\"");
    b[key] = json::array();
  }
  if (!b[key].is_array()) throw ConfigurationError("config key \"" + key + "\" must be an array");
  std::vector<Rational> out;
  json resolved = json::array();
  for (const auto& v : b[key]) {
    out.push_back(as_rational(v, key));
    resolved.push_back(to_string(out.back()));
  }
  b[key] = resolved;
  return out;
}

asymptotics::ModelVariant variant_key(json& b) {
  return asymptotics::variant_from_string(take<std::string>(b, "variant", "spin_half"));
}

// ---- spec blocks -----------------------------------------------------------

matching::ClusterMap cluster_map(json& m) {
  matching::ClusterMap cmap;
  if (!m.contains("alpha_clusters")) m["alpha_clusters"] = json::array();
  if (!m.contains("beta_clusters")) m["beta_clusters"] = json::array();
  for (auto& c : m["alpha_clusters"]) cmap.alpha_clusters.push_back({rational_key(c, "alpha_tilde"), take<int>(c, "k", 1)});
  for (auto& c : m["beta_clusters"]) cmap.beta_clusters.push_back({rational_key(c, "beta_tilde"), take<int>(c, "l", 1)});
  if (m.contains("column_order")) {
    for (const auto& r : m["column_order"]) {
      const auto kind = need<std::string>(r, "kind");
      if (kind != "alpha" && kind != "beta") throw ConfigurationError("column_order kind must be alpha or beta");
      cmap.column_order.push_back(
          {kind == "alpha" ? matching::ClusterKind::alpha : matching::ClusterKind::beta, need<int>(r, "index")});
    }
  }
  if (m.contains("row_order")) cmap.row_order = need<std::vector<int>>(m, "row_order");
  return cmap;
}

struct MatchedPair {
  macdonald::MacdonaldSpec mspec;
  vertex::VertexSpec vspec;
  matching::ClusterMap cmap;
};

MatchedPair matched_pair(json& cfg) {
  json& m = block(cfg, "matched");
  MatchedPair p;
  const auto x = rational_list(m, "x");
  const Rational q = rational_key(m, "q");
  const Rational t = rational_key(m, "t");
  p.cmap = cluster_map(m);
  p.mspec = matching::expand_clusters(x, p.cmap, q, t);
  macdonald::require_valid(p.mspec);
  p.vspec = matching::build_matched_vertex_spec(p.mspec, p.cmap);
  return p;
}

macdonald::MacdonaldSpec macdonald_spec(json& cfg) {
  if (cfg.contains("matched") && !cfg.contains("macdonald")) return matched_pair(cfg).mspec;
  json& b = block(cfg, "macdonald");
  macdonald::MacdonaldSpec s;
  s.x = rational_list(b, "x");
  s.rho2.alphas = rational_list(b, "alphas", false);
  s.rho2.betas = rational_list(b, "betas", false);
  s.rho2.q = rational_key(b, "q");
  s.rho2.t = rational_key(b, "t");
  macdonald::require_valid(s);
  return s;
}

vertex::VertexSpec vertex_spec(json& cfg) {
  if (cfg.contains("homogeneous")) {
    json& h = block(cfg, "homogeneous");
    const auto v = variant_key(h);
    return asymptotics::homogeneous_spec(v, rational_key(h, "zeta"), rational_key(h, "sqrt_q", Rational(1, 2)),
                                         need<int>(h, "M"), need<int>(h, "N"));
  }
  if (cfg.contains("matched") && !cfg.contains("vertex")) return matched_pair(cfg).vspec;
  json& b = block(cfg, "vertex");
  vertex::VertexSpec s;
  s.q = rational_key(b, "q");
  if (!b.contains("columns") || !b["columns"].is_array()) throw ConfigurationError("vertex.columns must be an array");
  for (auto& c : b["columns"]) {
    const auto type = need<std::string>(c, "type");
    const int repeat = take<int>(c, "repeat", 1);
    vertex::ColumnParams col;
    if (type == "positive")
      col = vertex::positive_column(s.q, need<int>(c, "m"), rational_key(c, "s_xi"));
    else if (type == "negative")
      col = vertex::negative_column(rational_key(c, "s_squared"), rational_key(c, "s_xi"));
    else
      throw ConfigurationError("column type must be positive or negative");
    for (int i = 0; i < repeat; ++i) s.columns.push_back(col);
  }
  s.u = rational_list(b, "u");
  vertex::require_valid(s);
  return s;
}

contour::KernelModel schur_model(json& cfg) {
  json& b = block(cfg, "schur");
  contour::KernelModel m;
  const auto model = take<std::string>(b, "model", "meixner");
  if (model == "meixner")
    m.model = contour::SchurModel::meixner;
  else if (model == "krawtchouk")
    m.model = contour::SchurModel::krawtchouk;
  else
    throw ConfigurationError("schur.model must be meixner or krawtchouk");
  m.M = need<int>(b, "M");
  m.N = need<int>(b, "N");
  m.zeta = need<double>(b, "zeta");
  return m;
}

airy::TWTable tw_table_from(json& cfg, unsigned workers) {
  if (!cfg.contains("tw")) cfg["tw"] = json::object();
  json& b = cfg["tw"];
  return airy::tw_table(take<int>(b, "points", 601), take<double>(b, "lo", -8.0), take<double>(b, "hi", 4.0),
                        take<int>(b, "order", 80), workers);
}

// ---- artifacts ---------------------------------------------------------------

json stamped(const Context& ctx) {
  return {{"tool", "hs6v"}, {"version", version()}, {"schema", schema_version}, {"config", ctx.config}};
}

void write_atomic(Context& ctx, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  const fs::path target = ctx.out / name;
  const fs::path tmp = ctx.out / (name + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigurationError("cannot write " + tmp.string());
    f << content;
    if (!f) throw ConfigurationError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw ConfigurationError("cannot move " + tmp.string() + " into place: " + ec.message());
  ctx.written.push_back(name);
}

void write_json(Context& ctx, const std::string& name, json body) {
  json doc = stamped(ctx);
  for (auto& [k, v] : body.items()) doc[k] = v;
  write_atomic(ctx, name, doc.dump(2) + "\n");
}

// CSV with a leading comment line carrying the stamp.
void write_csv(Context& ctx, const std::string& name, const std::string& table) {
  write_atomic(ctx, name, "# " + stamped(ctx).dump() + "\n" + table);
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- commands --------------------------------------------------------------

int cmd_sample_vertex(Context& ctx) {
  auto spec = vertex_spec(ctx.config);
  const auto count = take<std::size_t>(ctx.config, "samples", 1000);
  const auto h = vertex::sample_heights(spec, ctx.seed(), count, ctx.workers);
  std::ostringstream csv;
  csv << "sample_index,h\n";
  double mean = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    csv << i << ',' << h[i] << '\n';
    mean += h[i];
  }
  write_csv(ctx, "heights.csv", csv.str());
  write_json(ctx, "sample_vertex.json",
             {{"M", spec.M()}, {"N", spec.N()}, {"samples", count}, {"mean_h", h.empty() ? 0.0 : mean / h.size()}});
  return exit_ok;
}

int cmd_exact_dist(Context& ctx) {
  auto spec = vertex_spec(ctx.config);
  const auto cap = take<std::size_t>(ctx.config, "state_cap", vertex::default_state_cap);
  const auto dist = vertex::exact_height_distribution(spec, cap);
  std::ostringstream csv;
  csv.precision(17);
  csv << "h,probability,probability_exact\n";
  json rows = json::array();
  for (std::size_t k = 0; k < dist.values.size(); ++k) {
    csv << k << ',' << to_double(dist.values[k]) << ',' << to_string(dist.values[k]) << '\n';
    rows.push_back({{"h", k}, {"probability", to_double(dist.values[k])}, {"exact", to_string(dist.values[k])}});
  }
  write_csv(ctx, "exact_dist.csv", csv.str());
  write_json(ctx, "exact_dist.json", {{"M", spec.M()}, {"N", spec.N()}, {"distribution", rows}});
  return exit_ok;
}

int cmd_verify_match(Context& ctx) {
  auto pair = matched_pair(ctx.config);
  matching::MatchCheckOptions opt;
  opt.tol = ctx.tol;
  opt.workers = ctx.workers;
  opt.degree_cap = take<int>(ctx.config, "degree_cap", symfunc::default_degree_cap);
  opt.state_cap = take<std::size_t>(ctx.config, "state_cap", vertex::default_state_cap);
  const int l_max = take<int>(ctx.config, "l_max", 3);
  const auto zetas = take<std::vector<double>>(ctx.config, "zetas", {0.3, 1.0, 3.0});
  const auto structural = matching::verify_matching(pair.vspec, pair.mspec, pair.cmap);
  json records = json::array();
  bool pass = structural.ok;
  for (const auto& r : matching::check_match_moments(pair.vspec, pair.mspec, l_max, opt)) {
    records.push_back(matching::to_json(r));
    pass = pass && r.pass;
  }
  for (const auto& r : matching::check_match_qlaplace(pair.vspec, pair.mspec, zetas, opt)) {
    records.push_back(matching::to_json(r));
    pass = pass && r.pass;
  }
  write_json(ctx, "match_report.json",
             {{"matching_issues", structural.issues}, {"records", records}, {"pass", pass}});
  return pass ? exit_ok : exit_accuracy;
}

int cmd_mm_expect(Context& ctx) {
  auto spec = macdonald_spec(ctx.config);
  if (!ctx.config.contains("observable")) ctx.config["observable"] = {{"kind", "elementary"}};
  json& ob = ctx.config["observable"];
  const auto kind = take<std::string>(ob, "kind", "elementary");
  const int cap = take<int>(ctx.config, "degree_cap", symfunc::default_degree_cap);
  macdonald::Expectation e;
  if (kind == "elementary")
    e = macdonald::mm_expect_elementary(spec, take<int>(ob, "l", 1), ctx.tol, cap);
  else if (kind == "qlaplace")
    e = macdonald::mm_expect_qlaplace(spec, take<double>(ob, "zeta", 1.0), ctx.tol, cap);
  else
    throw ConfigurationError("observable.kind must be elementary or qlaplace");
  const bool ok = e.truncation_error() <= ctx.tol;
  write_json(ctx, "mm_expect.json",
             {{"value", e.value},
              {"tail_mass", e.tail_mass},
              {"degree", e.degree},
              {"bound", e.bound},
              {"truncation_error", e.truncation_error()},
              {"converged", ok}});
  return ok ? exit_ok : exit_accuracy;
}

int cmd_contour_moment(Context& ctx) {
  const auto target = take<std::string>(ctx.config, "target", "macdonald");
  const int l = take<int>(ctx.config, "l", 1);
  const int max_l = take<int>(ctx.config, "max_l", contour::default_max_l);
  const int node_cap = take<int>(ctx.config, "node_cap", contour::default_node_cap);
  contour::QuadratureResult r;
  if (target == "vertex")
    r = contour::vertex_moment_contour(vertex_spec(ctx.config), l, ctx.tol, max_l, node_cap);
  else if (target == "macdonald")
    r = contour::macdonald_moment_contour(macdonald_spec(ctx.config), l, ctx.tol, max_l, node_cap);
  else
    throw ConfigurationError("target must be vertex or macdonald");
  write_json(ctx, "contour_moment.json",
             {{"value", r.value.real()},
              {"imag", r.value.imag()},
              {"error_estimate", r.error_estimate},
              {"nodes_used", r.nodes_used}});
  return exit_ok;
}

int cmd_schur_sample(Context& ctx) {
  const auto model = schur_model(ctx.config);
  const auto count = take<std::size_t>(ctx.config, "samples", 1000);
  const auto batch = dpp::sample_schur_batch(model, ctx.seed(), count, ctx.workers);
  std::ostringstream csv;
  dpp::write_csv(batch, csv);
  write_csv(ctx, "schur_samples.csv", csv.str());
  return exit_ok;
}

int cmd_gap_prob(Context& ctx) {
  const auto model = schur_model(ctx.config);
  const auto ks = take<std::vector<int>>(ctx.config, "k", {0, 1, 2, 3});
  json rows = json::array();
  for (int k : ks) {
    const auto g = dpp::length_cdf(model, k, ctx.tol);
    rows.push_back({{"k", k}, {"probability", g.value}, {"depth", g.depth}, {"clamped", g.clamped}});
  }
  write_json(ctx, "gap_prob.json", {{"event", "length <= k"}, {"values", rows}});
  return exit_ok;
}

int cmd_tw_table(Context& ctx) {
  const auto table = tw_table_from(ctx.config, ctx.workers);
  std::ostringstream csv;
  airy::write_csv(table, csv);
  write_csv(ctx, "tw_table.csv", csv.str());
  return exit_ok;
}

int cmd_tw_experiment(Context& ctx) {
  json& b = block(ctx.config, "experiment");
  asymptotics::TWExperimentConfig c;
  c.variant = variant_key(b);
  c.zeta = rational_key(b, "zeta", Rational(1, 4));
  c.sqrt_q = rational_key(b, "sqrt_q", Rational(1, 2));
  c.mu = take<double>(b, "mu", 1.0);
  c.nu = take<double>(b, "nu", 1.0);
  c.L_list = take<std::vector<int>>(b, "L", {100, 256});
  c.n_samples = take<std::size_t>(b, "n_samples", 5000);
  c.seed = ctx.seed();
  c.workers = ctx.workers;
  const auto table = tw_table_from(ctx.config, ctx.workers);
  const auto crit = asymptotics::critical_data(c.mu, c.nu, to_double(c.zeta), c.variant);
  const auto rows = asymptotics::tw_experiment(c, table);
  std::ostringstream csv;
  asymptotics::write_csv(rows, csv);
  write_csv(ctx, "tw_experiment.csv", csv.str());
  json jr = json::array();
  for (const auto& r : rows)
    jr.push_back({{"L", r.L},
                  {"M", r.M},
                  {"N", r.N},
                  {"n_samples", r.n_samples},
                  {"mean_h_over_L", r.mean_h_over_L},
                  {"H_target", r.H_target},
                  {"sigma", r.sigma},
                  {"ks_distance", r.ks_distance}});
  write_json(ctx, "tw_experiment.json",
             {{"critical", {{"x_c", crit.x_c}, {"z_c", crit.z_c}, {"sigma", crit.sigma}, {"H", crit.H},
                            {"z_closed_form", crit.certificate.z_closed_form},
                            {"z_deviation", crit.certificate.z_deviation}}},
              {"rows", jr}});
  return exit_ok;
}

int cmd_equivalence(Context& ctx) {
  json& b = block(ctx.config, "equivalence");
  const auto v = variant_key(b);
  const auto zeta = rational_key(b, "zeta", Rational(1, 4));
  const auto sqrt_q = rational_key(b, "sqrt_q", Rational(1, 2));
  const auto sizes = take<std::vector<int>>(b, "sizes", {8, 16, 32});
  const auto n = take<std::size_t>(b, "n_samples", 2000);
  const auto rep = asymptotics::vertex_schur_equivalence(v, zeta, sqrt_q, sizes, n, ctx.seed(), ctx.workers);
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"index", r.index},
                    {"spread_lhs", number(r.spread_lhs)},
                    {"spread_rhs", number(r.spread_rhs)},
                    {"sup_distance", number(r.sup_distance)}});
  write_json(ctx, "equivalence_report.json",
             {{"rows", rows}, {"sup_distance_decreasing", rep.sup_distance_decreasing}, {"spreads", rep.spreads}});
  return exit_ok;
}

const std::map<std::string, std::pair<std::string, std::function<int(Context&)>>>& commands() {
  static const std::map<std::string, std::pair<std::string, std::function<int(Context&)>>> table{
      {"sample-vertex", {"Monte Carlo samples of h(M,N)", cmd_sample_vertex}},
      {"exact-dist", {"exact law of h(M,N) by transfer-matrix enumeration", cmd_exact_dist}},
      {"verify-match", {"moment and q-Laplace reports for a matched pair", cmd_verify_match}},
      {"mm-expect", {"Macdonald-measure expectation by direct summation", cmd_mm_expect}},
      {"contour-moment", {"moment by nested contour quadrature", cmd_contour_moment}},
      {"schur-sample", {"RSK samples of a Schur measure", cmd_schur_sample}},
      {"gap-prob", {"P{length(lambda) <= k} from Fredholm determinants", cmd_gap_prob}},
      {"tw-table", {"F_GUE on a grid", cmd_tw_table}},
      {"tw-experiment", {"Tracy-Widom Monte Carlo experiment", cmd_tw_experiment}},
      {"equivalence-report", {"vertex / Schur asymptotic-equivalence diagnostics", cmd_equivalence}},
  };
  return table;
}

int report_error(const Context& ctx, const std::string& type, const std::string& message, int code,
                 const AccuracyError* acc = nullptr) {
  json err = {{"error", {{"type", type}, {"message", message}}}, {"exit_code", code}};
  if (acc) {
    err["error"]["best_value"] = number(acc->best_value());
    err["error"]["error_estimate"] = number(acc->error_estimate());
  }
  err["partial_artifacts"] = ctx.written;
  std::cerr << err.dump() << '\n';
  std::error_code ec;
  if (fs::is_directory(ctx.out, ec)) {
    std::ofstream f(ctx.out / "error.json");
    if (f) f << err.dump(2) << '\n';
  }
  return code;
}

}  // namespace

std::string version() { return HS6V_VERSION; }

nlohmann::json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigurationError("cannot open config file " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigurationError("config file " + path + ": " + e.what());
  }
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Higher-spin six-vertex / Macdonald measure toolkit", "hs6v"};
  app.set_version_flag("--version", version());
  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  unsigned workers = 1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "master seed for sampling commands");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--workers", workers, "worker threads (never changes the output)")->capture_default_str();
  app.add_option("--tol", tol, "numerical tolerance (default 1e-8)");
  app.require_subcommand(1);
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands()) subs[name] = app.add_subcommand(name, entry.first)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  Context ctx;
  ctx.out = out_dir;
  ctx.workers = std::max(1u, workers);
  try {
    if (!config_path.empty()) ctx.config = load_config(config_path);
    if (!ctx.config.is_object()) throw ConfigurationError("config must be a JSON object");
    std::string name;
    for (const auto& [n, sub] : subs)
      if (sub->parsed()) name = n;
    if (ctx.config.contains("command") && ctx.config["command"] != name)
      throw ConfigurationError("config is for command " + ctx.config["command"].dump() + ", not " + name);
    ctx.config["command"] = name;
    ctx.config.erase("workers");
    if (seed) ctx.config["seed"] = *seed;
    if (tol) ctx.config["tol"] = *tol;
    ctx.tol = take<double>(ctx.config, "tol", 1e-8);
    if (!(ctx.tol > 0.0)) throw ConfigurationError("tol must be positive");
    return commands().at(name).second(ctx);
  } catch (const AccuracyError& e) {
    return report_error(ctx, "accuracy", e.what(), exit_accuracy, &e);
  } catch (const ResourceError& e) {
    return report_error(ctx, "resource", e.what(), exit_resource);
  } catch (const ConfigurationError& e) {
    return report_error(ctx, "configuration", e.what(), exit_config);
  } catch (const DomainError& e) {
    return report_error(ctx, "domain", e.what(), exit_config);
  } catch (const json::exception& e) {
    return report_error(ctx, "configuration", e.what(), exit_config);
  } catch (const std::exception& e) {
    return report_error(ctx, "internal", e.what(), 1);
  }
}

}  // namespace hs6v::cli
