#include "apfree/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "apfree/analysis.hpp"
#include "apfree/construct.hpp"
#include "apfree/core.hpp"
#include "apfree/io.hpp"
#include "apfree/kernels.hpp"
#include "apfree/search.hpp"

#ifndef APFREE_VERSION
#define APFREE_VERSION "0.0.0"
#endif

namespace apfree::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input failure with the offending path attached.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  std::string format;
  std::string output;
  std::string manifest;
  bool no_manifest = false;

  std::int64_t k = 3;
  std::int64_t n = 0;
  std::int64_t s = 2;
  std::int64_t rows = 0;
  std::int64_t max = 0;
  std::int64_t nmax = 0;
  double c = 1.0;
  std::optional<std::uint64_t> budget;
  std::string input;
};

struct Artifact {
  std::string body;
  RunManifest manifest;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string pick_format(const Params& p, std::string_view fallback, std::initializer_list<std::string_view> allowed) {
  const std::string f = p.format.empty() ? std::string(fallback) : p.format;
  for (auto a : allowed) {
    if (a == f) return f;
  }
  throw UsageError("--format " + f + " is not supported by this command");
}

template <typename Reader>
auto read_input(const std::string& path, std::istream& in, Reader reader) {
  try {
    if (path == "-") return reader(in);
    std::ifstream file(path);
    if (!file) throw InputError(path + ": cannot open file");
    return reader(file);
  } catch (const io::ParseError& e) {
    throw InputError((path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
  }
}

ordered_json points_json(const PointSet& b) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : b) arr.push_back({p.x, p.y});
  return arr;
}

std::string dump_line(const ordered_json& j) { return j.dump() + "\n"; }

std::string set_text(const NaturalSet& a) {
  std::ostringstream os;
  io::write_natural_set(os, a);
  return os.str();
}

std::string points_text(const PointSet& b) {
  std::ostringstream os;
  io::write_point_set(os, b);
  return os.str();
}

// ---- construct -------------------------------------------------------------

Artifact construct_greedy(const Params& p) {
  const auto fmt = pick_format(p, "text", {"text", "json"});
  const NaturalSet a = greedy_ap_free(p.k, p.n);
  Artifact art;
  art.manifest.parameters = {{"k", std::to_string(p.k)}, {"n", std::to_string(p.n)}};
  art.body = fmt == "text" ? set_text(a) : dump_line({{"elements", a.elements()}});
  return art;
}

Artifact construct_behrend(const Params& p) {
  const auto fmt = pick_format(p, "text", {"text", "json"});
  const BehrendParams params = choose_behrend_params(p.n);
  const NaturalSet a = behrend_set(params);
  Artifact art;
  art.manifest.parameters = {{"n", std::to_string(p.n)}};
  if (fmt == "text") {
    art.body = set_text(a);
  } else {
    ordered_json j;
    j["digit_bound"] = params.digit_bound;
    j["dimension"] = params.dimension;
    j["shell_norm"] = params.shell_norm;
    j["size"] = a.size();
    j["elements"] = a.elements();
    art.body = dump_line(j);
  }
  return art;
}

Artifact construct_theta(const Params& p, std::istream& in) {
  const auto fmt = pick_format(p, "text", {"text", "json"});
  const NaturalSet a = read_input(p.input, in, [](std::istream& s) { return io::read_natural_set(s); });
  const PointSet b = theta(a, p.rows);
  Artifact art;
  art.manifest.parameters = {{"input", p.input}, {"rows", std::to_string(p.rows)}};
  art.body = fmt == "text" ? points_text(b) : dump_line({{"points", points_json(b)}});
  return art;
}

// ---- detect ----------------------------------------------------------------

Artifact detect_ap(const Params& p, std::istream& in) {
  pick_format(p, "json", {"json"});
  const NaturalSet a = read_input(p.input, in, [](std::istream& s) { return io::read_natural_set(s); });
  Artifact art;
  art.manifest.parameters = {{"k", std::to_string(p.k)}, {"input", p.input}};
  art.body = dump_line(io::detection_json(find_ap(a, p.k)));
  return art;
}

Artifact detect_grid(const Params& p, std::istream& in) {
  pick_format(p, "json", {"json"});
  const PointSet b = read_input(p.input, in, [](std::istream& s) { return io::read_point_set(s); });
  Artifact art;
  art.manifest.parameters = {{"s", std::to_string(p.s)}, {"input", p.input}};
  art.body = dump_line(io::detection_json(find_grid(b, p.s)));
  return art;
}

// ---- search ----------------------------------------------------------------

SearchConfig search_config(const Params& p) {
  SearchConfig cfg;
  cfg.node_budget = p.budget;
  return cfg;
}

void add_budget(Artifact& art, const Params& p) {
  if (p.budget) art.manifest.parameters.emplace_back("budget", std::to_string(*p.budget));
}

Artifact search_r(const Params& p) {
  const auto fmt = pick_format(p, "json", {"json", "text"});
  const auto res = max_ap_free(p.k, p.n, search_config(p));
  Artifact art;
  art.manifest.parameters = {{"k", std::to_string(p.k)}, {"n", std::to_string(p.n)}};
  add_budget(art, p);
  art.manifest.exact = res.exact;
  if (fmt == "text") {
    art.body = set_text(res.optimum);
  } else {
    ordered_json j;
    j["value"] = res.value;
    j["exact"] = res.exact;
    j["optimum"] = res.optimum.elements();
    j["nodes"] = res.nodes_explored;
    j["seconds"] = res.elapsed.count();
    art.body = dump_line(j);
  }
  return art;
}

Artifact search_rtilde(const Params& p) {
  const auto fmt = pick_format(p, "json", {"json", "text"});
  const auto res = max_grid_free(p.s, p.n, search_config(p));
  Artifact art;
  art.manifest.parameters = {{"s", std::to_string(p.s)}, {"n", std::to_string(p.n)}};
  add_budget(art, p);
  art.manifest.exact = res.exact;
  if (fmt == "text") {
    art.body = points_text(res.optimum);
  } else {
    ordered_json j;
    j["value"] = res.value;
    j["exact"] = res.exact;
    j["optimum"] = points_json(res.optimum);
    j["nodes"] = res.nodes_explored;
    j["seconds"] = res.elapsed.count();
    art.body = dump_line(j);
  }
  return art;
}

Artifact search_bound(const Params& p) {
  const auto fmt = pick_format(p, "json", {"json", "text"});
  const auto res = certified_lower_bound(p.s, p.n, search_config(p));
  Artifact art;
  art.manifest.parameters = {{"s", std::to_string(p.s)}, {"n", std::to_string(p.n)}};
  add_budget(art, p);
  art.manifest.exact = res.exact;
  if (fmt == "text") {
    art.body = points_text(res.certificate);
  } else {
    ordered_json j;
    j["bound"] = res.bound;
    j["exact"] = res.exact;
    j["ap_free_value"] = res.ap_free.value;
    j["ap_free_optimum"] = res.ap_free.optimum.elements();
    j["certificate"] = points_json(res.certificate);
    j["nodes"] = res.ap_free.nodes_explored;
    j["seconds"] = res.ap_free.elapsed.count();
    art.body = dump_line(j);
  }
  return art;
}

// ---- analyze ---------------------------------------------------------------

Artifact analyze_energy(const Params& p, std::istream& in) {
  const auto fmt = pick_format(p, "json", {"json", "csv"});
  const PointSet b = read_input(p.input, in, [](std::istream& s) { return io::read_point_set(s); });
  const EnergyTotal total = energy_partial(b);
  Artifact art;
  art.manifest.parameters = {{"input", p.input}};
  const std::string exact = total.exact ? rational_string(*total.exact) : "";
  if (fmt == "csv") {
    art.body = "points,approx,exact\n" + std::to_string(total.points) + "," + io::format_double(total.approx) + "," +
               exact + "\n";
  } else {
    ordered_json j;
    j["points"] = total.points;
    j["approx"] = total.approx;
    j["exact"] = total.exact ? ordered_json(exact) : ordered_json(nullptr);
    art.body = dump_line(j);
  }
  return art;
}

Artifact analyze_rowbound(const Params& p) {
  const auto fmt = pick_format(p, "csv", {"csv", "json"});
  if (p.max < 1) throw DomainError("--max must be positive");
  Artifact art;
  art.manifest.parameters = {{"max", std::to_string(p.max)}};
  std::ostringstream os;
  bool all_hold = true;
  std::vector<std::int64_t> tight;
  if (fmt == "csv") os << "a,row_energy,lower_bound,holds,tight\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::int64_t a = 1; a <= p.max; ++a) {
    const RowBoundCheck check = row_bound_check(a);
    all_hold = all_hold && check.holds;
    if (check.tight) tight.push_back(a);
    if (fmt == "csv") {
      xs.resize(static_cast<std::size_t>(a));
      ys.resize(static_cast<std::size_t>(a));
      for (std::int64_t m = 1; m <= a; ++m) {
        xs[static_cast<std::size_t>(m - 1)] = static_cast<double>(a + m);
        ys[static_cast<std::size_t>(m - 1)] = static_cast<double>(m);
      }
      os << a << ',' << io::format_double(kernels::inverse_square_norm_sum(xs, ys)) << ",1/" << 5 * a << ','
         << (check.holds ? "true" : "false") << ',' << (check.tight ? "true" : "false") << '\n';
    }
  }
  if (fmt == "json") {
    ordered_json j;
    j["max"] = p.max;
    j["all_hold"] = all_hold;
    j["tight"] = tight;
    os << dump_line(j);
  }
  art.body = os.str();
  return art;
}

Artifact analyze_table(const Params& p) {
  const auto fmt = pick_format(p, "csv", {"csv", "json"});
  if (p.nmax < 1) throw DomainError("--nmax must be positive");
  std::vector<std::int64_t> ns(static_cast<std::size_t>(p.nmax));
  std::iota(ns.begin(), ns.end(), 1);
  const auto rows = grid_bound_table(p.s, ns, p.c);
  Artifact art;
  art.manifest.parameters = {{"s", std::to_string(p.s)}, {"nmax", std::to_string(p.nmax)}, {"c", io::format_double(p.c)}};
  for (const auto& r : rows) art.manifest.exact = art.manifest.exact && r.exact;
  std::ostringstream os;
  if (fmt == "csv") {
    write_grid_bound_csv(os, rows);
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      j["N"] = r.n;
      j["r"] = r.ap_free_max;
      j["exact"] = r.exact;
      j["lifted_bound"] = r.lifted_bound;
      j["behrend_form"] = r.behrend_form;
      arr.push_back(j);
    }
    os << dump_line(arr);
  }
  art.body = os.str();
  return art;
}

ordered_json manifest_json(const RunManifest& m) {
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : m.parameters) params[key] = value;
  ordered_json j;
  j["command"] = m.command;
  j["parameters"] = params;
  j["tool_version"] = m.tool_version;
  j["started_at"] = m.started_at;
  j["exact"] = m.exact;
  return j;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot open for writing");
  f << body;
  if (!f) throw InputError(path + ": write failed");
}

}  // namespace

std::string tool_version() { return APFREE_VERSION; }

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Params p;
  CLI::App app{"Progression-free sets, grid-free liftings and their extremal values", "apfree"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  app.add_option("--format", p.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--output", p.output, "Write the artifact to a file (with a .manifest.json next to it)");
  app.add_option("--manifest", p.manifest, "Write the run manifest to this path");
  app.add_flag("--no-manifest", p.no_manifest, "Do not write a manifest next to --output");

  auto* construct = app.add_subcommand("construct", "Build progression-free sets and their liftings");
  construct->require_subcommand(1);
  auto* greedy = construct->add_subcommand("greedy", "Greedy k-AP-free subset of {1..n}");
  greedy->add_option("--k", p.k, "Progression length")->required();
  greedy->add_option("--n", p.n, "Universe size")->required();
  auto* behrend = construct->add_subcommand("behrend", "Behrend 3-AP-free subset of {1..n}");
  behrend->add_option("--n", p.n, "Universe size")->required();
  auto* theta_cmd = construct->add_subcommand("theta", "Lift a set to the band {(a+m, m)}");
  theta_cmd->add_option("--input", p.input, "NaturalSet file, or - for stdin")->required();
  theta_cmd->add_option("--rows", p.rows, "Number of rows")->required();

  auto* detect = app.add_subcommand("detect", "Find progressions or grids");
  detect->require_subcommand(1);
  auto* det_ap = detect->add_subcommand("ap", "Find a k-term progression");
  det_ap->add_option("--k", p.k, "Progression length")->required();
  det_ap->add_option("--input", p.input, "NaturalSet file, or - for stdin")->required();
  auto* det_grid = detect->add_subcommand("grid", "Find an s x s axes-parallel grid");
  det_grid->add_option("--s", p.s, "Grid size")->required();
  det_grid->add_option("--input", p.input, "PointSet file, or - for stdin")->required();

  auto* search = app.add_subcommand("search", "Exact extremal searches");
  search->require_subcommand(1);
  auto* s_r = search->add_subcommand("r", "Largest k-AP-free subset of {1..n}");
  s_r->add_option("--k", p.k, "Progression length")->required();
  s_r->add_option("--n", p.n, "Universe size")->required();
  s_r->add_option("--budget", p.budget, "Node budget");
  auto* s_rt = search->add_subcommand("rtilde", "Largest s-grid-free subset of {1..n}^2");
  s_rt->add_option("--s", p.s, "Grid size")->required();
  s_rt->add_option("--n", p.n, "Side length")->required();
  s_rt->add_option("--budget", p.budget, "Node budget");
  auto* s_bound = search->add_subcommand("bound", "Certified lower bound r(2s-1, n) * n via the lifting");
  s_bound->add_option("--s", p.s, "Grid size")->required();
  s_bound->add_option("--n", p.n, "Universe size")->required();
  s_bound->add_option("--budget", p.budget, "Node budget");

  auto* analyze = app.add_subcommand("analyze", "Energy sums and bound tables");
  analyze->require_subcommand(1);
  auto* energy = analyze->add_subcommand("energy", "Sum of 1/(x^2+y^2) over a point set");
  energy->add_option("--input", p.input, "PointSet file, or - for stdin")->required();
  auto* rowbound = analyze->add_subcommand("rowbound", "Check each row energy against 1/(5a)");
  rowbound->add_option("--max", p.max, "Largest a")->required();
  auto* table = analyze->add_subcommand("table", "Lifted lower bounds next to the Behrend-form bound");
  table->add_option("--s", p.s, "Grid size")->required();
  table->add_option("--nmax", p.nmax, "Largest N")->required();
  table->add_option("--c", p.c, "Constant c in the bound")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? 0 : 2;
  }

  const std::string started = utc_now();
  try {
    Artifact art;
    std::string command;
    if (greedy->parsed()) {
      command = "construct greedy", art = construct_greedy(p);
    } else if (behrend->parsed()) {
      command = "construct behrend", art = construct_behrend(p);
    } else if (theta_cmd->parsed()) {
      command = "construct theta", art = construct_theta(p, in);
    } else if (det_ap->parsed()) {
      command = "detect ap", art = detect_ap(p, in);
    } else if (det_grid->parsed()) {
      command = "detect grid", art = detect_grid(p, in);
    } else if (s_r->parsed()) {
      command = "search r", art = search_r(p);
    } else if (s_rt->parsed()) {
      command = "search rtilde", art = search_rtilde(p);
    } else if (s_bound->parsed()) {
      command = "search bound", art = search_bound(p);
    } else if (energy->parsed()) {
      command = "analyze energy", art = analyze_energy(p, in);
    } else if (rowbound->parsed()) {
      command = "analyze rowbound", art = analyze_rowbound(p);
    } else if (table->parsed()) {
      command = "analyze table", art = analyze_table(p);
    } else {
      throw UsageError("no command given");
    }
    art.manifest.command = command;
    art.manifest.tool_version = tool_version();
    art.manifest.started_at = started;
    art.manifest.parameters.emplace_back("format", p.format.empty() ? "default" : p.format);

    const std::string manifest = manifest_json(art.manifest).dump(2) + "\n";
    if (p.output.empty()) {
      out << art.body;
    } else {
      write_file(p.output, art.body);
      if (!p.no_manifest && p.manifest.empty()) write_file(p.output + ".manifest.json", manifest);
    }
    if (!p.manifest.empty()) write_file(p.manifest, manifest);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace apfree::cli
