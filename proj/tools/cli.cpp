#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgirth/cycle_extract.hpp"
#include "pgirth/engine.hpp"
#include "pgirth/generators.hpp"
#include "pgirth/io.hpp"
#include "pgirth/oracle.hpp"
#include "pgirth/separator.hpp"

namespace pgirth::cli {

namespace {

using json = nlohmann::json;

struct RunFlags {
  std::string algorithm = "exact";
  std::string mssp = "dense";
  std::string ddg = "dense";
  bool parallel = false;
  std::uint64_t seed = 0;
  std::string stats;
  int base_case = 32;
};

void add_run_flags(CLI::App* c, RunFlags& f) {
  c->add_option("--algorithm", f.algorithm, "exact or oracle")->check(CLI::IsMember({"exact", "oracle"}));
  c->add_option("--mssp", f.mssp, "dense or klein")->check(CLI::IsMember({"dense", "klein"}));
  c->add_option("--ddg", f.ddg, "dense or monge")->check(CLI::IsMember({"dense", "monge"}));
  c->add_flag("--parallel", f.parallel, "recurse into pieces concurrently");
  c->add_option("--seed", f.seed, "separator seed");
  c->add_option("--stats", f.stats, "emit statistics (json)")->check(CLI::IsMember({"json"}));
  c->add_option("--base-case", f.base_case, "base case size")->check(CLI::Range(4, 1 << 20));
}

EngineConfig make_config(const RunFlags& f, Stats* stats) {
  EngineConfig cfg;
  cfg.base_case_n = f.base_case;
  cfg.mssp_mode = f.mssp == "klein" ? MsspMode::Klein : MsspMode::Dense;
  cfg.ddg_mode = f.ddg == "monge" ? DdgMode::Monge : DdgMode::Dense;
  cfg.parallel = f.parallel;
  cfg.seed = f.seed;
  cfg.stats_sink = stats;
  return cfg;
}

template <typename Scalar>
std::string girth_text(const GirthValue<Scalar>& v) {
  if (v.is_minus_infinity()) return "-inf";
  if (v.is_plus_infinity()) return "+inf";
  return format_weight(v.weight());
}

template <typename Scalar>
json girth_json(const GirthValue<Scalar>& v) {
  if (v.is_finite()) return v.weight();
  return girth_text(v);
}

json stats_json(const Stats& s, const RunFlags& f, const InputGraph& in, const std::string& girth) {
  json j;
  j["schema"] = 1;
  j["n"] = in.num_vertices;
  j["arcs"] = in.arcs.size();
  j["girth"] = girth;
  j["config"] = {{"algorithm", f.algorithm}, {"mssp", f.mssp},         {"ddg", f.ddg},
                 {"parallel", f.parallel},   {"seed", f.seed},         {"base_case", f.base_case}};
  j["counters"] = {{"negative_reduced_cost_events", s.negative_reduced_cost_events},
                   {"monge_fallbacks", s.monge_fallbacks},
                   {"separator_fallbacks", s.separator_fallbacks},
                   {"klein_pivots", s.klein_pivots},
                   {"mssp_dense_fallbacks", s.mssp_dense_fallbacks},
                   {"stitch_repeated_arcs", s.stitch_repeated_arcs},
                   {"base_cases", s.base_cases}};
  json levels = json::array();
  for (const auto& r : s.levels) {
    json l = {{"level", r.level},       {"n", r.n},
              {"separator", r.separator_size}, {"piece1_n", r.piece1_n},
              {"piece2_n", r.piece2_n}, {"wall_ms", r.wall_ms}};
    l["cross_min"] = r.cross_min ? json(*r.cross_min) : json(nullptr);
    levels.push_back(l);
  }
  j["levels"] = levels;
  json seps = json::array();
  for (const auto& r : s.separators)
    seps.push_back({{"level", r.level},
                    {"n", r.n},
                    {"size", r.size},
                    {"inside", r.inside},
                    {"outside", r.outside},
                    {"within_bounds", r.within_bounds}});
  j["separators"] = seps;
  j["total_ms"] = s.total_ms;
  return j;
}

template <typename Scalar>
GirthValue<Scalar> compute(const InputGraph& in, const RunFlags& f, Stats* stats) {
  PlanarGraph<Scalar> g = in.to_graph<Scalar>();
  if (f.algorithm == "oracle") return oracle_girth(g);
  return GirthEngine<Scalar>(make_config(f, stats)).girth(g);
}

template <typename Scalar>
int girth_cmd(const InputGraph& in, const RunFlags& f, std::ostream& out) {
  Stats stats;
  GirthValue<Scalar> v = compute<Scalar>(in, f, &stats);
  out << "girth " << girth_text(v) << '\n';
  if (!f.stats.empty()) out << stats_json(stats, f, in, girth_text(v)).dump() << '\n';
  return 0;
}

template <typename Scalar>
int cycle_cmd(const InputGraph& in, const RunFlags& f, std::ostream& out) {
  PlanarGraph<Scalar> g = in.to_graph<Scalar>();
  Stats stats;
  std::vector<ArcId> arcs;
  json summary;
  if (f.algorithm == "oracle") {
    GirthValue<Scalar> v = oracle_girth(g);
    summary["girth"] = girth_json(v);
    if (v.is_finite()) {
      arcs = oracle_cycle(g)->arcs;
    } else if (v.is_minus_infinity()) {
      arcs = detect_negative_cycle(g)->arcs;
    }
  } else {
    CycleResult<Scalar> r = shortest_cycle(g, make_config(f, &stats));
    summary["girth"] = girth_json(r.girth);
    if (r.witness) arcs = r.witness->arcs;
    if (r.negative) arcs = r.negative->arcs;
  }
  Scalar w = Scalar(0);
  for (ArcId a : arcs) {
    out << "c " << a << '\n';
    w += g.arc(a).weight;
  }
  std::vector<VertexId> vs;
  for (ArcId a : arcs) vs.push_back(g.arc(a).tail);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  summary["arcs"] = arcs.size();
  summary["vertices"] = vs.size();
  if (!arcs.empty()) summary["weight"] = w;
  out << summary.dump() << '\n';
  if (!f.stats.empty()) out << stats_json(stats, f, in, summary["girth"].dump()).dump() << '\n';
  return 0;
}

template <typename Scalar>
int verify_cmd(const InputGraph& in, const std::string& witness_path, const RunFlags& f, std::ostream& out,
               std::ostream& err) {
  PlanarGraph<Scalar> g = in.to_graph<Scalar>();
  std::vector<ArcId> arcs = read_witness_file(witness_path);
  GirthValue<Scalar> v = compute<Scalar>(in, f, nullptr);
  if (v.is_plus_infinity()) {
    err << "verify: graph is acyclic, no witness can exist\n";
    return 2;
  }
  WitnessCheck chk = check_witness(g, arcs);
  if (!chk.ok) {
    err << "verify: " << chk.message << '\n';
    return 2;
  }
  Scalar w = Scalar(0);
  for (ArcId a : arcs) w += g.arc(a).weight;
  if (v.is_minus_infinity()) {
    if (!(w < Scalar(0))) {
      err << "verify: girth is -inf but the witness weight " << format_weight(w) << " is not negative\n";
      return 2;
    }
  } else {
    chk = check_witness(g, arcs, std::optional<Scalar>(v.weight()));
    if (!chk.ok) {
      err << "verify: " << chk.message << '\n';
      return 2;
    }
  }
  out << "ok weight " << format_weight(w) << " arcs " << arcs.size() << '\n';
  return 0;
}

template <typename Scalar>
int separator_cmd(const InputGraph& in, const RunFlags& f, std::ostream& out) {
  PlanarGraph<Scalar> g = in.to_graph<Scalar>();
  Normalized<Scalar> norm = normalize(g);
  json j;
  const int n = norm.graph.num_vertices();
  j["n"] = n;
  if (n < 4) {
    j["cycle_length"] = 0;
    j["within_bounds"] = false;
    out << j.dump() << '\n';
    return 0;
  }
  PlanarGraph<Scalar> tri = triangulate(norm.graph, big_weight(norm.graph));
  SeparatorOptions opt;
  opt.seed = level_seed(f.seed, 0);
  SeparatorCycle c = cycle_separator(tri, opt);
  j["cycle_length"] = c.size();
  j["inside"] = c.inside_count;
  j["outside"] = c.outside_count;
  j["balance_limit"] = balance_limit(n);
  j["size_limit"] = size_limit(n);
  j["within_bounds"] = !c.empty() && meets_separator_bounds(c, n);
  j["cycle"] = c.vertices;
  out << j.dump() << '\n';
  return 0;
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  if (out.empty()) throw InvalidSpec("empty size list");
  return out;
}

int bench_cmd(const std::string& sizes, const RunFlags& f, int reps, std::ostream& out) {
  out << "n,mode,wall_ms,sep_min,sep_median,sep_max\n";
  for (int target : parse_sizes(sizes)) {
    int side = std::max(2, static_cast<int>(std::lround(std::sqrt(static_cast<double>(target)))));
    GenSpec spec;
    spec.shape = Shape::Grid;
    spec.rows = side;
    spec.cols = side;
    spec.safety = Safety::Screened;
    spec.seed = f.seed + static_cast<std::uint64_t>(target);
    InputGraph in = gen(spec);
    PlanarGraph<std::int64_t> g = in.to_graph<std::int64_t>();
    double best = 0;
    std::vector<int> seps;
    for (int r = 0; r < std::max(1, reps); ++r) {
      Stats stats;
      auto t0 = std::chrono::steady_clock::now();
      GirthEngine<std::int64_t>(make_config(f, &stats)).girth(g);
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      if (r == 0 || ms < best) best = ms;
      seps.clear();
      for (const auto& s : stats.separators) seps.push_back(s.size);
    }
    std::sort(seps.begin(), seps.end());
    int smin = seps.empty() ? 0 : seps.front();
    int smax = seps.empty() ? 0 : seps.back();
    int smed = seps.empty() ? 0 : seps[seps.size() / 2];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", best);
    out << g.num_vertices() << ',' << f.mssp << '+' << f.ddg << ',' << buf << ',' << smin << ',' << smed << ','
        << smax << '\n';
  }
  return 0;
}

int gen_cmd(const GenSpec& spec, const std::string& output, std::ostream& out) {
  InputGraph g = gen(spec);
  if (output.empty() || output == "-") {
    write_graph(out, g);
  } else {
    std::ofstream f(output);
    if (!f) throw FormatError("cannot write '" + output + "'");
    write_graph(f, g);
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted girth of embedded planar digraphs"};
  app.require_subcommand(1);
  RunFlags flags;

  auto* gen_c = app.add_subcommand("gen", "generate an instance");
  GenSpec spec;
  std::string shape = "grid", safety = "screened", orientation = "both", output;
  gen_c->add_option("--shape", shape, "grid, wheel or nested");
  gen_c->add_option("--rows", spec.rows);
  gen_c->add_option("--cols", spec.cols);
  gen_c->add_option("--k", spec.k, "wheel rim size");
  gen_c->add_option("--n", spec.n, "nested triangulation size");
  gen_c->add_option("--lo", spec.lo);
  gen_c->add_option("--hi", spec.hi);
  gen_c->add_option("--negative-fraction", spec.negative_fraction);
  gen_c->add_option("--safety", safety, "screened or raw");
  gen_c->add_option("--orientation", orientation, "both, random or acyclic");
  gen_c->add_option("--seed", spec.seed);
  gen_c->add_option("-o,--output", output);

  std::string file;
  auto* girth_c = app.add_subcommand("girth", "compute the girth");
  girth_c->add_option("file", file)->required();
  add_run_flags(girth_c, flags);

  auto* cycle_c = app.add_subcommand("cycle", "print a shortest cycle");
  cycle_c->add_option("file", file)->required();
  add_run_flags(cycle_c, flags);

  std::string witness;
  bool separator = false;
  auto* verify_c = app.add_subcommand("verify", "check a witness or a separator");
  verify_c->add_option("file", file)->required();
  verify_c->add_option("witness", witness);
  verify_c->add_flag("--separator", separator, "check the top-level separator instead");
  add_run_flags(verify_c, flags);

  std::string sizes = "1000,2000,4000,8000,16000";
  int reps = 1;
  auto* bench_c = app.add_subcommand("bench", "time the engine on a grid ladder");
  bench_c->add_option("--sizes", sizes, "comma separated vertex counts");
  bench_c->add_option("--reps", reps, "repetitions per size (best is reported)");
  add_run_flags(bench_c, flags);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  try {
    if (gen_c->parsed()) {
      spec.shape = parse_shape(shape);
      spec.safety = parse_safety(safety);
      spec.orientation = parse_orientation(orientation);
      return gen_cmd(spec, output, out);
    }
    if (bench_c->parsed()) return bench_cmd(sizes, flags, reps, out);
    InputGraph in = read_graph_file(file);
    if (girth_c->parsed())
      return in.integral ? girth_cmd<std::int64_t>(in, flags, out) : girth_cmd<double>(in, flags, out);
    if (cycle_c->parsed())
      return in.integral ? cycle_cmd<std::int64_t>(in, flags, out) : cycle_cmd<double>(in, flags, out);
    if (verify_c->parsed()) {
      if (separator)
        return in.integral ? separator_cmd<std::int64_t>(in, flags, out) : separator_cmd<double>(in, flags, out);
      if (witness.empty()) {
        err << "verify: a witness file is required\n";
        return 1;
      }
      return in.integral ? verify_cmd<std::int64_t>(in, witness, flags, out, err)
                         : verify_cmd<double>(in, witness, flags, out, err);
    }
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const DanglingReference& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const EmbeddingInvalid& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidSpec& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const CapExceeded& e) {
    err << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace pgirth::cli
