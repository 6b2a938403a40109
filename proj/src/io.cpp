#include "pgirth/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pgirth {

namespace {

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

long long parse_int(const std::string& tok, int line, const char* what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw FormatError(where(line) + "bad " + what + " '" + tok + "'");
  return v;
}

bool is_integer_token(const std::string& tok) {
  std::size_t i = (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (tok[i] < '0' || tok[i] > '9') return false;
  return true;
}

}  // namespace

InputGraph parse_graph(std::istream& in) {
  InputGraph g;
  bool have_header = false;
  std::vector<char> arc_seen;
  std::vector<char> rot_seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "p") {
      if (have_header) throw FormatError(where(line) + "duplicate header");
      std::string a, b;
      if (!(ls >> a >> b)) throw FormatError(where(line) + "header needs vertex and arc counts");
      long long n = parse_int(a, line, "vertex count");
      long long m = parse_int(b, line, "arc count");
      if (n < 0 || m < 0 || n > (1 << 28) || m > (1 << 28))
        throw FormatError(where(line) + "counts out of range");
      g.num_vertices = static_cast<int>(n);
      g.arcs.assign(m, InputArc{});
      g.rotations.assign(n, {});
      arc_seen.assign(m, 0);
      rot_seen.assign(n, 0);
      have_header = true;
    } else if (tag == "a") {
      if (!have_header) throw FormatError(where(line) + "arc before header");
      std::string id, t, h, w;
      if (!(ls >> id >> t >> h >> w)) throw FormatError(where(line) + "arc needs id, tail, head, weight");
      long long a = parse_int(id, line, "arc id");
      if (a < 0 || a >= static_cast<long long>(g.arcs.size()))
        throw DanglingReference(where(line) + "arc id " + id + " out of range");
      if (arc_seen[a]) throw FormatError(where(line) + "duplicate arc id " + id);
      arc_seen[a] = 1;
      InputArc& arc = g.arcs[a];
      long long tv = parse_int(t, line, "tail");
      long long hv = parse_int(h, line, "head");
      if (tv < 0 || tv >= g.num_vertices || hv < 0 || hv >= g.num_vertices)
        throw DanglingReference(where(line) + "arc endpoint out of range");
      arc.tail = static_cast<VertexId>(tv);
      arc.head = static_cast<VertexId>(hv);
      if (is_integer_token(w)) {
        arc.int_weight = parse_int(w[0] == '+' ? w.substr(1) : w, line, "weight");
        arc.real_weight = static_cast<double>(arc.int_weight);
      } else {
        double x = 0;
        std::size_t skip = (w[0] == '+') ? 1 : 0;
        auto [p, ec] = std::from_chars(w.data() + skip, w.data() + w.size(), x);
        if (ec != std::errc() || p != w.data() + w.size() || !std::isfinite(x))
          throw FormatError(where(line) + "bad weight '" + w + "'");
        arc.real_weight = x;
        g.integral = false;
      }
    } else if (tag == "r") {
      if (!have_header) throw FormatError(where(line) + "rotation before header");
      std::string vs;
      if (!(ls >> vs)) throw FormatError(where(line) + "rotation needs a vertex");
      long long v = parse_int(vs, line, "vertex");
      if (v < 0 || v >= g.num_vertices) throw DanglingReference(where(line) + "vertex out of range");
      if (rot_seen[v]) throw FormatError(where(line) + "duplicate rotation for vertex " + vs);
      rot_seen[v] = 1;
      std::string ep;
      while (ls >> ep) {
        auto colon = ep.find(':');
        if (colon == std::string::npos || colon + 2 != ep.size() ||
            (ep[colon + 1] != 't' && ep[colon + 1] != 'h'))
          throw FormatError(where(line) + "bad arc endpoint '" + ep + "'");
        long long a = parse_int(ep.substr(0, colon), line, "arc id");
        if (a < 0 || a >= static_cast<long long>(g.arcs.size()))
          throw DanglingReference(where(line) + "endpoint references unknown arc " + ep);
        g.rotations[v].push_back({static_cast<ArcId>(a), ep[colon + 1] == 'h'});
      }
    } else {
      throw FormatError(where(line) + "unknown record '" + tag + "'");
    }
  }
  if (!have_header) throw FormatError("missing 'p' header");
  for (std::size_t a = 0; a < arc_seen.size(); ++a)
    if (!arc_seen[a]) throw FormatError("arc " + std::to_string(a) + " declared by header but missing");
  for (int v = 0; v < g.num_vertices; ++v) {
    for (const Endpoint& ep : g.rotations[v]) {
      const InputArc& a = g.arcs[ep.arc];
      VertexId at = ep.at_head ? a.head : a.tail;
      if (at != v)
        throw EmbeddingInvalid("endpoint " + std::to_string(ep.arc) + (ep.at_head ? ":h" : ":t") +
                               " listed at vertex " + std::to_string(v));
    }
  }
  return g;
}

InputGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

InputGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_graph(in);
}

std::string format_weight(std::int64_t w) { return std::to_string(w); }

std::string format_weight(double w) {
  if (std::isfinite(w) && w == std::floor(w) && std::abs(w) < 1e15)
    return std::to_string(static_cast<long long>(w));
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, p);
}

void write_graph(std::ostream& out, const InputGraph& g) {
  out << "p " << g.num_vertices << ' ' << g.arcs.size() << '\n';
  for (std::size_t a = 0; a < g.arcs.size(); ++a) {
    const InputArc& arc = g.arcs[a];
    out << "a " << a << ' ' << arc.tail << ' ' << arc.head << ' '
        << (g.integral ? format_weight(arc.int_weight) : format_weight(arc.real_weight)) << '\n';
  }
  for (int v = 0; v < g.num_vertices; ++v) {
    out << "r " << v;
    for (const Endpoint& ep : g.rotations[v]) out << ' ' << ep.arc << (ep.at_head ? ":h" : ":t");
    out << '\n';
  }
}

std::string graph_to_text(const InputGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

std::vector<ArcId> parse_witness(std::istream& in) {
  std::vector<ArcId> arcs;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag != "c") continue;
    std::string id;
    if (!(ls >> id)) throw FormatError(where(line) + "witness line needs an arc id");
    arcs.push_back(static_cast<ArcId>(parse_int(id, line, "arc id")));
  }
  return arcs;
}

std::vector<ArcId> read_witness_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_witness(in);
}

}  // namespace pgirth
