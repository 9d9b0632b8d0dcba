#include "boxlab/io.hpp"

#include "boxlab/errors.hpp"
#include "boxlab/validity.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <memory>
#include <system_error>
#include <unistd.h>

namespace boxlab {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long parse_long(const std::string& text, std::size_t line, const std::string& what) {
  long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "bad " + what + " '" + text + "'");
  return v;
}

struct Header {
  std::string kind;
  Scenario scenario;
  bool reduced = false;
};

Header parse_header(const std::string& text, std::size_t line) {
  const auto tokens = split_ws(text);
  if (tokens.size() < 3 || tokens[0] != "#boxlab" || tokens[1] != "v1")
    throw ParseError(line, "expected header '#boxlab v1 <kind> N=.. nI=.. nO=..'");
  Header h;
  h.kind = tokens[2];
  long n = -1, ni = -1, no = -1;
  for (std::size_t i = 3; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "bad header field '" + tokens[i] + "'");
    const std::string key = tokens[i].substr(0, eq);
    const std::string value = tokens[i].substr(eq + 1);
    if (key == "N") n = parse_long(value, line, "party count");
    else if (key == "nI") ni = parse_long(value, line, "input count");
    else if (key == "nO") no = parse_long(value, line, "output count");
    else if (key == "reduced") h.reduced = parse_long(value, line, "reduced flag") != 0;
    else throw ParseError(line, "unknown header field '" + key + "'");
  }
  if (n < 0 || ni < 0 || no < 0) throw ParseError(line, "header must give N, nI and nO");
  try {
    h.scenario = Scenario(static_cast<int>(n), static_cast<int>(ni), static_cast<int>(no));
  } catch (const DomainError& e) {
    throw ParseError(line, e.what());
  }
  return h;
}

struct Record {
  long class_id = -1;
  bool wiring = false;
  bool det = false;
  bool det_given = false;
  std::uint64_t orbit = 1;
  RationalVector values;
};

Record parse_record(const std::string& text, std::size_t line, std::size_t dimension) {
  const auto tokens = split_ws(text);
  Record r;
  Rational scale = 1;
  std::size_t i = 0;
  bool have_values = false;
  for (; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + tokens[i] + "'");
    const std::string key = tokens[i].substr(0, eq);
    const std::string value = tokens[i].substr(eq + 1);
    if (key == "v") {
      have_values = true;
      if (!value.empty()) r.values.push_back(Rational());
      try {
        if (!value.empty()) r.values.back() = parse_rational(value);
        for (++i; i < tokens.size(); ++i) r.values.push_back(parse_rational(tokens[i]));
      } catch (const std::invalid_argument&) {
        throw ParseError(line, "bad rational '" + (i < tokens.size() ? tokens[i] : value) + "'");
      }
      break;
    }
    if (key == "class") r.class_id = parse_long(value, line, "class id");
    else if (key == "wiring") r.wiring = parse_long(value, line, "wiring flag") != 0;
    else if (key == "det") {
      r.det = parse_long(value, line, "det flag") != 0;
      r.det_given = true;
    } else if (key == "orbit") {
      const long o = parse_long(value, line, "orbit size");
      if (o < 1) throw ParseError(line, "orbit size must be positive");
      r.orbit = static_cast<std::uint64_t>(o);
    } else if (key == "scale") {
      try {
        scale = parse_rational(value);
      } catch (const std::invalid_argument&) {
        throw ParseError(line, "bad scale '" + value + "'");
      }
    } else {
      throw ParseError(line, "unknown field '" + key + "'");
    }
  }
  if (!have_values) throw ParseError(line, "record has no v= field");
  if (r.values.size() != dimension)
    throw ParseError(line, "expected " + std::to_string(dimension) + " values, found " + std::to_string(r.values.size()));
  if (scale != 1)
    for (auto& v : r.values) v *= scale;
  return r;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line.compare(first, 2, "##") == 0;
}

template <class OnRecord>
Header parse_file(std::istream& in, const std::string& kind, OnRecord&& on_record) {
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  Header header;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (skip_line(text)) continue;
    if (!have_header) {
      header = parse_header(text, line);
      if (header.kind != kind) throw ParseError(line, "expected a '" + kind + "' file, found '" + header.kind + "'");
      have_header = true;
      continue;
    }
    on_record(parse_record(text, line, header.scenario.dimension()), line, header.scenario);
  }
  if (!have_header) throw ParseError(line, "missing header");
  return header;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string format_values(const RationalVector& values) {
  std::string out = "v=";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += to_string(values[i]);
  }
  return out;
}

std::string header_line(const std::string& kind, const Scenario& sc, bool reduced) {
  std::string out = "#boxlab v1 " + kind + " N=" + std::to_string(sc.parties) + " nI=" + std::to_string(sc.inputs) +
                    " nO=" + std::to_string(sc.outputs);
  if (reduced) out += " reduced=1";
  return out + "\n";
}

}  // namespace

Catalog parse_catalog(std::istream& in, std::vector<std::size_t>* record_lines) {
  Catalog catalog;
  const Header header = parse_file(in, "scenario", [&](Record r, std::size_t line, const Scenario& sc) {
    CatalogEntry e;
    e.representative = SparseVector::from_dense(r.values);
    const Fingerprint f = fingerprint(sc, e.representative);
    const bool det = f.is_01_valued();
    if (r.det_given && r.det && !det) throw ParseError(line, "record marked det=1 is not {0,1}-valued on deterministic states");
    if (det) e.fingerprint = f.to_bits();
    e.deterministic = det;
    e.wiring = r.wiring;
    e.class_id = static_cast<int>(r.class_id);
    e.orbit = r.orbit;
    catalog.entries.push_back(std::move(e));
    if (record_lines) record_lines->push_back(line);
  });
  catalog.scenario = header.scenario;
  catalog.symmetry_reduced = header.reduced;
  return catalog;
}

Catalog read_catalog(const std::string& path, std::vector<std::size_t>* record_lines) {
  auto in = open_input(path);
  return parse_catalog(in, record_lines);
}

std::string format_catalog(const Catalog& catalog) {
  std::string out = header_line("scenario", catalog.scenario, catalog.symmetry_reduced);
  const std::size_t dim = catalog.scenario.dimension();
  for (const auto& e : catalog.entries) {
    out += "class=" + std::to_string(e.class_id) + " wiring=" + (e.wiring ? "1" : "0") +
           " det=" + (e.deterministic ? "1" : "0") + " orbit=" + std::to_string(e.orbit) + " " +
           format_values(e.representative.to_dense(dim)) + "\n";
  }
  return out;
}

void write_catalog(const Catalog& catalog, const std::string& path) { atomic_write(path, format_catalog(catalog)); }

std::vector<StateRep> parse_states(std::istream& in) {
  std::vector<StateRep> states;
  parse_file(in, "state", [&](Record r, std::size_t line, const Scenario& sc) {
    StateRep s(sc, std::move(r.values));
    if (!is_valid_state(s)) throw ParseError(line, "record is not a valid no-signalling state");
    states.push_back(std::move(s));
  });
  return states;
}

std::vector<StateRep> read_states(const std::string& path) {
  auto in = open_input(path);
  return parse_states(in);
}

StateRep read_state(const std::string& path) {
  auto states = read_states(path);
  if (states.size() != 1) throw ParseError(0, path + " must contain exactly one state");
  return std::move(states.front());
}

std::string format_states(const std::vector<StateRep>& states) {
  if (states.empty()) throw DomainError("no states to write");
  std::string out = header_line("state", states.front().scenario, false);
  for (const auto& s : states) out += format_values(s.coords) + "\n";
  return out;
}

std::vector<EffectRep> read_effects(const std::string& path) {
  auto in = open_input(path);
  std::vector<EffectRep> effects;
  parse_file(in, "scenario", [&](Record r, std::size_t line, const Scenario& sc) {
    EffectRep e(sc, std::move(r.values));
    if (!is_valid_effect(sc, e)) throw ParseError(line, "record is not a valid effect");
    effects.push_back(std::move(e));
  });
  return effects;
}

EffectRep read_effect(const std::string& path) {
  auto effects = read_effects(path);
  if (effects.size() != 1) throw ParseError(0, path + " must contain exactly one effect");
  return std::move(effects.front());
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot replace " + path + ": " + ec.message());
  }
}

FrVariant parse_fr_variant(const std::string& name) {
  if (name == "disjunctive") return FrVariant::Disjunctive;
  if (name == "maximal") return FrVariant::Maximal;
  if (name == "weighted") return FrVariant::Weighted;
  throw ParseError(0, "unknown FR variant '" + name + "' (disjunctive, maximal, weighted)");
}

Hypergraph export_fr_product(const IdentitySet& identities, FrVariant variant) {
  const Scenario& sc = identities.scenario;
  const std::size_t dim = sc.dimension();
  Hypergraph g;
  g.scenario = sc;
  for (std::size_t i = 0; i < dim; ++i) g.vertices.push_back(label_of_index(sc, i));
  const SymmetryTables* tables = nullptr;
  std::unique_ptr<SymmetryTables> owned;
  if (identities.symmetry_reduced) {
    owned = std::make_unique<SymmetryTables>(sc);
    tables = owned.get();
  }
  for (const auto& rep : identities.reps) {
    const bool keep = variant == FrVariant::Weighted || (rep.is_01 && (variant == FrVariant::Disjunctive || rep.wiring));
    if (!keep) continue;
    if (!tables) {
      g.edges.push_back(rep.coords.to_dense(dim));
    } else if (rep.is_01) {
      for (const auto& member : tables->representation_orbit(rep.coords.support(dim)))
        g.edges.push_back(SparseVector::from_bits(member).to_dense(dim));
    } else {
      throw DomainError("fractional members of a symmetry-reduced identity set cannot be expanded");
    }
  }
  return g;
}

std::string format_hypergraph(const Hypergraph& graph) {
  std::string out = "#boxlab v1 hypergraph N=" + std::to_string(graph.scenario.parties) +
                    " nI=" + std::to_string(graph.scenario.inputs) + " nO=" + std::to_string(graph.scenario.outputs) +
                    " edges=" + std::to_string(graph.edges.size()) + "\nvertices=";
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    if (i) out += ' ';
    out += graph.vertices[i];
  }
  out += "\n";
  for (const auto& e : graph.edges) out += format_values(e) + "\n";
  return out;
}

}  // namespace boxlab
