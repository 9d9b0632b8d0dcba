#include "CLI11.hpp"

#include "boxlab/enumeration.hpp"
#include "boxlab/errors.hpp"
#include "boxlab/io.hpp"
#include "boxlab/tasks.hpp"
#include "boxlab/wiring.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace boxlab;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;

// Malformed command-line values; reported like file parse errors.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ArgumentError("--" + name + ": not a rational: " + text);
  }
}

std::string format_vector(const RationalVector& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += to_string(values[i]);
  }
  return out;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) std::cout << content;
  else atomic_write(out_path, content);
}

struct ScenarioArgs {
  int parties = 0, inputs = 0, outputs = 0;
  bool classes = false;
  bool reduce = false;
  bool progress = false;
  std::string out;
};

void add_scenario_args(CLI::App* cmd, ScenarioArgs& args) {
  cmd->add_option("N", args.parties, "parties")->required();
  cmd->add_option("nI", args.inputs, "inputs per party")->required();
  cmd->add_option("nO", args.outputs, "outputs per input")->required();
  cmd->add_flag("--classes", args.classes, "group results into relabelling classes");
  cmd->add_flag("--symmetry-reduce", args.reduce, "keep one member per class");
  cmd->add_option("--out", args.out, "write the catalog to this file");
  cmd->add_flag("--progress", args.progress, "report scan progress on stderr");
}

EnumerationOptions enumeration_options(const ScenarioArgs& args) {
  EnumerationOptions opts;
  opts.symmetry_reduce = args.reduce;
  opts.classes = args.classes || args.reduce;
  opts.progress = args.progress;
  return opts;
}

std::string counts_line(const ClassSummary& s, bool with_classes) {
  if (with_classes) return summary_line(s);
  return "total=" + std::to_string(s.total) + " wirings=" + std::to_string(s.wirings) +
         " nonwirings=" + std::to_string(s.nonwirings);
}

void run_identities(const ScenarioArgs& args) {
  const Scenario sc(args.parties, args.inputs, args.outputs);
  const IdentitySet ids = enumerate_identity_reps_01(sc, enumeration_options(args));
  std::cout << counts_line(class_summary(ids), args.classes) << '\n';
  if (!args.out.empty()) write_catalog(identity_catalog(ids), args.out);
}

void run_effects(const ScenarioArgs& args, bool table) {
  const Scenario sc(args.parties, args.inputs, args.outputs);
  ClassSummary summary;
  if (args.out.empty()) {
    summary = effect_class_summary_01(sc, enumeration_options(args));
  } else {
    const Catalog catalog = enumerate_effects_01(sc, enumeration_options(args));
    write_catalog(catalog, args.out);
    summary = class_summary(catalog);
  }
  std::cout << counts_line(summary, args.classes || args.reduce) << '\n';
  if (table)
    for (const auto& row : summary.classes)
      std::cout << "class=" << row.class_id << " wiring=" << row.wiring << " det=" << row.deterministic
                << " orbit=" << row.orbit << " v=" << format_vector(row.representative.to_dense(sc.dimension()))
                << '\n';
}

void run_classify(const std::string& in, const std::string& out) {
  const Catalog classified = classify_catalog(read_catalog(in));
  if (out.empty()) {
    std::cout << format_catalog(classified);
    return;
  }
  write_catalog(classified, out);
  std::cout << summary_line(class_summary(classified)) << '\n';
}

void run_subeffects(const std::string& identity, const std::string& known, bool no_filter,
                    const std::string& out) {
  const EffectRep rep = read_effect(identity);
  const Catalog catalog = read_catalog(known);
  SubEffectOptions opts;
  opts.mutual_filter = !no_filter;
  const auto survivors = sub_effects(rep, catalog, opts);
  Catalog result;
  result.scenario = rep.scenario;
  std::size_t det = 0;
  for (const auto& s : survivors) {
    CatalogEntry entry;
    entry.representative = s.rep;
    entry.deterministic = s.deterministic;
    det += s.deterministic;
    result.entries.push_back(entry);
  }
  std::cout << "survivors=" << survivors.size() << " det=" << det << " nondet=" << survivors.size() - det
            << '\n';
  if (!out.empty()) write_catalog(result, out);
  else
    for (const auto& s : survivors)
      std::cout << "det=" << s.deterministic << " label=" << s.label
                << " v=" << format_vector(s.rep.to_dense(rep.scenario.dimension())) << '\n';
}

void run_discriminate(const std::string& s1_path, const std::string& s2_path, const std::string& catalog_path,
                      bool wirings_only) {
  const StateRep s1 = read_state(s1_path);
  const StateRep s2 = read_state(s2_path);
  const Catalog catalog = read_catalog(catalog_path);
  const DistanceResult d = boxworld_distance(s1, s2, catalog, wirings_only);
  const Rational guessing = (1 + d.distance) / 2;
  std::cout << "distance=" << to_string(d.distance) << " guessing=" << to_string(guessing) << '\n';
  std::cout << "witness=" << format_vector(d.witness.to_dense(s1.scenario.dimension())) << '\n';
}

void run_advantage(const std::string& effect_path, const std::string& catalog_path, const std::string& mu_text,
                   bool search) {
  const EffectRep e = read_effect(effect_path);
  const Catalog catalog = read_catalog(catalog_path);
  std::optional<Rational> mu = Rational(1);
  if (search) mu.reset();
  else if (!mu_text.empty()) mu = rational_arg("mu", mu_text);
  const AdvantageResult r = advantage_lp(e, catalog, mu);
  if (!r.feasible) {
    std::cout << "feasible=0\n";
    return;
  }
  std::cout << "feasible=1 mu=" << to_string(r.mu) << " nu=" << to_string(r.nu)
            << " advantage=" << to_string(Rational(r.mu - r.nu)) << '\n';
  std::cout << "s1=" << format_vector(r.s1.coords) << '\n';
  std::cout << "s2=" << format_vector(r.s2.coords) << '\n';
}

void run_nlwe() {
  const NlweFixture f = nlwe_fixture();
  const Rational perfect = guessing_probability(f.ensemble, f.measurement);
  const WiringGuess best = max_guessing_wirings(f.ensemble);
  std::cout << "perfect=" << to_string(perfect) << " wiring_max=" << to_string(best.value) << '\n';
}

struct DistillArgs {
  std::string section = "I";
  std::string eta = "0", omega = "0";
  bool search = false;
  std::string candidates;
  int grid = 0;
  std::string csv;
  bool as_float = false;
};

void run_distill(const DistillArgs& args) {
  const CrossSection section = parse_cross_section(args.section);
  if (args.grid > 0) {
    emit(format_grid_csv(distillation_grid(section, args.grid), args.as_float), args.csv);
    return;
  }
  const CrossSectionPoint point{section, rational_arg("eta", args.eta), rational_arg("omega", args.omega)};
  const StateRep base = cross_section_state(point);
  const DistillResult r = distill(reference_protocol(), base);
  std::cout << "chsh_i=" << format_rational(chsh(base), args.as_float)
            << " chsh_f=" << format_rational(r.chsh, args.as_float) << '\n';
  if (!args.search) return;
  Catalog candidates;
  if (!args.candidates.empty()) {
    candidates = read_catalog(args.candidates);
  } else {
    const auto reference = reference_protocol();
    candidates.scenario = reference.alice[0].scenario;
    for (const EffectRep* e : {&reference.alice[0], &reference.alice[1]}) {
      CatalogEntry entry;
      entry.representative = SparseVector::from_dense(e->coords);
      candidates.entries.push_back(entry);
    }
  }
  const SearchResult best = distillation_search(base, candidates.scenario.parties, alice_pairs(candidates));
  std::cout << "search_chsh=" << format_rational(best.chsh, args.as_float) << " pairs=" << best.pairs_scanned
            << " best_pair=" << best.pair_index << '\n';
  for (int x = 0; x < 2; ++x)
    std::cout << "alice" << x << '=' << format_vector(best.protocol.alice[x].coords) << '\n';
  for (int y = 0; y < 2; ++y)
    std::cout << "bob" << y << '=' << format_vector(best.protocol.bob[y].coords) << '\n';
}

void run_fr_export(const std::string& in, const std::string& variant, const std::string& out) {
  FrVariant v;
  try {
    v = parse_fr_variant(variant);
  } catch (const ParseError&) {
    throw ArgumentError("--variant: expected disjunctive, maximal or weighted");
  }
  emit(format_hypergraph(export_fr_product(ingest_identity_vertices(in), v)), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact enumeration and classification of boxworld measurements"};
  app.require_subcommand(1);

  ScenarioArgs id_args;
  auto* identities = app.add_subcommand("identities", "enumerate {0,1} identity representations");
  add_scenario_args(identities, id_args);

  ScenarioArgs eff_args;
  bool table = false;
  auto* effects = app.add_subcommand("effects", "enumerate {0,1} effects");
  add_scenario_args(effects, eff_args);
  effects->add_flag("--table", table, "print one row per class");

  std::string classify_in, classify_out;
  auto* classify = app.add_subcommand("classify", "recompute wiring flags of a catalog");
  classify->add_option("--in", classify_in, "catalog file")->required();
  classify->add_option("--out", classify_out, "write the classified catalog here");

  std::string sub_identity, sub_known, sub_out;
  bool no_filter = false;
  auto* subeffects = app.add_subcommand("subeffects", "candidate extremal effects below an identity representation");
  subeffects->add_option("--identity", sub_identity, "identity representation file")->required();
  subeffects->add_option("--known", sub_known, "catalog of known effects")->required();
  subeffects->add_flag("--no-mutual-filter", no_filter, "do not filter survivors against each other");
  subeffects->add_option("--out", sub_out, "write survivors as a catalog");

  std::string s1, s2, disc_catalog;
  bool wirings_only = false;
  auto* discriminate = app.add_subcommand("discriminate", "distinguish two states");
  discriminate->add_option("--s1", s1, "first state file")->required();
  discriminate->add_option("--s2", s2, "second state file")->required();
  discriminate->add_option("--catalog", disc_catalog, "effect catalog")->required();
  discriminate->add_flag("--wirings-only", wirings_only, "restrict to wiring effects");

  std::string adv_effect, adv_catalog, adv_mu;
  bool adv_search = false;
  auto* advantage = app.add_subcommand("advantage", "separation of an effect over the wiring effects");
  advantage->add_option("--effect", adv_effect, "effect file")->required();
  advantage->add_option("--catalog", adv_catalog, "catalog holding the wiring effects")->required();
  auto* mu_opt = advantage->add_option("--mu", adv_mu, "fixed separation p/q (default 1)");
  advantage->add_flag("--search", adv_search, "maximize the advantage over the separation")->excludes(mu_opt);

  auto* nlwe = app.add_subcommand("nlwe", "product-state ensemble guessing probabilities");

  DistillArgs dist;
  auto* distill_cmd = app.add_subcommand("distill", "nonlocality distillation on the CHSH cross-sections");
  distill_cmd->add_option("--section", dist.section, "I or III")->required();
  distill_cmd->add_option("--eta", dist.eta, "mixing weight p/q");
  distill_cmd->add_option("--omega", dist.omega, "mixing weight p/q");
  distill_cmd->add_flag("--search", dist.search, "optimize Bob's effects over candidate Alice pairs");
  distill_cmd->add_option("--candidates", dist.candidates, "catalog of Alice candidate effects");
  distill_cmd->add_option("--grid", dist.grid, "evaluate the reference protocol on a grid with this many steps")
      ->check(CLI::PositiveNumber);
  distill_cmd->add_option("--csv", dist.csv, "write the grid CSV to this file");
  distill_cmd->add_flag("--float", dist.as_float, "print decimals instead of exact rationals");

  std::string fr_in, fr_variant, fr_out;
  auto* fr = app.add_subcommand("fr-export", "hypergraph of identity representations");
  fr->add_option("--in", fr_in, "catalog of identity representations")->required();
  fr->add_option("--variant", fr_variant, "disjunctive, maximal or weighted")->required();
  fr->add_option("--out", fr_out, "write the hypergraph here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*identities) run_identities(id_args);
    else if (*effects) run_effects(eff_args, table);
    else if (*classify) run_classify(classify_in, classify_out);
    else if (*subeffects) run_subeffects(sub_identity, sub_known, no_filter, sub_out);
    else if (*discriminate) run_discriminate(s1, s2, disc_catalog, wirings_only);
    else if (*advantage) run_advantage(adv_effect, adv_catalog, adv_mu, adv_search);
    else if (*nlwe) run_nlwe();
    else if (*distill_cmd) run_distill(dist);
    else if (*fr) run_fr_export(fr_in, fr_variant, fr_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ArgumentError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
