#include "ncg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "ncg/afcore.hpp"
#include "ncg/contfrac.hpp"
#include "ncg/exactnum.hpp"
#include "ncg/functors.hpp"
#include "ncg/intmat.hpp"
#include "ncg/invariants.hpp"

#ifndef NCG_SAMPLE_CSV
#define NCG_SAMPLE_CSV "data/sample_cm_curves.csv"
#endif

namespace ncg::cli {

using nlohmann::json;

int exit_code(Status s) {
  switch (s) {
    case Status::ok: return 0;
    case Status::invalid_input: return 2;
    case Status::undecided: return 3;
  }
  return 2;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::invalid_input: return "invalid_input";
    case Status::undecided: return "undecided";
  }
  return "?";
}

std::string render(const CommandResult& r) {
  if (r.json_output) return r.payload.dump(2) + "\n";
  return r.human_text;
}

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  return std::string(s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1));
}

std::string join(const std::vector<Int>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i].get_str();
  return out;
}

Group parse_group(const std::string& s) { return s == "SL" ? Group::SL : Group::GL; }
Convention parse_convention(const std::string& s) { return s == "paper" ? Convention::paper : Convention::standard; }

// A surd given either as an expression or as continued-fraction text.
QuadSurd read_irrational(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') return cf_value(parse_cf(t));
  Number v = parse_number(t);
  if (is_rational(v)) throw InputError("expected a quadratic irrational, got rational " + to_string(v));
  return as_surd(v);
}

bool looks_like_matrix(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') return false;
  return t.find(',') != std::string::npos || t.find(';') != std::string::npos;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json witness_json(const std::optional<BlockWitness>& w) {
  if (!w) return nullptr;
  json down = json::array(), up = json::array();
  for (const auto& m : w->down) down.push_back(to_string(m));
  for (const auto& m : w->up) up.push_back(to_string(m));
  return {{"start1", w->start1}, {"start2", w->start2}, {"length", w->length}, {"lag1", w->lag1},
          {"lag2", w->lag2},     {"down", down},         {"up", up}};
}

std::string witness_text(const BlockWitness& w) {
  std::ostringstream out;
  out << "common block of length " << w.length << ": levels " << w.start1 << "+" << w.lag1 << "k against "
      << w.start2 << "+" << w.lag2 << "k\n";
  for (std::size_t k = 0; k < w.down.size(); ++k) {
    out << "  down[" << k << "] = " << to_string(w.down[k]) << "\n";
    if (k < w.up.size()) out << "  up[" << k << "]   = " << to_string(w.up[k]) << "\n";
  }
  return out.str();
}

json cf_json(const CFExpansion& e) {
  return {{"text", to_string(e)},
          {"preperiod", json_int_list(e.preperiod)},
          {"period", json_int_list(e.period)},
          {"period_length", e.period.size()}};
}

json diagram_json(const BratteliDiagram& d) {
  return {{"levels", d.levels()}, {"depth", d.depth()}, {"text", serialize(d)}};
}

std::string triple_text(const HandelmanTriple& t) {
  std::ostringstream out;
  out << "field_disc     " << t.field_disc.get_str() << "\n"
      << "conductor      " << t.order.conductor.get_str() << "\n"
      << "cycle          (" << join(t.cls.cycle, ",") << ")\n"
      << "sl_refinement  (" << join(t.cls.sl_cycle, ",") << ")\n";
  return out.str();
}

// ---------------------------------------------------------------- commands

CommandResult cmd_invariant(const std::string& matrix) {
  Mat2Z m = parse_mat2(matrix);
  if (!is_anosov(m)) throw InputError("not an Anosov matrix: " + to_string(m));
  HandelmanTriple t = handelman_triple(m);
  QuadSurd theta = module_from_matrix(m);
  QuadSurd lambda = perron_eigenvalue(m);
  CommandResult r;
  r.payload = to_json(t);
  r.payload["matrix"] = to_string(m);
  r.payload["eigenvalue"] = to_string(lambda);
  r.payload["theta"] = to_string(theta);
  r.payload["discriminant"] = json_int(t.order.discriminant());
  r.human_text = "matrix         " + to_string(m) + "\neigenvalue     " + to_string(lambda) + "\ntheta          " +
                 to_string(theta) + "\n" + triple_text(t);
  return r;
}

CommandResult cmd_stable_iso(const std::string& a, const std::string& b, Group group,
                             std::optional<std::size_t> block_depth) {
  bool ma = looks_like_matrix(a), mb = looks_like_matrix(b);
  if (ma != mb) throw InputError("stable-iso needs two matrices or two surds, not one of each");
  CommandResult r;
  json evidence = {{"left_triple", nullptr}, {"right_triple", nullptr}, {"left_cf", nullptr}, {"right_cf", nullptr}};
  bool gl = false, sl = false;
  std::string text;
  std::optional<BratteliDiagram> d1, d2;
  if (ma) {
    Mat2Z m = parse_mat2(a), n = parse_mat2(b);
    HandelmanTriple tm = handelman_triple(m), tn = handelman_triple(n);
    gl = tm.same_class(tn);
    sl = tm.same_sl_class(tn);
    evidence["left_triple"] = to_json(tm);
    evidence["right_triple"] = to_json(tn);
    text = "left\n" + triple_text(tm) + "right\n" + triple_text(tn);
    if (block_depth) {
      d1 = stationary_diagram(m, 2);
      d2 = stationary_diagram(n, 2);
    }
  } else {
    QuadSurd x = read_irrational(a), y = read_irrational(b);
    EffrosShenVerdict v = stable_isomorphic_effros_shen(x, y);
    gl = v.gl;
    sl = v.sl;
    CFExpansion ex = cf_expand(x), ey = cf_expand(y);
    evidence["left_cf"] = to_string(ex);
    evidence["right_cf"] = to_string(ey);
    text = "left   " + to_string(x) + " = " + to_string(ex) + "\nright  " + to_string(y) + " = " + to_string(ey) + "\n";
    if (block_depth) {
      // Effros-Shen diagrams need a0 >= 0; shifting by an integer keeps the tail.
      auto shifted = [](CFExpansion e) {
        if (!e.preperiod.empty() && e.preperiod[0] < 0) e.preperiod[0] = 0;
        return e;
      };
      d1 = effros_shen_diagram(shifted(ex), 2);
      d2 = effros_shen_diagram(shifted(ey), 2);
    }
  }
  bool verdict = group == Group::SL ? sl : gl;
  json block = {{"requested", block_depth.has_value()},
                {"depth", block_depth ? json(*block_depth) : json(nullptr)},
                {"found", nullptr},
                {"witness", nullptr}};
  r.status = Status::ok;
  if (block_depth) {
    std::optional<BlockWitness> w = common_block_search(*d1, *d2, *block_depth);
    block["found"] = w.has_value();
    block["witness"] = witness_json(w);
    if (w) {
      text += witness_text(*w);
    } else if (verdict) {
      r.status = Status::undecided;
      text += "no common block found within the search bounds: undecided\n";
    } else {
      text += "no common block found\n";
    }
  }
  r.payload = {{"kind", ma ? "matrix" : "surd"}, {"group", to_string(group)}, {"stable_isomorphic", verdict},
               {"gl", gl},                        {"sl", sl},                   {"evidence", evidence},
               {"common_block", block}};
  r.human_text = text + "stable isomorphic (" + to_string(group) + "): " + (verdict ? "yes" : "no") + "\n";
  return r;
}

CommandResult cmd_cf(const std::string& input) {
  std::string t = trim(input);
  QuadSurd x = read_irrational(t);
  CFExpansion e = cf_expand(x);
  MinPoly mp = minimal_polynomial(x);
  CommandResult r;
  r.payload = {{"value", to_string(x)},
               {"cf", cf_json(e)},
               {"minimal_polynomial", {json_int(mp.a), json_int(mp.b), json_int(mp.c)}},
               {"discriminant", json_int(mp.discriminant())}};
  r.human_text = to_string(e) + "\nvalue          " + to_string(x) + "\nperiod length  " +
                 std::to_string(e.period.size()) + "\n";
  return r;
}

CommandResult cmd_conjugate(const std::string& a, const std::string& b, Group group) {
  Mat2Z m = parse_mat2(a), n = parse_mat2(b);
  CommandResult r;
  if (!is_anosov(m) || !is_anosov(n)) {
    // parabolic and elliptic monodromies: bounded exhaustive search
    if (!is_unimodular(m) || !is_unimodular(n)) throw InputError("conjugate needs matrices with determinant +-1");
    if (group == Group::SL) throw InputError("SL conjugacy is decided only for Anosov matrices");
    std::optional<Mat2Z> t;
    if (m.trace() == n.trace() && m.det() == n.det()) t = brute_force_conjugator(m, n, kTorusBundleSearchBound);
    r.payload = {{"group", to_string(group)},
                 {"method", "search"},
                 {"conjugate", t.has_value()},
                 {"conjugator", t ? json(to_string(*t)) : json(nullptr)}};
    r.human_text = std::string("conjugate (GL, search bound ") + std::to_string(kTorusBundleSearchBound) +
                   "): " + (t ? "yes\nconjugator     " + to_string(*t) : std::string("no")) + "\n";
    return r;
  }
  ConjugacyResult c = decide_conjugacy(m, n, group);
  r.payload = {{"group", to_string(group)},
               {"method", "exact"},
               {"conjugate", c.conjugate},
               {"conjugator", c.conjugator ? json(to_string(*c.conjugator)) : json(nullptr)}};
  r.human_text = "conjugate (" + to_string(group) + "): " + (c.conjugate ? "yes" : "no") + "\n";
  if (c.conjugator) r.human_text += "conjugator     " + to_string(*c.conjugator) + "\n";
  return r;
}

CommandResult cmd_es_diagram(const std::string& input, std::size_t depth) {
  QuadSurd x = read_irrational(input);
  CFExpansion e = cf_expand(x);
  BratteliDiagram d = effros_shen_diagram(e, depth);
  CommandResult r;
  r.payload = {{"value", to_string(x)}, {"cf", to_string(e)}, {"diagram", diagram_json(d)}};
  r.human_text = serialize(d);
  return r;
}

CommandResult cmd_diagram(const std::optional<std::string>& matrix, const std::optional<std::string>& input,
                          std::size_t depth, const std::vector<std::size_t>& grouping) {
  if (matrix.has_value() == input.has_value()) throw InputError("diagram needs exactly one of MATRIX or --input");
  std::optional<BratteliDiagram> d;
  if (matrix) {
    d = anosov_functor(parse_mat2(*matrix), depth);
  } else {
    d = parse_diagram(read_file(*input));
  }
  if (!grouping.empty()) d = telescope(*d, grouping);
  CommandResult r;
  r.payload = {{"diagram", diagram_json(*d)}};
  r.human_text = serialize(*d);
  return r;
}

CommandResult cmd_ck_k0(const std::string& matrix, bool transpose) {
  AbelianGroupInvariant g = ck_k0(parse_matrix(matrix), transpose);
  CommandResult r;
  r.payload = {{"convention", transpose ? "I-A^T" : "I-A"},
               {"torsion", json_int_list(g.torsion)},
               {"free_rank", g.free_rank},
               {"group", to_string(g)}};
  r.human_text = "K0 = " + to_string(g) + "\n";
  return r;
}

CommandResult cmd_uhf(const std::vector<std::string>& factors, bool repeat) {
  std::vector<Int> fs;
  for (const auto& f : factors) {
    std::string t = trim(f);
    bool ok = !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
    if (!ok) throw InputError("UHF multiplicity must be a positive integer, got '" + f + "'");
    fs.emplace_back(t);
  }
  SupernaturalNumber s = uhf_supernatural(fs, repeat);
  json ex = json::array();
  for (const auto& [p, e] : s.exponents) {
    ex.push_back({{"prime", json_int(p)}, {"exponent", e ? json(*e) : json(nullptr)}, {"infinite", !e.has_value()}});
  }
  CommandResult r;
  r.payload = {{"supernatural", to_string(s)}, {"exponents", ex}, {"repeat", repeat}};
  r.human_text = to_string(s) + "\n";
  return r;
}

CommandResult cmd_cm_check(const std::string& path, MirrorRule rule) {
  ConjectureReport rep = conjecture_check(parse_cm_csv(read_file(path)), rule);
  auto rate = rep.agreement();
  CommandResult r;
  r.payload = {{"rule", to_string(rule)},
               {"records", to_json(rep)},
               {"evaluated", rep.evaluated},
               {"matches", rep.matches},
               {"agreement", rate ? json(*rate) : json(nullptr)}};
  r.human_text = to_table(rep);
  return r;
}

CommandResult cmd_moebius(const std::string& matrix, const std::string& value, Convention conv, Group group) {
  Mat2Z g = parse_mat2(matrix);
  QuadSurd x = read_irrational(value);
  QuadSurd y = moebius_apply(g, x, conv);
  EffrosShenVerdict v = stable_isomorphic_effros_shen(x, y);
  bool verdict = group == Group::SL ? v.sl : v.gl;
  CommandResult r;
  r.payload = {{"convention", to_string(conv)}, {"group", to_string(group)},
               {"image", to_string(y)},         {"cf", to_string(cf_expand(y))},
               {"equivalent", verdict},         {"gl", v.gl},
               {"sl", v.sl}};
  r.human_text = to_string(y) + "\ncf             " + to_string(cf_expand(y)) + "\nequivalent (" + to_string(group) +
                 ")  " + (verdict ? "yes" : "no") + "\n";
  return r;
}

}  // namespace

CommandResult run(const std::vector<std::string>& args) {
  CLI::App app{"Exact invariants of Anosov maps, tori and AF-algebras", "ncg"};
  app.fallthrough();
  app.require_subcommand(1);
  bool json_flag = false;
  app.add_flag("--json", json_flag, "machine-readable output");

  std::function<CommandResult()> action;
  std::string command;
  std::string a, b, group_text = "GL", convention_text = "standard", rule_text = "real_mirror";
  std::size_t depth = 0;
  std::optional<std::size_t> block_depth;
  std::optional<std::string> matrix_opt, input_opt;
  std::vector<std::size_t> grouping;
  std::vector<std::string> factors;
  bool repeat = false, no_transpose = false;
  std::string csv_path = NCG_SAMPLE_CSV;

  auto add_group = [&](CLI::App* s) {
    s->add_option("--group", group_text, "equivalence flavor")->check(CLI::IsMember({"GL", "SL"}))->capture_default_str();
  };

  auto* inv = app.add_subcommand("invariant", "Handelman triple of an Anosov matrix \"a,b;c,d\"");
  inv->add_option("matrix", a)->required();
  inv->callback([&] { action = [&] { return cmd_invariant(a); }; });

  auto* si = app.add_subcommand("stable-iso", "stable isomorphism of two stationary or Effros-Shen algebras");
  si->add_option("left", a)->required();
  si->add_option("right", b)->required();
  si->add_option("--common-block", block_depth, "also search a common block of this length");
  add_group(si);
  si->callback([&] { action = [&] { return cmd_stable_iso(a, b, parse_group(group_text), block_depth); }; });

  auto* cf = app.add_subcommand("cf", "continued fraction of a quadratic irrational or of CF text");
  cf->add_option("value", a)->required();
  cf->callback([&] { action = [&] { return cmd_cf(a); }; });

  auto* cj = app.add_subcommand("conjugate", "GL(2,Z) or SL(2,Z) conjugacy of two matrices");
  cj->add_option("left", a)->required();
  cj->add_option("right", b)->required();
  add_group(cj);
  cj->callback([&] { action = [&] { return cmd_conjugate(a, b, parse_group(group_text)); }; });

  auto* es = app.add_subcommand("es-diagram", "Effros-Shen diagram of a quadratic irrational");
  es->add_option("value", a)->required();
  depth = 0;
  es->add_option("--depth", depth, "number of incidences (default 8)");
  es->callback([&] { action = [&] { return cmd_es_diagram(a, depth ? depth : 8); }; });

  auto* dg = app.add_subcommand("diagram", "stationary diagram of a matrix, or a parsed diagram file");
  dg->add_option("matrix", matrix_opt);
  dg->add_option("--input", input_opt, "diagram file, '-' for stdin");
  dg->add_option("--depth", depth, "number of incidences (default 6)");
  dg->add_option("--telescope", grouping, "group sizes, e.g. 1,2,2")->delimiter(',');
  dg->callback([&] { action = [&] { return cmd_diagram(matrix_opt, input_opt, depth ? depth : 6, grouping); }; });

  auto* ck = app.add_subcommand("ck-k0", "K0 of the Cuntz-Krieger algebra of a nonnegative matrix");
  ck->add_option("matrix", a)->required();
  ck->add_flag("--no-transpose", no_transpose, "use Z^n/(I-A)Z^n");
  ck->callback([&] { action = [&] { return cmd_ck_k0(a, !no_transpose); }; });

  auto* uhf = app.add_subcommand("uhf", "supernatural number of a UHF algebra");
  uhf->add_option("--factors", factors, "block multiplicities, e.g. 2,4,3")->required()->delimiter(',');
  uhf->add_flag("--repeat", repeat, "repeat the block forever");
  uhf->callback([&] { action = [&] { return cmd_uhf(factors, repeat); }; });

  auto* cm = app.add_subcommand("cm-check", "tabulate predicted r-1 against supplied CM ranks");
  cm->add_option("--input", csv_path, "CSV with header label,cm_disc,rank")->capture_default_str();
  cm->add_option("--rule", rule_text, "theta rule")->check(CLI::IsMember({"real_mirror", "abs_disc"}))->capture_default_str();
  cm->callback([&] { action = [&] { return cmd_cm_check(csv_path, parse_mirror_rule(rule_text)); }; });

  auto* mo = app.add_subcommand("moebius", "fractional-linear image of a quadratic irrational");
  mo->add_option("matrix", a)->required();
  mo->add_option("value", b)->required();
  mo->add_option("--convention", convention_text, "paper: (a+bx)/(c+dx), standard: (ax+b)/(cx+d)")
      ->check(CLI::IsMember({"paper", "standard"}))
      ->capture_default_str();
  add_group(mo);
  mo->callback([&] { action = [&] { return cmd_moebius(a, b, parse_convention(convention_text), parse_group(group_text)); }; });

  CommandResult result;
  auto fail = [&](const std::string& msg) {
    result = CommandResult{};
    result.status = Status::invalid_input;
    result.payload = {{"error", msg}};
    result.human_text = "error: " + msg + "\n";
  };
  try {
    // Only long options and -h exist, so "-sqrt(2)" or "-3,1;1,0" is a value;
    // a leading space keeps CLI11 from reading it as a short flag.
    std::vector<std::string> rev;
    for (auto it = args.rbegin(); it != args.rend(); ++it) {
      bool value = it->size() > 1 && (*it)[0] == '-' && (*it)[1] != '-' && *it != "-h";
      rev.push_back(value ? " " + *it : *it);
    }
    app.parse(rev);
    command = app.get_subcommands().front()->get_name();
    result = action();
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    result.human_text = out.str();
    result.payload = {{"help", out.str()}};
  } catch (const CLI::ParseError& e) {
    fail(e.what());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  result.json_output = json_flag;
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
  result.payload["command"] = command;
  result.payload["status"] = to_string(result.status);
  return result;
}

}  // namespace ncg::cli
