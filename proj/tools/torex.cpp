// torex: exact computations on toric Deligne-Mumford stacks given by stacky
// fans: Picard groups, line-bundle cohomology, forbidden cones, window
// collections and their verification, Koszul closure evidence, and figures
// of the quotient plane.

#include "torex/collections.hpp"
#include "torex/io.hpp"
#include "torex/svg.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <unistd.h>

namespace {

using namespace torex;

constexpr int kExitOk = 0;
constexpr int kExitReportFailure = 1;
constexpr int kExitInputError = 2;

bool use_color() {
  return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout));
}

std::string paint(const std::string& text, const char* code) {
  if (!use_color()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::string pass_str(bool ok) {
  return ok ? paint("PASS", "32") : paint("FAIL", "31");
}

struct Options {
  std::string fan_path;
  std::string class_json;
  std::string out_path;
  unsigned seed = 0;
  bool json = false;
};

void print_report(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

std::string class_str(const PicClass& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.free.size(); ++i) {
    if (i) s += ",";
    s += c.free[i].str();
  }
  s += ")";
  if (!c.torsion.empty()) {
    s += "+(";
    for (std::size_t i = 0; i < c.torsion.size(); ++i) {
      if (i) s += ",";
      s += c.torsion[i].str() + "~";
    }
    s += ")";
  }
  return s;
}

PicClass parse_class_arg(const Options& opt, const PicardGroup& pic) {
  if (opt.class_json.empty()) throw TorexError("--class is required for this command");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(opt.class_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw TorexError(std::string("--class: malformed JSON: ") + e.what());
  }
  return class_from_json(j, pic);
}

int cmd_validate(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  FanDiagnostics diag = validate(fan);
  nlohmann::json result;
  result["valid"] = diag.ok();
  result["problems"] = diag.problems;
  if (opt.json) {
    print_report(make_report("validate", fan.name, result, nlohmann::json::array()));
  } else {
    std::cout << "fan " << (fan.name.empty() ? opt.fan_path : fan.name) << ": "
              << pass_str(diag.ok()) << "\n";
    for (const auto& p : diag.problems) std::cout << "  " << p << "\n";
  }
  return diag.ok() ? kExitOk : kExitReportFailure;
}

int cmd_classify(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  FanClass cls = classify(fan);
  std::string name = cls == FanClass::Fano      ? "Fano"
                     : cls == FanClass::NefFano ? "NefFano"
                                                : "Neither";
  if (opt.json) {
    print_report(make_report("classify", fan.name, nlohmann::json{{"class", name}},
                             nlohmann::json::array()));
  } else {
    std::cout << name << "\n";
  }
  return kExitOk;
}

int cmd_picard(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  nlohmann::json result;
  result["rank"] = pic.rank();
  result["torsion"] = vec_to_json(pic.torsion());
  nlohmann::json divisors = nlohmann::json::array();
  for (std::size_t i = 0; i < pic.n(); ++i) divisors.push_back(class_to_json(pic.basis_class(i)));
  result["divisor_classes"] = divisors;
  result["canonical_class"] = class_to_json(canonical_class(pic));
  if (opt.json) {
    print_report(make_report("picard", fan.name, result, nlohmann::json::array()));
  } else {
    std::cout << "Pic = Z^" << pic.rank();
    for (const auto& t : pic.torsion()) std::cout << " + Z/" << t.str();
    std::cout << "\n";
    for (std::size_t i = 0; i < pic.n(); ++i)
      std::cout << "  E_" << i << " -> " << class_str(pic.basis_class(i)) << "\n";
    std::cout << "  K   -> " << class_str(canonical_class(pic)) << "\n";
  }
  return kExitOk;
}

int cmd_cohom(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  PicClass L = parse_class_arg(opt, pic);
  CohomologyTable t = cohomology(pic, L);
  if (opt.json) {
    print_report(make_report("cohom", fan.name,
                             nlohmann::json{{"class", class_to_json(L)},
                                            {"dims", vec_to_json(t.dims)}},
                             table_to_json(t)["contributions"]));
  } else {
    std::cout << "h(" << class_str(L) << ") = (";
    for (std::size_t p = 0; p < t.dims.size(); ++p)
      std::cout << (p ? "," : "") << t.dims[p].str();
    std::cout << ")\n";
  }
  return kExitOk;
}

int cmd_acyclic(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  PicClass L = parse_class_arg(opt, pic);
  CohomologyEngine engine(pic);
  bool acyclic = engine.is_acyclic(L);
  bool strong = engine.is_strongly_acyclic(pic.real_of(L));
  if (opt.json) {
    print_report(make_report("acyclic", fan.name,
                             nlohmann::json{{"class", class_to_json(L)},
                                            {"acyclic", acyclic},
                                            {"strongly_acyclic", strong}},
                             nlohmann::json::array()));
  } else {
    std::cout << class_str(L) << ": acyclic=" << (acyclic ? "yes" : "no")
              << " strongly_acyclic=" << (strong ? "yes" : "no") << "\n";
  }
  return kExitOk;
}

int cmd_forbidden(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  auto cones = forbidden_cones(pic);
  if (opt.json) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : cones) list.push_back(cone_to_json(c));
    print_report(make_report("forbidden", fan.name,
                             nlohmann::json{{"count", cones.size()}}, list));
  } else {
    std::cout << cones.size() << " forbidden cones\n";
    for (const auto& c : cones) {
      std::cout << "  I={";
      bool first = true;
      for (int i = 0; i < 32; ++i)
        if ((c.index_set >> i) & 1) {
          std::cout << (first ? "" : ",") << i;
          first = false;
        }
      std::cout << "} apex=(";
      for (std::size_t j = 0; j < c.apex.size(); ++j)
        std::cout << (j ? "," : "") << rat_string(c.apex[j]);
      std::cout << ")\n";
    }
  }
  return kExitOk;
}

int cmd_window(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  WindowKind kind = window_kind_for(pic);
  WindowP w = build_window(pic, kind);
  GenericShift s = generic_shift(pic, w, opt.seed);
  nlohmann::json result;
  result["kind"] = kind == WindowKind::rank1 ? "rank1" : kind == WindowKind::rank2 ? "rank2" : "delpezzo";
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& q : w.polytope.ineqs)
    facets.push_back(nlohmann::json{{"normal", vec_to_json(q.a)}, {"offset", rat_to_json(q.c)}});
  result["facets"] = facets;
  result["center"] = vec_to_json(w.center);
  result["shift"] = vec_to_json(s.p);
  if (opt.json) {
    print_report(make_report("window", fan.name, result, nlohmann::json::array()));
  } else {
    std::cout << result["kind"].get<std::string>() << " window with "
              << w.polytope.ineqs.size() << " facets, generic shift after attempt "
              << s.attempt << "\n";
  }
  return kExitOk;
}

int cmd_collection(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  ExceptionalCollection col = build_collection(fan, opt.seed);
  if (opt.json) {
    print_report(make_report("collection", fan.name, collection_to_json(col),
                             nlohmann::json::array()));
  } else {
    std::cout << col.classes.size() << " classes (expected " << col.expected.str()
              << "): count_check " << pass_str(col.count_check) << "\n";
    for (const auto& c : col.classes) std::cout << "  " << class_str(c) << "\n";
  }
  return col.count_check ? kExitOk : kExitReportFailure;
}

int cmd_verify(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  ExceptionalCollection col = build_collection(fan, opt.seed);
  VerifyReport rep = verify_strong_exceptional(pic, col.classes);
  std::vector<PicClass> ordered = rep.passed ? hom_order_from_table(col.classes, rep.h0)
                                             : col.classes;
  bool ok = rep.passed && col.count_check;
  if (opt.json) {
    nlohmann::json result;
    result["passed"] = rep.passed;
    result["count_check"] = col.count_check;
    nlohmann::json h0 = nlohmann::json::array();
    for (const auto& row : rep.h0) h0.push_back(vec_to_json(row));
    result["h0"] = h0;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& c : ordered) order.push_back(class_to_json(c));
    result["hom_order"] = order;
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : rep.violations)
      violations.push_back(nlohmann::json{{"from", v.from},
                                          {"to", v.to},
                                          {"degree", v.degree},
                                          {"dim", iodetail::int_to_json(v.dim)}});
    print_report(make_report("verify", fan.name, result, violations));
  } else {
    std::cout << "strong exceptional: " << pass_str(rep.passed) << ", count: "
              << pass_str(col.count_check) << "\n";
    for (const auto& v : rep.violations)
      std::cout << "  h^" << v.degree << "(" << class_str(col.classes[v.to]) << " - "
                << class_str(col.classes[v.from]) << ") = " << v.dim.str() << "\n";
  }
  return ok ? kExitOk : kExitReportFailure;
}

int cmd_closure(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  ExceptionalCollection col = build_collection(fan, opt.seed);
  HPolyhedron region = closure_window(pic, col.window, col.shift);
  ClosureTrace trace = closure(pic, col.classes, region);
  if (opt.json) {
    nlohmann::json result;
    result["complete"] = trace.complete;
    result["window_classes"] = trace.window_classes.size();
    result["derived"] = trace.steps.size();
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& st : trace.steps)
      steps.push_back(nlohmann::json{{"added", class_to_json(st.added)},
                                     {"move", st.move_index},
                                     {"anchor", class_to_json(st.anchor)}});
    print_report(make_report("closure", fan.name, result, steps));
  } else {
    std::cout << "closure: " << pass_str(trace.complete) << " ("
              << trace.start.size() << " start + " << trace.steps.size() << " derived of "
              << trace.window_classes.size() << " window classes)\n";
  }
  return trace.complete ? kExitOk : kExitReportFailure;
}

int cmd_figure(const Options& opt) {
  StackyFan fan = load_fan_file(opt.fan_path);
  PicardGroup pic(fan);
  ExceptionalCollection col = build_collection(fan, opt.seed);
  if (opt.out_path.empty()) throw TorexError("--out is required for figure");
  try {
    std::string svg = emit_figure(pic, col);
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw TorexError("cannot write " + opt.out_path);
    out << svg;
    std::cout << "wrote " << opt.out_path << "\n";
  } catch (const UnsupportedDimension&) {
    std::cout << "quotient plane is not two-dimensional; textual report instead:\n";
    std::cout << col.classes.size() << " classes (expected " << col.expected.str() << ")\n";
    for (const auto& c : col.classes) std::cout << "  " << class_str(c) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toric stack computations: Picard groups, cohomology, "
               "exceptional collections"};
  app.require_subcommand(1);

  Options opt;
  std::string command;
  for (const char* name : {"validate", "classify", "picard", "cohom", "acyclic",
                           "forbidden", "window", "collection", "verify", "closure",
                           "figure"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--fan", opt.fan_path, "fan JSON file")->required();
    sub->add_option("--seed", opt.seed, "seed for the generic shift");
    sub->add_flag("--json", opt.json, "machine-readable report");
    if (std::string(name) == "cohom" || std::string(name) == "acyclic")
      sub->add_option("--class", opt.class_json, "class as {\"free\":[..],\"torsion\":[..]}");
    if (std::string(name) == "figure")
      sub->add_option("--out", opt.out_path, "output SVG path");
    sub->callback([name, &command] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (command == "validate") return cmd_validate(opt);
    if (command == "classify") return cmd_classify(opt);
    if (command == "picard") return cmd_picard(opt);
    if (command == "cohom") return cmd_cohom(opt);
    if (command == "acyclic") return cmd_acyclic(opt);
    if (command == "forbidden") return cmd_forbidden(opt);
    if (command == "window") return cmd_window(opt);
    if (command == "collection") return cmd_collection(opt);
    if (command == "verify") return cmd_verify(opt);
    if (command == "closure") return cmd_closure(opt);
    if (command == "figure") return cmd_figure(opt);
  } catch (const TorexError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
