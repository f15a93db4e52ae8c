// Command-line front end over the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stabcx/stabcx.h"

using json = nlohmann::json;

namespace {

enum Exit { Pass = 0, AssertionFailure = 1, Usage = 2, Unsupported = 3 };

struct Globals {
  uint64_t seed = 0;
  bool has_seed = false;
  int margin = 2;
  std::string output = "text";
};

struct Failure {
  int code;
  std::string message;
};

int exit_of(stabcx_status s) {
  switch (s) {
    case STABCX_OK: return Pass;
    case STABCX_E_ARGUMENT:
    case STABCX_E_PARSE: return Usage;
    case STABCX_E_UNSUPPORTED: return Unsupported;
    default: return AssertionFailure;
  }
}

void check(stabcx_status s) {
  if (s != STABCX_OK) throw Failure{exit_of(s), stabcx_last_error()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{Usage, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Takes ownership of a string from the library.
json take(char* s) {
  json j = json::parse(s);
  stabcx_string_free(s);
  return j;
}

struct Complex {
  stabcx_complex* h = nullptr;
  explicit Complex(const std::string& path) { check(stabcx_complex_from_json(nullptr, slurp(path).c_str(), &h)); }
  ~Complex() { stabcx_complex_free(h); }
};

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.output == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string complex_line(const json& c) {
  std::ostringstream o;
  const json& w = c.at("window");
  o << "degrees " << w.at("lo") << ".." << w.at("hi") << ", ranks " << w.at("ranks").dump();
  if (!c.value("left_tail", json(nullptr)).is_null()) o << ", periodic to the left";
  if (!c.value("right_tail", json(nullptr)).is_null()) o << ", periodic to the right";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable categories of complexes of projectives"};
  app.require_subcommand(1);
  Globals g;
  app.add_option_function<uint64_t>("--seed", [&](uint64_t s) { g.seed = s, g.has_seed = true; }, "run seed");
  app.add_option("--truncation-margin", g.margin, "periods added on each periodic side")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.fallthrough();

  std::string file, kind;
  int n = 1, i = 0, horizon = 0;
  std::string fixtures_dir, report_path;

  auto* ring = app.add_subcommand("ring", "ring descriptors")->require_subcommand(1);
  auto* ring_validate = ring->add_subcommand("validate", "parse a descriptor and print its flags");
  ring_validate->add_option("file", file)->required();

  auto* cx = app.add_subcommand("complex", "complex operations");
  cx->add_option("op", kind, "cohomology, dual or split")->required()->check(CLI::IsMember({"cohomology", "dual", "split"}));
  cx->add_option("file", file)->required();

  auto* st = app.add_subcommand("stable", "syzygies, cosyzygies and approximations");
  st->add_option("op", kind, "omega, sigma or approx")->required()->check(CLI::IsMember({"omega", "sigma", "approx"}));
  st->add_option("file", file)->required();
  st->add_option("-n", n, "tower length")->check(CLI::PositiveNumber);

  auto* cert = app.add_subcommand("cert", "*torsion-free and *reflexive certificates");
  cert->add_option("kind", kind, "torsion-free or reflexive")->required()->check(CLI::IsMember({"torsion-free", "reflexive"}));
  cert->add_option("file", file)->required();

  auto* con = app.add_subcommand("contract", "contract a partial Add(R)-resolution");
  con->add_option("file", file)->required();

  auto* del = app.add_subcommand("delta", "the counit cone and its L-sequence");
  del->add_option("file", file)->required();
  del->add_option("-n", n)->required();
  del->add_option("-i", i)->required();

  auto* gd = app.add_subcommand("gdim", "G-dimension up to a horizon");
  gd->add_option("file", file)->required();
  gd->add_option("--horizon", horizon, "Ext horizon (default per ring kind)");

  auto* ex = app.add_subcommand("experiment", "theorem experiments")->require_subcommand(1);
  auto* ex_run = ex->add_subcommand("run", "run a config");
  ex_run->add_option("file", file)->required();
  ex_run->add_option("--fixtures-dir", fixtures_dir, "write counterwitness fixtures here");
  ex_run->add_option("--report", report_path, "write the JSON report here");

  auto* fx = app.add_subcommand("fixture", "counterwitness fixtures")->require_subcommand(1);
  auto* fx_replay = fx->add_subcommand("replay", "recompute a fixture verdict");
  fx_replay->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Pass : Usage;
  }

  try {
    if (ring_validate->parsed()) {
      stabcx_ring* r = nullptr;
      check(stabcx_ring_from_json(slurp(file).c_str(), &r));
      char* s = nullptr;
      stabcx_status rc = stabcx_ring_describe(r, &s);
      stabcx_ring_free(r);
      check(rc);
      json j = take(s);
      std::ostringstream t;
      t << j.at("name").get<std::string>() << ": valid\n";
      for (auto& [k, v] : j.at("flags").items()) t << "  " << k << ": " << v.dump() << "\n";
      emit(g, j, t.str());
      return Pass;
    }
    if (cx->parsed()) {
      Complex X(file);
      char* s = nullptr;
      if (kind == "dual") {
        stabcx_complex* D = nullptr;
        check(stabcx_complex_dual(X.h, &D));
        stabcx_status rc = stabcx_complex_to_json(D, &s);
        stabcx_complex_free(D);
        check(rc);
        json j = take(s);
        emit(g, j, "dual: " + complex_line(j) + "\n");
      } else if (kind == "cohomology") {
        check(stabcx_complex_cohomology(X.h, &s));
        json j = take(s);
        std::ostringstream t;
        if (j.at("acyclic").get<bool>()) t << "acyclic\n";
        for (const auto& h : j.at("nonzero")) t << "H^" << h.at("degree") << " = " << h.at("module").get<std::string>() << "\n";
        emit(g, j, t.str());
      } else {
        check(stabcx_complex_split(X.h, &s));
        json j = take(s);
        emit(g, j, "split: " + yes(j.at("split")) + " (criteria agree: " + yes(j.at("agree")) + ")\n");
      }
      return Pass;
    }
    if (st->parsed()) {
      Complex X(file);
      char* s = nullptr;
      check(stabcx_stable(X.h, kind.c_str(), n, g.margin, &s));
      json j = take(s);
      std::string t;
      if (kind == "approx")
        t = "F: " + complex_line(j.at("F")) + "\nOmega: " + complex_line(j.at("omega_complex")) + "\n";
      else
        t = kind + "^" + std::to_string(n) + ": " + complex_line(j.at(kind)) + "\n";
      emit(g, j, t);
      return Pass;
    }
    if (cert->parsed()) {
      Complex X(file);
      char* s = nullptr;
      int holds = 0;
      check(stabcx_certify(X.h, kind.c_str(), &holds, &s));
      json j = take(s);
      emit(g, j, "*" + kind + ": " + yes(holds) + "\n");
      return holds ? Pass : AssertionFailure;
    }
    if (con->parsed()) {
      char* s = nullptr;
      check(stabcx_contract(slurp(file).c_str(), g.margin, &s));
      json j = take(s);
      const json& c = j.at("classification");
      std::ostringstream t;
      t << "contraction: " << complex_line(j.at("contraction")) << "\n"
        << "block shape: " << yes(j.at("blocks").at("ok")) << "\n"
        << "split: " << yes(c.at("split")) << ", degenerate: " << c.at("degenerate").get<std::string>() << "\n";
      emit(g, j, t.str());
      return j.at("blocks").at("ok").get<bool>() ? Pass : AssertionFailure;
    }
    if (del->parsed()) {
      Complex X(file);
      char* s = nullptr;
      check(stabcx_delta(X.h, n, i, g.margin, &s));
      json j = take(s);
      std::ostringstream t;
      t << "Delta: " << complex_line(j.at("delta")) << "\n"
        << "cohomology sequence exact: " << yes(j.at("cohomology_exact")) << "\n"
        << "L-sequence valid: " << yes(j.at("lseq_valid")) << ", contraction iso: " << yes(j.at("contraction_iso")) << "\n";
      emit(g, j, t.str());
      return j.at("cohomology_exact").get<bool>() ? Pass : AssertionFailure;
    }
    if (gd->parsed()) {
      stabcx_module* m = nullptr;
      check(stabcx_module_from_json(slurp(file).c_str(), &m));
      char* s = nullptr;
      stabcx_status rc = stabcx_gdim(m, horizon, &s);
      stabcx_module_free(m);
      check(rc);
      json j = take(s);
      emit(g, j,
           "G-dim: " + j.at("gdim").at("label").get<std::string>() + "\ntotally reflexive: " +
               yes(j.at("totally_reflexive").at("verdict")) + "\n");
      return Pass;
    }
    if (ex_run->parsed()) {
      char *s = nullptr, *table = nullptr;
      int failed = 0;
      check(stabcx_experiment_run(slurp(file).c_str(), g.has_seed, g.seed, g.margin, &failed, &s, &table));
      std::string tab = table;
      stabcx_string_free(table);
      json j = take(s);
      if (!report_path.empty()) std::ofstream(report_path) << j.dump(2) << "\n";
      if (!fixtures_dir.empty()) {
        std::filesystem::create_directories(fixtures_dir);
        for (const auto& r : j.at("reports")) {
          int k = 0;
          for (const auto& w : r.at("counterwitnesses"))
            std::ofstream(fixtures_dir + "/" + r.at("check").get<std::string>() + "-" + std::to_string(k++) + ".json")
                << w.dump(2) << "\n";
        }
      }
      emit(g, j, tab);
      return failed ? AssertionFailure : Pass;
    }
    if (fx_replay->parsed()) {
      char* s = nullptr;
      int failed = 0;
      check(stabcx_fixture_replay(slurp(file).c_str(), &failed, &s));
      json j = take(s);
      std::string t = j.at("check").get<std::string>() + ": " + j.at("status").get<std::string>();
      if (j.contains("recorded_status")) t += " (recorded " + j["recorded_status"].get<std::string>() + ")";
      emit(g, j, t + "\n");
      return failed ? AssertionFailure : Pass;
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}
