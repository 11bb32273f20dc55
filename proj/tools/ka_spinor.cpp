#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ka/acceptance.hpp"

using namespace ka;

namespace {

struct Options {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::optional<double> tol;
  std::string sig;
  int ell = 1;
  std::optional<int> mu;
  std::string kappa = "1,0";
  std::optional<int> samples;
  std::string format = "json";
  std::string kind = "hermitian";
  std::string spinor, alpha, square_file, data, form, case_name;
  int criterion = 0;
  int s = 0;
};

Signature parse_sig(const std::string& text) {
  int p = 0, q = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> p >> comma >> q) || comma != ',') throw Error("--sig expects p,q");
  return Signature(p, q);
}

cplx parse_cplx(const std::string& text) {
  double re = 0, im = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> re)) throw Error("expected re[,im]: " + text);
  if (in >> comma && !(comma == ',' && in >> im)) throw Error("expected re[,im]: " + text);
  return {re, im};
}

PairingKind parse_kind(const std::string& k) {
  if (k == "hermitian") return PairingKind::hermitian;
  if (k == "bilinear") return PairingKind::bilinear;
  throw Error("--kind must be hermitian or bilinear");
}

std::uint64_t seed_of(const Options& o) { return o.seed_given ? o.seed : seed_from_env(20240611); }

double tol_of(const Options& o, double fallback) { return o.tol ? *o.tol : fallback; }

const PairedModule& module_of(const Options& o, Signature s) {
  return cached_paired(s, s.d() % 2 ? o.ell : 1, o.s);
}

// Chirality for even d, module label for odd d.
int label_of(const Options& o, const PairedModule& pm, const std::optional<int>& from_file) {
  if (pm.rep.odd()) return pm.rep.ell();
  if (o.mu) return *o.mu;
  if (from_file) return *from_file;
  return 1;
}

void emit(const Options& o, const json& j) {
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (j.contains("residuals")) {
    if (j.contains("passed")) std::cout << (j["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : j["residuals"].items())
      std::cout << (o.format == "csv" ? "" : "  ") << k << (o.format == "csv" ? "," : " ") << v.dump() << "\n";
    return;
  }
  std::cout << j.dump() << "\n";
}

int report_exit(const Options& o, const json& j) {
  emit(o, j);
  return j.value("passed", false) ? 0 : 1;
}

SpinorData load_or_sample_spinor(const Options& o, const PairedModule& pm) {
  if (!o.spinor.empty()) {
    SpinorData sd = spinor_from_json(read_json_file(o.spinor));
    if (sd.comps.size() != pm.rep.dim())
      throw Error("spinor has " + std::to_string(sd.comps.size()) + " components, module has " +
                  std::to_string(pm.rep.dim()));
    return sd;
  }
  Rng rng(seed_of(o));
  SpinorData sd;
  sd.comps = random_spinor(rng, pm.rep.dim());
  if (!pm.rep.odd() && o.mu) {
    sd.comps = chirality_project(pm.rep, sd.comps, *o.mu);
    sd.chirality = *o.mu;
  }
  return sd;
}

int cmd_sweep(const Options& o) {
  RunConfig cfg;
  cfg.seed = seed_of(o);
  cfg.tol = o.tol;
  cfg.samples = o.samples;
  cfg.format = o.format;
  if (!o.sig.empty()) cfg.signatures.push_back(parse_sig(o.sig));
  std::vector<CriterionResult> results;
  if (o.criterion)
    results.push_back(run_criterion(o.criterion, cfg));
  else
    results = run_acceptance(cfg);
  if (o.format == "json")
    std::cout << format_json(results, cfg).dump(2) << "\n";
  else if (o.format == "csv")
    std::cout << format_csv(results);
  else
    std::cout << format_text(results);
  return all_passed(results) ? 0 : 1;
}

int cmd_sample(const Options& o) {
  const PairedModule& pm = module_of(o, parse_sig(o.sig));
  emit(o, to_json(load_or_sample_spinor(o, pm)));
  return 0;
}

int cmd_square(const Options& o) {
  const PairedModule& pm = module_of(o, parse_sig(o.sig));
  SpinorData sd = load_or_sample_spinor(o, pm);
  SquareResult sq = square(pm, sd.comps, parse_kind(o.kind), parse_cplx(o.kappa));
  emit(o, to_json(sq.alpha));
  return 0;
}

int cmd_verify(const Options& o) {
  Multivector a = multivector_from_json(read_json_file(o.alpha));
  if (!o.sig.empty() && parse_sig(o.sig) != a.sig()) throw Error("--sig does not match the form's signature");
  const PairedModule& pm = module_of(o, a.sig());
  VerifyOptions opt;
  opt.tol = tol_of(o, 1e-9);
  if (!pm.rep.odd() && o.mu) opt.mu = *o.mu;
  opt.sampled_betas = o.samples.value_or(0);
  opt.seed = seed_of(o);
  VerificationReport r = verify_square({a, parse_kind(o.kind), parse_cplx(o.kappa)}, pm, opt);
  return report_exit(o, to_json(r));
}

int cmd_structure(const Options& o) {
  Multivector a = multivector_from_json(read_json_file(o.square_file));
  const PairedModule& pm = module_of(o, a.sig());
  int mu = label_of(o, pm, std::nullopt);
  emit(o, to_json(extract_structure(a, a.sig(), mu, parse_kind(o.kind), tol_of(o, 1e-8))));
  return 0;
}

int cmd_build(const Options& o) {
  StructureData d = structure_from_json(read_json_file(o.data));
  VerificationReport inv = check_invariants(d, tol_of(o, 1e-9));
  if (!inv.passed) {
    std::cerr << "structure data violates its invariants\n";
    emit(o, to_json(inv));
    return 1;
  }
  emit(o, to_json(build_square_from_data(d, tol_of(o, 1e-9))));
  return 0;
}

StructureData data_for_condition(const Options& o, Signature s) {
  if (!o.data.empty()) {
    StructureData d = structure_from_json(read_json_file(o.data));
    if (d.sig != s) throw Error("structure data signature differs from the form's");
    return d;
  }
  if (o.spinor.empty()) throw Error("pass --data or --spinor");
  const PairedModule& pm = module_of(o, s);
  SpinorData sd = load_or_sample_spinor(o, pm);
  int mu = label_of(o, pm, sd.chirality ? sd.chirality : chirality_of(pm.rep, sd.comps));
  Vector e = sd.comps / sd.comps.norm();
  return extract_structure(hermitian_square(pm, e).alpha, s, mu, PairingKind::hermitian);
}

int cmd_condition(const Options& o, int degree) {
  Multivector x = multivector_from_json(read_json_file(o.form));
  if (!o.case_name.empty() && condition_case_from_string(o.case_name) != condition_case_for(x.sig()))
    throw Error("--case " + o.case_name + " does not match signature " + x.sig().str());
  for (const auto& [b, c] : x.terms())
    if (grade_of(b) != degree) throw Error("form must be homogeneous of degree " + std::to_string(degree));
  StructureData d = data_for_condition(o, x.sig());
  ConditionReport r = degree == 2 ? instanton_residual(x, d, tol_of(o, 1e-9)) : curving_residual(x, d, tol_of(o, 1e-9));
  json j = to_json(r);
  if (!o.spinor.empty()) {
    const PairedModule& pm = module_of(o, x.sig());
    j["clifford_kernel_oracle"] = clifford_kernel_oracle(x, spinor_from_json(read_json_file(o.spinor)).comps, pm.rep);
  }
  return report_exit(o, j);
}

int cmd_tables(const Options& o) {
  json rows = json::array();
  std::ostringstream csv;
  csv << "p,q,ell,s,measured_adjoint,measured_symmetry,tabulated_adjoint,tabulated_symmetry,hermitian_adjoint\n";
  bool ok = true;
  for (int d = 1; d <= 9; ++d)
    for (int p = 0; p <= d; ++p) {
      Signature s(p, d - p);
      if (!o.sig.empty() && parse_sig(o.sig) != s) continue;
      for (int ell : {1, -1}) {
        if (d % 2 == 0 && ell == -1) continue;
        for (int sv : d % 2 ? std::vector<int>{0} : std::vector<int>{1, -1}) {
          const PairedModule& pm = cached_paired(s, ell, sv);
          PairingTypes m = classify(pm.bilinear, pm.rep);
          PairingTypes t = tabulated_bilinear_types(s, pm.hermitian.adjoint);
          ok = ok && m.adjoint == t.adjoint && m.symmetry == t.symmetry;
          json ellj = d % 2 ? json(ell) : json(nullptr);
          rows.push_back({{"p", p},
                          {"q", d - p},
                          {"ell", ellj},
                          {"s", pm.hermitian.adjoint},
                          {"measured", {{"adjoint", m.adjoint}, {"symmetry", m.symmetry}}},
                          {"tabulated", {{"adjoint", t.adjoint}, {"symmetry", t.symmetry}}},
                          {"hermitian_adjoint", classify(pm.hermitian, pm.rep).adjoint}});
          csv << p << "," << d - p << "," << (d % 2 ? std::to_string(ell) : "") << "," << pm.hermitian.adjoint << ","
              << m.adjoint << "," << m.symmetry << "," << t.adjoint << "," << t.symmetry << ","
              << classify(pm.hermitian, pm.rep).adjoint << "\n";
        }
      }
    }
  if (o.format == "csv")
    std::cout << csv.str();
  else
    std::cout << json{{"passed", ok}, {"rows", rows}}.dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kahler-Atiyah spinor squares: sweeps, squares, structure data and instanton checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { o.seed = v, o.seed_given = true; }, "random seed (default: KA_SPINOR_SEED)");
  app.add_option("--tol", o.tol, "tolerance override");
  app.add_option("--sig", o.sig, "signature p,q");
  app.add_option("--ell", o.ell, "module label in odd dimension")->check(CLI::IsMember({1, -1}));
  app.add_option("--mu", o.mu, "chirality in even dimension")->check(CLI::IsMember({1, -1}));
  app.add_option("--kappa", o.kappa, "unit complex phase re,im");
  app.add_option("--samples", o.samples, "sample count override");
  app.add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--adjoint", o.s, "adjoint type of the Hermitian pairing in even dimension (0 = default)")
      ->check(CLI::IsMember({0, 1, -1}));

  auto* sweep = app.add_subcommand("sweep", "run the acceptance criteria");
  sweep->add_option("--criterion", o.criterion, "run a single criterion")->check(CLI::Range(1, kCriterionCount));
  auto* sample = app.add_subcommand("sample", "emit a random spinor");
  auto* sq = app.add_subcommand("square", "Hermitian or bilinear square of a spinor");
  sq->add_option("--kind", o.kind, "hermitian or bilinear");
  sq->add_option("--spinor", o.spinor, "spinor JSON (random when absent)");
  auto* verify = app.add_subcommand("verify", "check the square characterization for a form");
  verify->add_option("--alpha", o.alpha, "form JSON")->required();
  verify->add_option("--kind", o.kind, "hermitian or bilinear");
  auto* structure = app.add_subcommand("structure", "structure data of a square");
  structure->add_option("--square", o.square_file, "form JSON")->required();
  structure->add_option("--kind", o.kind, "hermitian or bilinear");
  auto* build = app.add_subcommand("build", "square from structure data");
  build->add_option("--data", o.data, "structure JSON")->required();
  auto* inst = app.add_subcommand("instanton", "degree-separated instanton condition for a two-form");
  inst->add_option("--case", o.case_name, "d2, d3, d4, d5, d6 or d8");
  inst->add_option("--F", o.form, "two-form JSON")->required();
  inst->add_option("--data", o.data, "Hermitian structure JSON");
  inst->add_option("--spinor", o.spinor, "spinor JSON");
  auto* curv = app.add_subcommand("curving", "degree-separated curving condition for a three-form");
  curv->add_option("--case", o.case_name, "d3, d4, d5, d6, d8 or d6lorentz");
  curv->add_option("--H", o.form, "three-form JSON")->required();
  curv->add_option("--data", o.data, "Hermitian structure JSON");
  curv->add_option("--spinor", o.spinor, "spinor JSON");
  auto* tables = app.add_subcommand("tables", "measured pairing types against the tabulated ones");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sweep) return cmd_sweep(o);
    if (*sample) {
      if (o.sig.empty()) throw Error("sample needs --sig");
      return cmd_sample(o);
    }
    if (*sq) {
      if (o.sig.empty()) throw Error("square needs --sig");
      return cmd_square(o);
    }
    if (*verify) return cmd_verify(o);
    if (*structure) return cmd_structure(o);
    if (*build) return cmd_build(o);
    if (*inst) return cmd_condition(o, 2);
    if (*curv) return cmd_condition(o, 3);
    if (*tables) return cmd_tables(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
