// shs: command-line front end for semi-Hilbert gauges and orthogonality checks.
//
// Exit status: 0 success, 1 input or validation error, 2 numerical failure,
// 3 a verification run (verify, examples) found a mismatch.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shs/harness.hpp"

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kExitMismatch = 3;

struct Common {
  std::string file;
  std::optional<double> epsilon;
  std::optional<double> tol;
  bool json = false;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_file = true) {
  if (with_file) cmd->add_option("file", c.file, "problem file (JSON)")->required();
  cmd->add_option("--epsilon", c.epsilon, "override the problem epsilon, in [0, 1)");
  cmd->add_option("--tol", c.tol, "decision tolerance (absolute margin band)");
  cmd->add_flag("--json", c.json, "machine-readable output");
  cmd->add_option("--out", c.out, "write the main output to this path");
}

shs::ProblemFile load(const Common& c) {
  shs::ProblemFile p = shs::load_problem(c.file);
  if (c.epsilon) {
    if (!(*c.epsilon >= 0.0 && *c.epsilon < 1.0)) {
      throw shs::Error(shs::Errc::ValidationError, "--epsilon: must lie in [0, 1)");
    }
    p.epsilon = *c.epsilon;
  }
  if (c.tol) {
    if (!(*c.tol > 0.0)) throw shs::Error(shs::Errc::ValidationError, "--tol: must be positive");
    shs::Tolerances t = shs::effective_tolerances(p);
    t.decision_tol = *c.tol;
    p.tolerances = t;
  }
  return p;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
  } else {
    shs::write_text_file(c.out, text);
  }
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string complex_text(shs::cplx z) {
  return z.imag() >= 0.0 ? num(z.real()) + "+" + num(z.imag()) + "i" : num(z.real()) + num(z.imag()) + "i";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_gauge(const Common& c, bool radius) {
  const shs::ProblemFile p = load(c);
  const shs::AContext ctx = shs::make_context(p.A, shs::effective_tolerances(p));
  const shs::GaugeReport gt = shs::gauge_report(ctx, p.T);
  const shs::GaugeReport gs = shs::gauge_report(ctx, p.S);
  if (c.json) {
    emit(c, ojson{{"T", shs::detail::gauge_json(gt, "")}, {"S", shs::detail::gauge_json(gs, "")}}.dump(2) + "\n");
  } else if (radius) {
    emit(c, "w_A(T) = " + num(gt.num_radius) + "\nw_A(S) = " + num(gs.num_radius) + "\n");
  } else {
    emit(c, "||T||_A = " + num(gt.op_seminorm) + "  (attaining dimension " +
                std::to_string(gt.attain_basis.cols()) + ")\n||S||_A = " + num(gs.op_seminorm) +
                "  (attaining dimension " + std::to_string(gs.attain_basis.cols()) + ")\n");
  }
  return 0;
}

int cmd_adjoint(const Common& c) {
  const shs::ProblemFile p = load(c);
  const shs::AContext ctx = shs::make_context(p.A, shs::effective_tolerances(p));
  const ojson j{{"T_sharp", shs::detail::matrix_to_json(shs::sharp_adjoint(ctx, p.T))},
                {"S_sharp", shs::detail::matrix_to_json(shs::sharp_adjoint(ctx, p.S))}};
  emit(c, (c.json ? j.dump(2) : j.dump()) + "\n");
  return 0;
}

int cmd_classify(const Common& c) {
  const shs::ProblemFile p = load(c);
  const shs::AContext ctx = shs::make_context(p.A, shs::effective_tolerances(p));
  const auto ct = shs::classify(ctx, p.T), cs = shs::classify(ctx, p.S);
  if (c.json) {
    emit(c, ojson{{"rank_a", ctx.rank}, {"T", shs::detail::class_json(ct)}, {"S", shs::detail::class_json(cs)}}
                    .dump(2) + "\n");
  } else {
    auto line = [](const char* name, const shs::OperatorClass& k) {
      return std::string(name) + ": a_bounded=" + yes_no(k.a_bounded) + " a_adjointable=" +
             yes_no(k.a_adjointable) + " a_positive=" + yes_no(k.a_positive) + "\n";
    };
    emit(c, "rank(A) = " + std::to_string(ctx.rank) + "\n" + line("T", ct) + line("S", cs));
  }
  return 0;
}

std::string verdict_text(const shs::Verdict& v) {
  std::string s = std::string(shs::to_string(v.status)) + "  margin=" + num(v.margin);
  if (v.witness) s += "  witness=" + complex_text(*v.witness);
  if (v.grid_certified) s += "  (grid-certified)";
  if (!v.note.empty()) s += "  [" + v.note + "]";
  return s;
}

int run_decisions(const Common& c, const std::vector<shs::Decision>& decisions) {
  const shs::ProblemFile p = load(c);
  const shs::Report r = shs::run_report(p, decisions);
  if (c.json) {
    emit(c, shs::report_to_json(r).dump(2) + "\n");
  } else {
    std::string text = "epsilon = " + num(r.epsilon) + "\n";
    if (r.wset) {
      text += "dist(0, W_A) = " + num(r.wset->distance) + "  radius = " + num(r.wset->radius) +
              "  critical epsilon = " + num(r.wset->critical_epsilon) + "\n";
    }
    for (const auto& d : r.decisions) {
      const std::string name(shs::to_string(d.decision));
      if (d.error) {
        text += name + ": error " + d.error_message + "\n";
      } else if (d.decision == shs::Decision::ShiftEquivalence) {
        text += name + ": (T,S) " + verdict_text(d.verdicts[0]) + "\n" + std::string(name.size(), ' ') +
                "  (T+I,S) " + verdict_text(d.verdicts[1]) + "\n";
      } else {
        text += name + ": " + verdict_text(d.verdicts[0]) + "\n";
      }
    }
    emit(c, text);
  }
  return shs::report_exit_code(r);
}

int cmd_check_bj(const Common& c, const std::string& method) {
  using shs::Decision;
  if (method == "wset") return run_decisions(c, {Decision::Bj});
  if (method == "direct") return run_decisions(c, {Decision::BjDirect});
  if (method == "alpha") return run_decisions(c, {Decision::BjAlpha});
  return run_decisions(c, {Decision::Bj, Decision::BjDirect, Decision::BjAlpha});
}

int cmd_check_wbj(const Common& c, const std::string& method, bool shift) {
  using shs::Decision;
  std::vector<Decision> ds;
  if (method == "wset") {
    throw shs::Error(shs::Errc::ValidationError, "--method: wset applies to check-bj only");
  }
  if (method == "direct" || method == "all") ds.push_back(Decision::WbjDirect);
  if (method == "alpha" || method == "all") ds.push_back(Decision::WbjAlpha);
  if (shift) ds.push_back(Decision::ShiftEquivalence);
  return run_decisions(c, ds);
}

int cmd_wset(const Common& c, std::size_t samples) {
  const shs::ProblemFile p = load(c);
  const std::string csv = shs::export_wset_boundary(p, samples);
  if (c.json) {
    const shs::Report r = shs::run_report(p, {});
    if (!r.wset) throw shs::Error(shs::Errc::ZeroSeminorm, r.wset_error);
    if (!c.out.empty()) shs::write_text_file(c.out, csv);
    std::cout << ojson{{"distance", r.wset->distance},
                       {"radius", r.wset->radius},
                       {"critical_epsilon", r.wset->critical_epsilon},
                       {"attain_dim", r.wset->attain_dim}}
                     .dump(2)
              << "\n";
  } else {
    emit(c, csv);
  }
  return 0;
}

std::string suite_text(const shs::SuiteReport& r) {
  std::string text;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %6s %6s %6s %9s\n", "property", "pass", "fail", "inconc", "seconds");
  text += buf;
  for (const auto& p : r.properties) {
    std::snprintf(buf, sizeof buf, "%-22s %6zu %6zu %6zu %9.2f\n", p.name.c_str(), p.pass, p.fail,
                  p.inconclusive, p.seconds);
    text += buf;
    for (const auto& f : p.failures) {
      text += "  FAIL dim=" + std::to_string(f.dim) + " index=" + std::to_string(f.index) +
              " seed=" + std::to_string(f.seed) + ": " + f.detail + "\n";
    }
  }
  text += r.passed() ? "all properties passed\n" : "property failures found\n";
  return text;
}

int cmd_verify(const Common& c, shs::SuiteConfig cfg) {
  if (c.tol) {
    if (!(*c.tol > 0.0)) throw shs::Error(shs::Errc::ValidationError, "--tol: must be positive");
    cfg.tols.decision_tol = *c.tol;
  }
  const shs::SuiteReport r = shs::property_suite(cfg);
  emit(c, c.json ? shs::suite_to_json(r).dump(2) + "\n" : suite_text(r));
  return r.passed() ? 0 : kExitMismatch;
}

int cmd_examples(const Common& c) {
  const shs::ExamplesReport r = shs::builtin_examples();
  if (c.json) {
    emit(c, shs::examples_to_json(r).dump(2) + "\n");
  } else {
    std::string text;
    for (const auto& pack : r.packs) {
      text += std::string(pack.passed() ? "PASS " : "FAIL ") + pack.name + ": " + pack.description + "\n";
      for (const auto& chk : pack.checks) {
        if (!chk.passed) text += "     mismatch " + chk.name + ": expected " + chk.expected + ", got " + chk.observed + "\n";
      }
    }
    emit(c, text);
  }
  return r.passed() ? 0 : kExitMismatch;
}

int cmd_gen(const Common& c, const shs::InstanceSpec& base, const std::string& weight, const std::string& t_kind,
            const std::string& s_kind) {
  shs::InstanceSpec spec = base;
  std::tie(spec.weight, spec.weight_param) = shs::parse_weight(weight);
  spec.t_kind = shs::parse_operator_kind(t_kind);
  spec.s_kind = shs::parse_operator_kind(s_kind);
  spec.epsilon = c.epsilon;
  emit(c, shs::dump_problem(shs::gen_instance(spec)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauges and approximate orthogonality for operators on semi-Hilbert spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(shs::kToolVersion));

  Common c;
  std::string method = "all";
  bool shift = false;
  std::size_t samples = 256;
  shs::SuiteConfig suite;
  std::vector<std::string> properties;
  shs::InstanceSpec spec;
  std::string weight = "identity", t_kind = "random", s_kind = "random";

  auto* norm = app.add_subcommand("norm", "A-seminorms of T and S");
  add_common(norm, c);
  auto* wa = app.add_subcommand("wa", "A-numerical radii of T and S");
  add_common(wa, c);
  auto* adjoint = app.add_subcommand("adjoint", "reduced Douglas solutions T^#, S^#");
  add_common(adjoint, c);
  auto* classify = app.add_subcommand("classify", "A-bounded / A-adjointable / A-positive flags");
  add_common(classify, c);

  auto* check_bj = app.add_subcommand("check-bj", "(eps, A)-approximate Birkhoff-James orthogonality");
  add_common(check_bj, c);
  check_bj->add_option("--method", method, "decision method")
      ->check(CLI::IsMember({"wset", "direct", "alpha", "all"}));

  auto* check_wbj = app.add_subcommand("check-wbj", "(eps, A)-numerical-radius orthogonality");
  add_common(check_wbj, c);
  check_wbj->add_option("--method", method, "decision method")
      ->check(CLI::IsMember({"wset", "direct", "alpha", "all"}));
  check_wbj->add_flag("--shift", shift, "also decide (T + I, S); requires A-positive T");

  auto* wset = app.add_subcommand("wset", "boundary of W_A(T, S) as CSV (theta, re, im)");
  add_common(wset, c);
  wset->add_option("--samples", samples, "number of boundary points");

  auto* verify = app.add_subcommand("verify", "randomized property suite");
  add_common(verify, c, false);
  verify->add_option("--count", suite.count, "cases per property and dimension")->check(CLI::PositiveNumber);
  verify->add_option("--dims", suite.dims, "dimensions (>= 2)")->delimiter(',');
  verify->add_option("--seed", suite.seed, "base seed")->envname("SHS_SEED");
  verify->add_option("--property", properties, "restrict to these properties")->delimiter(',');

  auto* examples = app.add_subcommand("examples", "built-in regression packs");
  examples->alias("paper-examples");
  add_common(examples, c, false);

  auto* gen = app.add_subcommand("gen", "seeded random problem file");
  add_common(gen, c, false);
  gen->add_option("--dims", spec.dim, "dimension")->check(CLI::PositiveNumber);
  gen->add_option("--weight", weight, "identity | diag-zeros:k | psd:r");
  gen->add_option("--t-kind", t_kind, "random | diagonal | nilpotent | a-positive");
  gen->add_option("--s-kind", s_kind, "random | diagonal | nilpotent | a-positive");
  gen->add_option("--seed", spec.seed, "generator seed")->envname("SHS_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*norm) return cmd_gauge(c, false);
    if (*wa) return cmd_gauge(c, true);
    if (*adjoint) return cmd_adjoint(c);
    if (*classify) return cmd_classify(c);
    if (*check_bj) return cmd_check_bj(c, method);
    if (*check_wbj) return cmd_check_wbj(c, method, shift);
    if (*wset) return cmd_wset(c, samples);
    if (*verify) {
      suite.properties = properties;
      return cmd_verify(c, suite);
    }
    if (*examples) return cmd_examples(c);
    if (*gen) return cmd_gen(c, spec, weight, t_kind, s_kind);
  } catch (const shs::Error& e) {
    std::cerr << "shs: " << e.what() << "\n";
    return shs::is_numerical(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "shs: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
