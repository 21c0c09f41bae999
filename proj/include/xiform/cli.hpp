#pragma once

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "xiform/arf.hpp"
#include "xiform/classify.hpp"
#include "xiform/error.hpp"
#include "xiform/forms.hpp"
#include "xiform/obstruction.hpp"
#include "xiform/oracle.hpp"
#include "xiform/report.hpp"
#include "xiform/spheres.hpp"
#include "xiform/version.hpp"

namespace xiform::cli {

// Exit codes: 0 definitive verdict, 2 unknown / undecided within bounds,
// 3 input error, 4 internal invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitInternal = 4;

struct CommandResult {
  ReportDocument report;
  std::string text;
  int exit_code = kExitOk;
};

namespace detail {

inline std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

inline std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string s = "(";
  for (std::size_t i = 0; i < bits.size(); ++i)
    s += (i ? "," : "") + std::to_string(int(bits[i]));
  return s + ")";
}

inline std::string vec_string(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

inline std::string columns_string(const IntMatrix& m) {
  std::string s;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) s += " ";
    s += vec_string(m.col(j));
  }
  return m.cols() ? s : "(empty)";
}

inline const ModTwoFunctional& require_g(const FormFile& f) {
  if (!f.g) throw Error(errc::missing_field, "this subcommand requires the field 'g'");
  return *f.g;
}

inline const IntegralFunctional& require_f(const FormFile& f) {
  if (!f.f) throw Error(errc::missing_field, "this subcommand requires the field 'f'");
  return *f.f;
}

} // namespace detail

inline CommandResult cmd_analyze(const std::string& path) {
  CommandResult res;
  FormFile file = load_form_file(path);
  InertiaCounts inertia = signature(file.form);
  Int det = determinant(file.form);
  bool unimod = det == 1 || det == -1;
  Parity par = parity(file.form);

  res.report.result = {{"rank", file.form.rank()},
                       {"det", int_to_json(det)},
                       {"unimodular", unimod},
                       {"parity", parity_name(par)},
                       {"signature", inertia.signature()},
                       {"inertia",
                        {{"n_plus", inertia.n_plus},
                         {"n_minus", inertia.n_minus},
                         {"n_zero", inertia.n_zero}}}};
  std::ostringstream os;
  os << "rank        " << file.form.rank() << "\n"
     << "determinant " << det << "\n"
     << "unimodular  " << (unimod ? "yes" : "no") << "\n"
     << "parity      " << parity_name(par) << "\n"
     << "signature   " << inertia.signature() << "  (n+ " << inertia.n_plus << ", n- "
     << inertia.n_minus << ", n0 " << inertia.n_zero << ")\n";
  res.text = os.str();
  return res;
}

inline CommandResult cmd_classify(const std::string& path, int cap) {
  CommandResult res;
  FormFile file = load_form_file(path);
  Parity par = parity(file.form);
  BasisTransform t = par == Parity::odd ? standard_orthogonal_basis(file.form, cap)
                                        : hyperbolic_basis(file.form, cap);
  std::string ref = (par == Parity::odd ? "D^" : "H^") + std::to_string(file.form.rank() / 2);
  res.report.result = {{"reference", ref},
                       {"parity", parity_name(par)},
                       {"transform", matrix_to_json(t.matrix)},
                       {"verified", true}};
  std::ostringstream os;
  os << "reference  " << ref << "\n"
     << "columns    " << detail::columns_string(t.matrix) << "\n"
     << "verified   yes (T^t G T equals the reference Gram matrix exactly)\n";
  res.text = os.str();
  return res;
}

inline CommandResult cmd_arf(const std::string& path, int cap) {
  CommandResult res;
  FormFile file = load_form_file(path);
  const ModTwoFunctional& g = detail::require_g(file);
  Parity par = parity(file.form);
  int value = par == Parity::odd ? xi_odd(file.form, g, cap) : xi_even(file.form, g, cap);
  std::string name = par == Parity::odd ? "xi_odd" : "xi_even";
  res.report.result = {{"invariant", name}, {"value", value}, {"parity", parity_name(par)}};
  res.text = name + " = " + std::to_string(value) + "\n";
  return res;
}

namespace detail {

struct LagrangianAnalysis {
  int xi = 0;
  std::string xi_name;
  std::optional<LagrangianWitness> constructive;
  std::optional<PairingObstruction> obstruction;
  OracleOutcome oracle;
  std::string verdict; // found | refuted | unknown
};

inline LagrangianAnalysis analyze_lagrangian(const GramForm& form, const ModTwoFunctional& g,
                                             int bound, int cap) {
  LagrangianAnalysis a;
  Parity par = parity(form);
  if (par == Parity::odd) {
    a.xi_name = "xi_odd";
    a.xi = xi_odd(form, g, cap);
    if (a.xi == 0) {
      auto attempt = lagrangian_in_kernel_odd(form, g, cap);
      if (auto* w = std::get_if<LagrangianWitness>(&attempt))
        a.constructive = *w;
      else
        a.obstruction = std::get<PairingObstruction>(attempt);
    }
  } else {
    a.xi_name = "xi_even";
    a.xi = xi_even(form, g, cap);
    if (a.xi == 0) a.constructive = lagrangian_in_kernel_even(form, g, cap);
  }
  a.oracle = lagrangian_oracle(form, g, bound);
  bool found = a.constructive.has_value() ||
               a.oracle.verdict == OracleOutcome::Verdict::found;
  if (found && a.oracle.verdict == OracleOutcome::Verdict::refuted)
    throw Error(errc::internal, "verified witness coexists with a refutation certificate");
  if (found)
    a.verdict = "found";
  else if (a.oracle.verdict == OracleOutcome::Verdict::refuted)
    a.verdict = "refuted";
  else
    a.verdict = "unknown";
  return a;
}

} // namespace detail

inline CommandResult cmd_lagrangian(const std::string& path, int bound, int cap) {
  CommandResult res;
  FormFile file = load_form_file(path);
  const ModTwoFunctional& g = detail::require_g(file);
  auto a = detail::analyze_lagrangian(file.form, g, bound, cap);

  json result;
  result["verdict"] = a.verdict;
  result["invariant"] = {{"name", a.xi_name}, {"value", a.xi}};
  if (a.constructive) result["constructive_witness"] = witness_to_json(*a.constructive);
  if (a.obstruction)
    result["pairing_obstruction"] = {{"g1_plus", a.obstruction->g1_plus},
                                     {"g1_minus", a.obstruction->g1_minus},
                                     {"detail", a.obstruction->detail}};
  json oracle;
  oracle["verdict"] = oracle_verdict_name(a.oracle.verdict);
  if (a.oracle.witness) oracle["witness"] = witness_to_json(*a.oracle.witness);
  if (a.oracle.certificate) {
    oracle["certificate"] = certificate_to_json(*a.oracle.certificate);
    oracle["certificate_replay"] = replay_certificate(file.form, g, *a.oracle.certificate);
  }
  if (!a.oracle.note.empty()) oracle["note"] = a.oracle.note;
  result["oracle"] = oracle;
  res.report.result = result;
  if (a.verdict == "unknown") res.exit_code = kExitUnknown;

  std::ostringstream os;
  os << "verdict      " << a.verdict << "\n"
     << a.xi_name << "       " << a.xi << "\n";
  if (a.constructive)
    os << "constructive " << detail::columns_string(a.constructive->span.matrix) << "\n";
  if (a.obstruction) os << "constructive pairing obstruction: " << a.obstruction->detail << "\n";
  os << "oracle       " << oracle_verdict_name(a.oracle.verdict);
  if (a.oracle.witness)
    os << "  witness " << detail::columns_string(a.oracle.witness->span.matrix);
  if (a.oracle.certificate)
    os << "  certificate " << certificate_kind_name(a.oracle.certificate->kind) << " ("
       << a.oracle.certificate->subspaces.size() << " subspaces), replay "
       << (replay_certificate(file.form, g, *a.oracle.certificate) ? "ok" : "FAILED");
  os << "\n";
  if (!a.oracle.note.empty()) os << "note         " << a.oracle.note << "\n";
  res.text = os.str();
  return res;
}

inline CommandResult cmd_obstruction(const std::string& path, std::size_t k_max, int bound,
                                     int cap) {
  CommandResult res;
  FormFile file = load_form_file(path);
  ObstructionData data{file.form, detail::require_f(file), detail::require_g(file), file.sigma,
                       file.lambda};
  ObstructionReport rep = decide_elementary(data, k_max, bound, cap);

  json conditions = {{"signature_zero", rep.conditions.signature_zero},
                     {"v_norm_zero", rep.conditions.v_norm_zero},
                     {"g_v_zero", rep.conditions.g_v_zero}};
  if (rep.conditions.xi_odd_value)
    conditions["xi_odd"] = *rep.conditions.xi_odd_value;
  else
    conditions["xi_odd"] = nullptr;

  json consistency;
  consistency["g_v_zero_as_expected"] = rep.consistency.g_v_zero_as_expected;
  consistency["f_epic"] = rep.consistency.f_epic;
  consistency["g_epic"] = rep.consistency.g_epic;
  if (rep.consistency.v_norm_matches_lambda)
    consistency["v_norm_matches_Lambda"] = *rep.consistency.v_norm_matches_lambda;
  if (rep.consistency.xi_matches_lambda_mod2)
    consistency["xi_odd_matches_Lambda_mod2"] = *rep.consistency.xi_matches_lambda_mod2;
  if (rep.consistency.sigma_matches)
    consistency["sigma_matches_signature"] = *rep.consistency.sigma_matches;

  json result;
  result["verdict"] = verdict_name(rep.verdict);
  result["conditions"] = conditions;
  result["consistency"] = consistency;
  result["v"] = vec_to_json(rep.v);
  result["note"] = rep.note;
  if (rep.witness) {
    result["witness"] = witness_to_json(LagrangianWitness{*rep.witness});
    result["witness_k"] = rep.witness_k;
  }
  if (!rep.certificates.empty()) {
    json certs = json::array();
    for (const auto& c : rep.certificates) {
      json entry = certificate_to_json(c.certificate);
      entry["k"] = c.k;
      certs.push_back(entry);
    }
    result["certificates"] = certs;
  }
  res.report.result = result;
  if (rep.verdict == ElementaryVerdict::unknown) res.exit_code = kExitUnknown;

  auto flag = [](bool b) { return b ? "true " : "false"; };
  std::ostringstream os;
  os << "verdict  " << verdict_name(rep.verdict) << "\n"
     << "v        " << detail::vec_string(rep.v) << "\n"
     << "conditions:\n"
     << "  1. signature zero   " << flag(rep.conditions.signature_zero) << "\n"
     << "  2. beta(v,v) zero   " << flag(rep.conditions.v_norm_zero) << "\n"
     << "  3. g(v) zero        " << flag(rep.conditions.g_v_zero) << "\n"
     << "  4. xi_odd zero      "
     << (rep.conditions.xi_odd_value ? flag(*rep.conditions.xi_odd_value == 0) : "n/a  ") << "\n"
     << "consistency:\n";
  if (rep.consistency.v_norm_matches_lambda)
    os << "  beta(v,v) == Lambda        " << flag(*rep.consistency.v_norm_matches_lambda) << "\n";
  if (rep.consistency.xi_matches_lambda_mod2)
    os << "  xi_odd == Lambda mod 2     " << flag(*rep.consistency.xi_matches_lambda_mod2)
       << "\n";
  if (rep.consistency.sigma_matches)
    os << "  sigma matches signature    " << flag(*rep.consistency.sigma_matches) << "\n";
  os << "  g(v) == 0 (expected)       " << flag(rep.consistency.g_v_zero_as_expected) << "\n"
     << "  f epic                     " << flag(rep.consistency.f_epic) << "\n"
     << "  g epic                     " << flag(rep.consistency.g_epic) << "\n";
  if (rep.witness)
    os << "witness (k=" << rep.witness_k << ")  " << detail::columns_string(rep.witness->matrix)
       << "\n";
  os << "note     " << rep.note << "\n";
  res.text = os.str();
  return res;
}

inline CommandResult cmd_lambda_table() {
  CommandResult res;
  auto table = classification_table();
  json rows = json::array();
  std::ostringstream os;
  os << "  r  lambda\n";
  for (int r = 0; r < 28; ++r) {
    rows.push_back({{"r", r}, {"lambda", table[r]}});
    os << std::setw(3) << r << "  " << table[r] << "\n";
  }
  res.report.result = {{"table", rows}};
  res.text = os.str();
  return res;
}

inline CommandResult cmd_lambda_sum(int lambda, int r) {
  CommandResult res;
  int value = lambda_connected_sum(lambda, r);
  res.report.result = {{"lambda", lambda}, {"r", r}, {"sum", value}};
  res.text = "lambda(M # Sigma_" + std::to_string(r) + ") = " + std::to_string(value) + "\n";
  return res;
}

inline CommandResult cmd_lambda_inertia() {
  CommandResult res;
  auto group = inertia_group();
  res.report.result = {{"inertia_group", group}, {"order", group.size()}};
  std::ostringstream os;
  os << "inertia group {";
  for (std::size_t i = 0; i < group.size(); ++i) os << (i ? "," : "") << group[i];
  os << "}  order " << group.size() << "\n";
  res.text = os.str();
  return res;
}

inline CommandResult cmd_audit(int max_rank, int bound, int cap) {
  CommandResult res;
  json rows = json::array();
  json discrepancies = json::array();
  json violations = json::array(); // (xi = 1, found) cells; must stay empty
  bool replay_ok = true;

  std::ostringstream os;
  os << "form  g                 xi  oracle   replay  beta(w,w)%4\n";
  for (int half = 1; 2 * half <= max_rank; ++half) {
    for (int family = 0; family < 2; ++family) {
      GramForm form = family == 0 ? d_reference(half) : h_reference(half);
      std::string name = (family == 0 ? "D^" : "H^") + std::to_string(half);
      const std::size_t rank = form.rank();
      for (std::uint32_t mask = 0; mask < (1u << rank); ++mask) {
        // lexicographic in the bit tuple: coordinate 0 is the leading digit
        ModTwoFunctional g;
        g.bits.resize(rank);
        for (std::size_t i = 0; i < rank; ++i) g.bits[i] = (mask >> (rank - 1 - i)) & 1u;
        int xi = family == 0 ? xi_odd(form, g, cap) : xi_even(form, g, cap);
        OracleOutcome oracle = lagrangian_oracle(form, g, bound);
        std::uint32_t wmask = f2::pack(mod2_dual_vector(form, g));
        int w_norm4 = norm_mod4_of_class(form, wmask);
        bool row_replay = true;
        if (oracle.verdict == OracleOutcome::Verdict::refuted) {
          row_replay = replay_certificate(form, g, *oracle.certificate);
          replay_ok = replay_ok && row_replay;
        }
        json row = {{"form", name},
                    {"g", bits_to_json(g.bits)},
                    {"xi", xi},
                    {"oracle", oracle_verdict_name(oracle.verdict)},
                    {"dual_norm_mod4", w_norm4}};
        if (oracle.verdict == OracleOutcome::Verdict::refuted)
          row["certificate_replay"] = row_replay;
        rows.push_back(row);
        if (xi == 0 && oracle.verdict == OracleOutcome::Verdict::refuted)
          discrepancies.push_back(row);
        if (xi == 1 && oracle.verdict == OracleOutcome::Verdict::found)
          violations.push_back(row);
        os << std::left << std::setw(5) << name << " " << std::setw(17)
           << detail::bits_string(g.bits) << " " << xi << "   " << std::setw(8)
           << oracle_verdict_name(oracle.verdict) << " "
           << (oracle.verdict == OracleOutcome::Verdict::refuted ? (row_replay ? "ok    " : "FAIL  ")
                                                                 : "-     ")
           << " " << w_norm4 << "\n";
      }
    }
  }
  os << "\ndiscrepancies (xi = 0 yet refuted): " << discrepancies.size() << "\n";
  for (const auto& d : discrepancies)
    os << "  " << d.at("form").get<std::string>() << " g " << d.at("g").dump() << "\n";
  os << "violations (xi = 1 yet found): " << violations.size() << "\n";
  os << "certificate replays " << (replay_ok ? "all ok" : "FAILED") << "\n";

  res.report.result = {{"rows", rows},
                       {"discrepancies", discrepancies},
                       {"violations", violations},
                       {"replay_ok", replay_ok}};
  res.text = os.str();
  if (!violations.empty() || !replay_ok) res.exit_code = kExitInternal;
  return res;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{std::string(kToolName) +
               " - exact arithmetic on symmetric unimodular bilinear forms"};
  app.footer(
      "Exit codes: 0 definitive verdict; 2 undecided within the configured bounds\n"
      "(Unknown verdicts, SearchBoundExceeded); 3 input error (ParseError,\n"
      "MissingField, NotSymmetric, DimensionMismatch, NotUnimodular, WrongParity,\n"
      "NonzeroSignature, PreconditionViolated, InvariantNonzero); 4 internal\n"
      "invariant violation.");

  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  int seed = 0;
  app.add_option("--seed", seed, "Seed for randomized sweeps (reserved; sweeps are canonical)");

  std::string path;
  int bound = 8;
  std::size_t k_max = 2;
  int max_rank = 4;
  int cap = kDefaultSearchCap;

  auto* analyze = app.add_subcommand("analyze", "Rank, determinant, parity and signature");
  analyze->add_option("file", path, "Input form file (JSON)")->required();

  auto* classify =
      app.add_subcommand("classify", "Basis transform onto the D^n or H^n reference form");
  classify->add_option("file", path, "Input form file (JSON)")->required();
  classify->add_option("--cap", cap, "Coefficient search cap (default 32)");

  auto* arf = app.add_subcommand("arf", "Arf-type invariant xi of (form, g)");
  arf->add_option("file", path, "Input form file (JSON); requires g")->required();
  arf->add_option("--cap", cap, "Coefficient search cap (default 32)");

  auto* lagrangian = app.add_subcommand(
      "lagrangian", "Decide whether ker g contains a Lagrangian (construction + oracle)");
  lagrangian->add_option("file", path, "Input form file (JSON); requires g")->required();
  lagrangian->add_option("--bound", bound, "Oracle coefficient bound (default 8)");
  lagrangian->add_option("--cap", cap, "Coefficient search cap (default 32)");

  auto* obstruction = app.add_subcommand(
      "obstruction", "Elementarity pipeline on (form, f, g) with consistency checks");
  obstruction->add_option("file", path, "Input form file (JSON); requires f and g")->required();
  obstruction->add_option("--k-max", k_max, "Maximum stabilization depth (default 2)");
  obstruction->add_option("--bound", bound, "Oracle coefficient bound (default 8)");
  obstruction->add_option("--cap", cap, "Coefficient search cap (default 32)");

  auto* lambda = app.add_subcommand("lambda", "Homotopy 7-sphere connected-sum arithmetic");
  bool table = false, inertia = false;
  std::vector<int> sum_args;
  lambda->add_flag("--table", table, "Print the 28-row (r, lambda) table");
  lambda->add_flag("--inertia", inertia, "Print the inertia group inside Z/28");
  lambda->add_option("--sum", sum_args, "lambda r: evaluate lambda(M # Sigma_r)")
      ->expected(2);

  auto* audit = app.add_subcommand(
      "audit", "Sweep all functionals on the reference forms and cross-check xi vs oracle");
  audit->add_option("--max-rank", max_rank, "Largest reference rank to sweep (default 4)");
  audit->add_option("--bound", bound, "Oracle coefficient bound (default 8)");
  audit->add_option("--cap", cap, "Coefficient search cap (default 32)");

  app.require_subcommand(0, 1);

  std::vector<char*> argv;
  std::string prog = kToolName;
  argv.push_back(prog.data());
  std::vector<std::string> own = args;
  for (auto& a : own) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  if (app.get_subcommands().empty()) {
    out << app.help();
    return kExitOk;
  }

  auto started = std::chrono::steady_clock::now();
  CommandResult res;
  try {
    if (analyze->parsed()) res = cmd_analyze(path);
    else if (classify->parsed()) res = cmd_classify(path, cap);
    else if (arf->parsed()) res = cmd_arf(path, cap);
    else if (lagrangian->parsed()) res = cmd_lagrangian(path, bound, cap);
    else if (obstruction->parsed()) res = cmd_obstruction(path, k_max, bound, cap);
    else if (lambda->parsed()) {
      if (table) res = cmd_lambda_table();
      else if (inertia) res = cmd_lambda_inertia();
      else if (sum_args.size() == 2) res = cmd_lambda_sum(sum_args[0], sum_args[1]);
      else throw Error(errc::missing_field, "lambda needs one of --table, --inertia, --sum");
    } else if (audit->parsed()) {
      res = cmd_audit(max_rank, bound, cap);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::internal: return kExitInternal;
      case errc::search_bound_exceeded: return kExitUnknown;
      default: return kExitInput;
    }
  }
  auto elapsed = std::chrono::steady_clock::now() - started;
  res.report.timing_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  res.report.command = detail::join(args);
  res.report.input_digest = path.empty() ? fnv1a_digest(res.report.command) : file_digest(path);

  if (format == "json")
    out << report_to_json(res.report).dump(2) << "\n";
  else
    out << res.text;
  return res.exit_code;
}

} // namespace xiform::cli
