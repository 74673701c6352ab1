// Batch front-end: parse or construct an operator, block-encode it with the
// chosen method, count resources, verify against the Fock oracle, and sweep
// parameters into CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "lobe/lcu.hpp"
#include "lobe/lobe_synth.hpp"
#include "lobe/models.hpp"
#include "lobe/pauli.hpp"
#include "lobe/verify.hpp"

using json = nlohmann::json;

namespace {

struct Options {
  std::string expr;
  std::string model;
  std::string coeff_file;
  int omega = 3;
  int modes = 1;       // B for component models, or a minimum mode count
  int resolution = 1;  // K for phi4 / yukawa
  std::string method = "lobe";
  std::string elbow_mode = "measured";
  bool uncontrolled = false;
  bool verify = false;
  double tolerance = 1e-10;
  std::string sweep;
  std::string out;
  std::string format;
  std::string dump_circuit;
  double g = 1.0;
  double c_f = 1.0;
  double c_b = 1.0;
};

int sim_qubit_cap() {
  if (const char* env = std::getenv("LOBE_SIM_QUBIT_CAP")) return std::atoi(env);
  return 24;
}

lobe::OperatorExpr build_operator(const Options& opt) {
  using namespace lobe;
  if (!opt.expr.empty()) return parse_operator(opt.expr);
  CoefficientTable coeffs;
  if (!opt.coeff_file.empty()) coeffs = load_coefficients(opt.coeff_file);
  if (opt.model == "quartic") return quartic_oscillator(opt.g);
  if (opt.model == "static_yukawa") return static_yukawa(opt.c_f, opt.c_b, opt.g);
  if (opt.model == "phi4") return phi4_terms(opt.resolution, coeffs);
  if (opt.model == "yukawa") return yukawa_terms(opt.resolution, coeffs);
  // component benchmark families
  if (opt.model == "fermionic_hc") {
    std::string text;
    for (int m = 0; m < opt.modes; ++m) text += "b" + std::to_string(m) + " ";
    text += "+ h.c.";
    return parse_operator(text);
  }
  if (opt.model == "bosonic_annihilation") return parse_operator("a0");
  if (opt.model == "bosonic_hc") {
    std::string text;
    for (int m = 0; m < opt.modes; ++m) text += "a" + std::to_string(m) + " ";
    text += "+ h.c.";
    return parse_operator(text);
  }
  throw std::invalid_argument("unknown model: " + opt.model);
}

lobe::BlockEncoding encode(const Options& opt, const lobe::OperatorExpr& expr,
                           const lobe::ModeSpec& modes) {
  using namespace lobe;
  const bool controlled = !opt.uncontrolled;
  if (opt.method == "lobe") return encode_hamiltonian(expr, {modes, controlled});
  if (opt.method == "pauli_expansion")
    return pauli_expansion_encode(expr, modes, controlled);
  if (opt.method == "piecewise_pauli")
    return piecewise_pauli_encode(expr, modes, controlled);
  throw std::invalid_argument("unknown method: " + opt.method);
}

lobe::ElbowMode elbow_of(const Options& opt) {
  if (opt.elbow_mode == "unitary") return lobe::ElbowMode::unitary;
  if (opt.elbow_mode == "measured") return lobe::ElbowMode::measured;
  throw std::invalid_argument("unknown elbow mode: " + opt.elbow_mode);
}

json report_json(const lobe::ResourceReport& r) {
  return json{{"t_count", r.t_count},
              {"rotation_count", r.rotation_count},
              {"clifford_count", r.clifford_count},
              {"be_ancillae", r.be_ancillae},
              {"clean_ancillae_peak", r.clean_ancillae_peak},
              {"total_qubits", r.total_qubits},
              {"lambda", r.lambda}};
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot open output file: " + opt.out);
    f << text << "\n";
  }
}

int cmd_encode(const Options& opt) {
  using namespace lobe;
  OperatorExpr expr = build_operator(opt);
  ModeSpec modes = infer_modes(expr, opt.omega);
  BlockEncoding be = encode(opt, expr, modes);
  ResourceReport rep = be.report(elbow_of(opt));

  json out;
  out["method"] = be.method;
  out["operator"] = to_string(expr);
  out["elbow_mode"] = opt.elbow_mode;
  out["report"] = report_json(rep);
  out["report"]["t_compiled"] = rep.t_count;
  out["report_measured"] = report_json(be.report(lobe::ElbowMode::measured));
  out["report_unitary"] = report_json(be.report(lobe::ElbowMode::unitary));
  if (opt.method == "lobe") {
    OperatorExpr norm = normalize(expr);
    if (norm.groups.size() == 1) {
      const TermShape shape = classify(norm.groups[0]);
      const LobeCostFormula f = lobe_cost_formula(shape, opt.omega);
      out["formula"] = {{"t_formula", f.t_count},
                        {"t_is_bound", f.t_is_bound},
                        {"rotation_bound", f.rotation_bound},
                        {"be_ancillae", f.be_ancillae},
                        {"clean_ancillae", f.clean_ancillae},
                        {"lambda", f.lambda}};
    }
  }
  if (!opt.dump_circuit.empty()) {
    std::ofstream f(opt.dump_circuit);
    serialize(be.circuit, f);
  }
  int exit_code = 0;
  if (opt.verify) {
    VerificationReport v =
        verify_encoding(be, expr, modes, opt.tolerance, 14, std::nullopt,
                        sim_qubit_cap());
    out["verification"] = json::parse(verification_report_json(v));
    if (!v.passed) exit_code = 1;
  }
  write_output(opt, out.dump(2));
  return exit_code;
}

int cmd_verify(const Options& opt) {
  using namespace lobe;
  OperatorExpr expr = build_operator(opt);
  ModeSpec modes = infer_modes(expr, opt.omega);
  BlockEncoding be = encode(opt, expr, modes);
  VerificationReport v = verify_encoding(be, expr, modes, opt.tolerance, 14,
                                         std::nullopt, sim_qubit_cap());
  write_output(opt, verification_report_json(v));
  return v.passed ? 0 : 1;
}

struct SweepRow {
  std::string param;
  double value = 0;
  std::string method;
  lobe::ResourceReport report;
  double l2_norm = -1.0;
};

std::string csv_of(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "param,value,method,t_count,rotation_count,clifford_count,be_ancillae,"
        "clean_ancillae_peak,total_qubits,lambda,l2_norm\n";
  os.precision(12);
  for (const auto& r : rows) {
    os << r.param << ',' << r.value << ',' << r.method << ',' << r.report.t_count
       << ',' << r.report.rotation_count << ',' << r.report.clifford_count << ','
       << r.report.be_ancillae << ',' << r.report.clean_ancillae_peak << ','
       << r.report.total_qubits << ',' << r.report.lambda << ',';
    if (r.l2_norm >= 0.0) os << r.l2_norm;
    os << '\n';
  }
  return os.str();
}

int cmd_sweep(const Options& opt) {
  using namespace lobe;
  const auto eq = opt.sweep.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--sweep expects <param>=<v1,v2,...>");
  const std::string param = opt.sweep.substr(0, eq);
  std::vector<double> values;
  {
    std::istringstream ss(opt.sweep.substr(eq + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
  }
  if (values.empty()) throw std::invalid_argument("empty sweep value list");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1])
      throw std::invalid_argument("sweep values must be strictly increasing");

  std::vector<std::string> methods;
  {
    std::istringstream ss(opt.method);
    std::string tok;
    while (std::getline(ss, tok, ',')) methods.push_back(tok);
  }

  auto run_point = [&](double value, const std::string& method) {
    Options point = opt;
    point.method = method;
    if (param == "omega")
      point.omega = int(value);
    else if (param == "B" || param == "modes")
      point.modes = int(value);
    else if (param == "K")
      point.resolution = int(value);
    else
      throw std::invalid_argument("unknown sweep parameter: " + param);
    OperatorExpr expr = build_operator(point);
    ModeSpec modes = infer_modes(expr, point.omega);
    BlockEncoding be = encode(point, expr, modes);
    SweepRow row;
    row.param = param;
    row.value = value;
    row.method = method;
    row.report = be.report(elbow_of(point));
    if (modes.dim() <= 4096)
      row.l2_norm = to_matrix(expr, modes).spectral_norm();
    return row;
  };

  std::vector<std::future<SweepRow>> futures;
  for (double v : values)
    for (const auto& m : methods)
      futures.push_back(std::async(std::launch::async, run_point, v, m));
  std::vector<SweepRow> rows;
  for (auto& f : futures) rows.push_back(f.get());

  if (opt.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = report_json(r.report);
      row["param"] = r.param;
      row["value"] = r.value;
      row["method"] = r.method;
      if (r.l2_norm >= 0) row["l2_norm"] = r.l2_norm;
      arr.push_back(row);
    }
    write_output(opt, arr.dump(2));
  } else {
    write_output(opt, csv_of(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOBE block-encoding compiler and resource counter"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--expr", opt.expr, "operator expression");
    cmd->add_option("--model", opt.model,
                    "quartic | static_yukawa | phi4 | yukawa | fermionic_hc | "
                    "bosonic_annihilation | bosonic_hc");
    cmd->add_option("--coefficients", opt.coeff_file, "coefficient CSV file");
    cmd->add_option("--omega", opt.omega, "bosonic occupation cutoff");
    cmd->add_option("--modes", opt.modes, "active mode count for component models");
    cmd->add_option("--resolution", opt.resolution, "light-front resolution K");
    cmd->add_option("--method", opt.method,
                    "lobe | pauli_expansion | piecewise_pauli");
    cmd->add_option("--elbow-mode", opt.elbow_mode, "unitary | measured");
    cmd->add_flag("--uncontrolled", opt.uncontrolled,
                  "strip the block-encoding control qubit");
    cmd->add_option("--tolerance", opt.tolerance, "verification tolerance");
    cmd->add_option("--g", opt.g, "coupling strength");
    cmd->add_option("--cf", opt.c_f, "fermion mass constant");
    cmd->add_option("--cb", opt.c_b, "boson mass constant");
    cmd->add_option("--out", opt.out, "output file (default stdout)");
    cmd->add_option("--format", opt.format, "json | csv");
  };

  CLI::App* enc = app.add_subcommand("encode", "compile and count resources");
  add_common(enc);
  enc->add_flag("--verify", opt.verify, "also verify against the Fock oracle");
  enc->add_option("--dump-circuit", opt.dump_circuit, "write the gate list");

  CLI::App* ver = app.add_subcommand("verify", "compile and certify the block");
  add_common(ver);

  CLI::App* swp = app.add_subcommand("sweep", "sweep a parameter to CSV");
  add_common(swp);
  swp->add_option("--sweep", opt.sweep, "<param>=<v1,v2,...> with param in omega|modes|B|K")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (enc->parsed()) return cmd_encode(opt);
    if (ver->parsed()) return cmd_verify(opt);
    if (swp->parsed()) return cmd_sweep(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
