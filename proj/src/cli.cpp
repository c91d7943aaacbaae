#include "jspec/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "jspec/bounds.hpp"
#include "jspec/clifford.hpp"
#include "jspec/generators.hpp"
#include "jspec/tuple_io.hpp"

namespace jspec::cli {

using nlohmann::json;

namespace {

struct ToleranceFlags {
  Tolerances tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--commutation-tol", tol.commutation, "relative commutator tolerance")
        ->capture_default_str();
    cmd->add_option("--normality-tol", tol.normality, "relative normality tolerance")
        ->capture_default_str();
    cmd->add_option("--diagonalization-tol", tol.diagonalization,
                    "relative off-diagonal residual tolerance")
        ->capture_default_str();
    cmd->add_option("--cluster-tol", tol.cluster, "relative eigenvalue cluster threshold")
        ->capture_default_str();
    cmd->add_option("--max-eigvec-cond", tol.max_eigenvector_condition,
                    "eigenvector condition number beyond which a tuple is defective")
        ->capture_default_str();
  }
};

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  Eigen::Index n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string kind = "normal";
  std::optional<double> perturb;
  std::string perturb_class;
  std::string out;
  std::string out_b;
  GeneratorConfig cfg;
};

PerturbClass parse_class(const std::string& s) {
  if (s == "normal") return PerturbClass::normal;
  if (s == "arbitrary") return PerturbClass::arbitrary_commuting;
  if (s == "diagonalizable") return PerturbClass::diagonalizable;
  throw Error(ErrorCode::InvalidArgument, "unknown perturbation class '" + s + "'");
}

int cmd_gen(const GenOptions& o, std::ostream& out) {
  if (o.n < 1 || o.m < 1) throw Error(ErrorCode::InvalidArgument, "--n and --m must be >= 1");
  if (o.perturb && o.out_b.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--perturb needs --out-b for the perturbed tuple");
  }

  if (o.kind == "extremal") {
    if (o.n < 2) throw Error(ErrorCode::InvalidArgument, "extremal example needs --n >= 2");
    auto [a, b] = extremal_shift_example(o.n, o.m);
    json meta = {{"generator", "extremal_shift_example"}, {"n", o.n}, {"m", o.m}};
    write_tuple_file(o.out, {a, meta});
    if (!o.out_b.empty()) {
      meta["role"] = "B";
      write_tuple_file(o.out_b, {b, meta});
    }
    out << "wrote extremal shift pair n=" << o.n << " m=" << o.m << "\n";
    return kSuccess;
  }

  GeneratorConfig cfg = o.cfg;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.seed = o.seed;
  GeneratedTuple a;
  std::string generator;
  std::string default_class;
  if (o.kind == "normal") {
    a = random_commuting_normal_tuple(cfg);
    generator = "random_commuting_normal_tuple";
    default_class = "normal";
  } else if (o.kind == "diagonalizable") {
    a = random_commuting_diagonalizable_tuple(cfg);
    generator = "random_commuting_diagonalizable_tuple";
    default_class = "diagonalizable";
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --kind '" + o.kind + "'");
  }
  write_tuple_file(o.out, {a.tuple, json{{"generator", generator}, {"seed", o.seed}}});

  if (!o.out_b.empty()) {
    const std::string cls = o.perturb_class.empty() ? default_class : o.perturb_class;
    cfg.perturbation_scale = o.perturb.value_or(0.0);
    const MatrixTuple b = perturb_within_class(a, cfg, parse_class(cls));
    write_tuple_file(o.out_b, {b, json{{"generator", "perturb_within_class"},
                                       {"base_generator", generator},
                                       {"class", cls},
                                       {"scale", cfg.perturbation_scale},
                                       {"seed", o.seed}}});
  }
  out << "wrote " << o.kind << " tuple n=" << o.n << " m=" << o.m << " seed=" << o.seed << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumOptions {
  std::string input;
  std::string method = "normal";
  std::uint64_t seed = 0;
  bool json_output = false;
  ToleranceFlags flags;
};

std::string complex_text(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

int cmd_spectrum(const SpectrumOptions& o, std::ostream& out) {
  const TupleFile file = read_tuple_file(o.input);
  JointSpectrum spec;
  if (o.method == "normal") {
    Rng rng(o.seed, Stream::simultaneous_diagonalize);
    spec = simultaneous_diagonalize(file.tuple, rng, o.flags.tol);
  } else if (o.method == "general") {
    Rng rng(o.seed, Stream::diagonalize_general);
    spec = diagonalize_general(file.tuple, rng, o.flags.tol);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --method '" + o.method + "'");
  }
  const double kappa = condition_number(spec.transform);
  if (o.json_output) {
    out << json{{"n", spec.n},
                {"m", spec.m},
                {"method", o.method},
                {"eigenvalues", complex_rows_to_json(spec.eigenvalues)},
                {"residual", spec.residual},
                {"transform_condition", kappa}}
               .dump(2)
        << "\n";
    return kSuccess;
  }
  out << "joint spectrum (n=" << spec.n << ", m=" << spec.m << ", method=" << o.method << ")\n";
  for (Eigen::Index j = 0; j < spec.eigenvalues.rows(); ++j) {
    out << "  " << (j + 1) << ":";
    for (Eigen::Index k = 0; k < spec.eigenvalues.cols(); ++k) {
      out << (k == 0 ? "  (" : ", ") << complex_text(spec.eigenvalues(j, k));
    }
    out << ")\n";
  }
  out << "residual: " << format_double(spec.residual) << "\n";
  out << "transform condition number: " << format_double(kappa) << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyFlags {
  std::string input;
  std::string perturbed;
  std::string bound = "normal";
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool json_output = false;
  std::string report_path;
  ToleranceFlags flags;
};

void print_report_text(const BoundReport& r, std::ostream& out) {
  out << "bound:        " << to_string(r.kind) << "\n";
  out << "lhs:          " << format_double(r.lhs) << "\n";
  out << "rhs:          " << format_double(r.rhs) << "\n";
  out << "slack:        " << format_double(r.slack) << "\n";
  out << "tolerance:    " << format_double(r.tolerance) << "\n";
  out << "holds:        " << (r.holds ? "true" : "false") << "\n";
  out << "permutation: ";
  for (int p : r.permutation) out << " " << (p + 1);
  out << "\n";
  if (r.kind == BoundKind::diagonalizable) {
    out << "kappa(P):     " << format_double(r.kappa_p) << "\n";
    out << "kappa(Q):     " << format_double(r.kappa_q) << "\n";
  }
}

int cmd_verify(const VerifyFlags& o, std::ostream& out) {
  const TupleFile a = read_tuple_file(o.input);
  const TupleFile b = read_tuple_file(o.perturbed);
  VerifyOptions opts;
  opts.tolerances = o.flags.tol;
  opts.verification_tolerance = o.tol;
  const BoundReport r = verify_bound(a.tuple, b.tuple, parse_bound_kind(o.bound), o.seed, opts);
  const json doc = report_to_json(r);
  if (!o.report_path.empty()) write_text_file(o.report_path, doc.dump(2) + "\n");
  if (o.json_output) {
    out << doc.dump(2) << "\n";
  } else {
    print_report_text(r, out);
  }
  return r.holds ? kSuccess : kBoundViolated;
}

// ---------------------------------------------------------------------------
// clifford

struct CliffordFlags {
  std::string input;
  std::size_t limit = kDefaultMaterializeLimit;
  bool require_oracle = false;
  bool json_output = false;
};

int cmd_clifford(const CliffordFlags& o, std::ostream& out) {
  const TupleFile file = read_tuple_file(o.input);
  const MatrixTuple& t = file.tuple;
  const CliffordOperator op = cliff(t);

  double tuple_sq = 0.0;
  for (const auto& a : t.matrices()) tuple_sq += a.squaredNorm();
  const double identity = std::sqrt(std::ldexp(tuple_sq, static_cast<int>(t.m())));
  const double structured = clifford_frobenius_norm(op);
  std::optional<double> oracle;
  try {
    oracle = materialized_frobenius_norm(op, o.limit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CapacityExceeded || o.require_oracle) throw;
  }
  const Complex trace = clifford_trace(op);

  if (o.json_output) {
    json doc = {{"n", t.n()},
                {"m", t.m()},
                {"norm_identity", identity},
                {"structured", structured},
                {"oracle", oracle ? json(*oracle) : json(nullptr)},
                {"difference", oracle ? json(std::abs(*oracle - identity)) : json(nullptr)},
                {"trace", {trace.real(), trace.imag()}}};
    out << doc.dump(2) << "\n";
    return kSuccess;
  }
  out << "||Cliff(A)||_F  identity 2^m sum_k ||A_k||_F^2: " << format_double(identity) << "\n";
  out << "||Cliff(A)||_F  block structure:               " << format_double(structured) << "\n";
  if (oracle) {
    out << "||Cliff(A)||_F  materialized oracle:           " << format_double(*oracle) << "\n";
    out << "difference (oracle - identity):                "
        << format_double(std::abs(*oracle - identity)) << "\n";
  } else {
    out << "||Cliff(A)||_F  materialized oracle:           skipped (2^m n exceeds limit "
        << o.limit << ")\n";
  }
  out << "trace Cliff(A): " << complex_text(trace) << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentFlags {
  std::size_t trials = 100;
  Eigen::Index n = 4;
  std::size_t m = 2;
  std::string bound = "normal";
  std::uint64_t seed = 0;
  double perturb_scale = 1e-2;
  std::string csv;
  unsigned threads = 1;
  ToleranceFlags flags;
  double tol = 1e-8;
};

struct TrialRow {
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double ratio = 0.0;
  bool holds = false;
};

TrialRow run_trial(const ExperimentFlags& o, BoundKind kind, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.seed = seed;
  cfg.perturbation_scale = o.perturb_scale;
  GeneratedTuple a;
  PerturbClass cls = PerturbClass::normal;
  switch (kind) {
    case BoundKind::normal:
      a = random_commuting_normal_tuple(cfg);
      break;
    case BoundKind::remark:
      a = random_commuting_normal_tuple(cfg);
      cls = PerturbClass::arbitrary_commuting;
      break;
    case BoundKind::diagonalizable:
      a = random_commuting_diagonalizable_tuple(cfg);
      cls = PerturbClass::diagonalizable;
      break;
  }
  const MatrixTuple b = perturb_within_class(a, cfg, cls);
  VerifyOptions opts;
  opts.tolerances = o.flags.tol;
  opts.verification_tolerance = o.tol;
  const BoundReport r = verify_bound(a.tuple, b, kind, seed, opts);
  TrialRow row{seed, r.lhs, r.rhs, r.slack, 0.0, r.holds};
  if (r.rhs > 0.0) {
    row.ratio = r.lhs / r.rhs;
  } else {
    row.ratio = r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return row;
}

int cmd_experiment(const ExperimentFlags& o, std::ostream& out) {
  if (o.n < 1 || o.m < 1) throw Error(ErrorCode::InvalidArgument, "--n and --m must be >= 1");
  const BoundKind kind = parse_bound_kind(o.bound);

  std::vector<std::optional<TrialRow>> rows(o.trials);
  std::vector<std::string> failures(o.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < o.trials; i = next++) {
      try {
        rows[i] = run_trial(o, kind, o.seed + i);
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(o.threads, 64));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < o.trials; ++i) {
    if (!rows[i]) {
      throw Error(ErrorCode::DiagonalizationFailed,
                  "trial " + std::to_string(i) + " failed: " + failures[i]);
    }
  }

  std::string csv = "trial,seed,lhs,rhs,slack,ratio,holds\n";
  std::vector<double> ratios;
  bool all_hold = true;
  for (std::size_t i = 0; i < o.trials; ++i) {
    const TrialRow& r = *rows[i];
    csv += std::to_string(i) + "," + std::to_string(r.seed) + "," + format_double(r.lhs) + "," +
           format_double(r.rhs) + "," + format_double(r.slack) + "," + format_double(r.ratio) +
           "," + (r.holds ? "true" : "false") + "\n";
    ratios.push_back(r.ratio);
    all_hold = all_hold && r.holds;
  }
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t k = ratios.size();
    const double median =
        k % 2 == 1 ? ratios[k / 2] : 0.5 * (ratios[k / 2 - 1] + ratios[k / 2]);
    csv += "# summary trials=" + std::to_string(k) + " min_ratio=" + format_double(ratios.front()) +
           " median_ratio=" + format_double(median) + " max_ratio=" + format_double(ratios.back()) +
           " all_hold=" + (all_hold ? "true" : "false") + "\n";
  }
  if (o.csv.empty()) {
    out << csv;
  } else {
    write_text_file(o.csv, csv);
    out << "wrote " << o.trials << " trials to " << o.csv << (all_hold ? "" : " (violations!)")
        << "\n";
  }
  return all_hold ? kSuccess : kBoundViolated;
}

// ---------------------------------------------------------------------------
// birkhoff

struct BirkhoffFlags {
  std::string input;
  std::string perturbed;
  std::uint64_t seed = 0;
  bool json_output = false;
  ToleranceFlags flags;
};

int cmd_birkhoff(const BirkhoffFlags& o, std::ostream& out) {
  const TupleFile a = read_tuple_file(o.input);
  const TupleFile b = read_tuple_file(o.perturbed);
  Rng rng_a(o.seed, Stream::simultaneous_diagonalize);
  Rng rng_b(o.seed, Stream::simultaneous_diagonalize);
  const JointSpectrum sa = simultaneous_diagonalize(a.tuple, rng_a, o.flags.tol);
  const JointSpectrum sb = simultaneous_diagonalize(b.tuple, rng_b, o.flags.tol);
  const OverlapMatrix w = overlap_matrix(sa, sb);
  const BirkhoffDecomposition d = birkhoff_decompose(w);
  const json doc = birkhoff_to_json(d, w);
  if (o.json_output) {
    out << doc.dump(2) << "\n";
    return kSuccess;
  }
  out << "W (w_ij = trace(P_i Q_j)):\n";
  for (Eigen::Index i = 0; i < w.n(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < w.n(); ++j) out << " " << format_double(w.w(i, j));
    out << "\n";
  }
  out << "terms:\n";
  for (const auto& t : d.terms) {
    out << "  " << format_double(t.weight) << "  [";
    for (std::size_t i = 0; i < t.permutation.size(); ++i) {
      out << (i ? " " : "") << (t.permutation[i] + 1);
    }
    out << "]\n";
  }
  out << "reconstruction error: " << format_double(doc["reconstruction_error"].get<double>())
      << "\n";
  return kSuccess;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io:
    case ErrorCode::Parse:
      return kIoFailure;
    case ErrorCode::CapacityExceeded:
      return kCapacityExceeded;
    case ErrorCode::InvalidArgument:
      return kUsage;
    default:
      return kHypothesisFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint spectra of commuting matrix tuples and relative perturbation bounds",
               "jspec"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate tuple files");
  gen_cmd->add_option("--n", gen.n, "matrix size")->required();
  gen_cmd->add_option("--m", gen.m, "tuple length")->required();
  gen_cmd->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--kind", gen.kind, "tuple family")
      ->check(CLI::IsMember({"normal", "diagonalizable", "extremal"}))
      ->capture_default_str();
  gen_cmd->add_option("--perturb", gen.perturb, "perturbation scale for the B tuple");
  gen_cmd->add_option("--class", gen.perturb_class, "perturbation class")
      ->check(CLI::IsMember({"normal", "arbitrary", "diagonalizable"}));
  gen_cmd->add_option("--out", gen.out, "output path for A")->required();
  gen_cmd->add_option("--out-b", gen.out_b, "output path for the perturbed tuple B");
  gen_cmd->add_option("--min-modulus", gen.cfg.eigenvalue_min_modulus)->capture_default_str();
  gen_cmd->add_option("--box", gen.cfg.eigenvalue_box)->capture_default_str();
  gen_cmd->add_option("--max-condition", gen.cfg.max_condition)->capture_default_str();

  SpectrumOptions spectrum;
  auto* spec_cmd = app.add_subcommand("spectrum", "print the joint spectrum of a tuple");
  spec_cmd->add_option("--input", spectrum.input)->required();
  spec_cmd->add_option("--method", spectrum.method)
      ->check(CLI::IsMember({"normal", "general"}))
      ->capture_default_str();
  spec_cmd->add_option("--seed", spectrum.seed)->capture_default_str();
  spec_cmd->add_flag("--json", spectrum.json_output);
  spectrum.flags.attach(spec_cmd);

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "certify a perturbation bound for (A, B)");
  verify_cmd->add_option("--input", verify.input, "tuple A")->required();
  verify_cmd->add_option("--perturbed", verify.perturbed, "tuple B")->required();
  verify_cmd->add_option("--bound", verify.bound)
      ->check(CLI::IsMember({"normal", "remark", "diag"}))
      ->capture_default_str();
  verify_cmd->add_option("--tol", verify.tol, "relative verification tolerance")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--out", verify.report_path, "write the JSON report here");
  verify_cmd->add_flag("--json", verify.json_output);
  verify.flags.attach(verify_cmd);

  CliffordFlags clifford;
  auto* cliff_cmd = app.add_subcommand("clifford", "Clifford operator norm and trace diagnostics");
  cliff_cmd->add_option("--input", clifford.input)->required();
  cliff_cmd->add_option("--materialize-limit", clifford.limit)->capture_default_str();
  cliff_cmd->add_flag("--require-oracle", clifford.require_oracle);
  cliff_cmd->add_flag("--json", clifford.json_output);

  ExperimentFlags experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "batch of seeded bound verifications");
  exp_cmd->add_option("--trials", experiment.trials)->capture_default_str();
  exp_cmd->add_option("--n", experiment.n)->capture_default_str();
  exp_cmd->add_option("--m", experiment.m)->capture_default_str();
  exp_cmd->add_option("--bound", experiment.bound)
      ->check(CLI::IsMember({"normal", "remark", "diag"}))
      ->capture_default_str();
  exp_cmd->add_option("--seed", experiment.seed)->capture_default_str();
  exp_cmd->add_option("--perturb-scale", experiment.perturb_scale)->capture_default_str();
  exp_cmd->add_option("--csv", experiment.csv, "output CSV path (stdout when omitted)");
  exp_cmd->add_option("--threads", experiment.threads)->capture_default_str();
  exp_cmd->add_option("--tol", experiment.tol, "relative verification tolerance")
      ->capture_default_str();
  experiment.flags.attach(exp_cmd);

  BirkhoffFlags birkhoff;
  auto* bk_cmd = app.add_subcommand("birkhoff", "overlap matrix W and its Birkhoff decomposition");
  bk_cmd->add_option("--input", birkhoff.input)->required();
  bk_cmd->add_option("--perturbed", birkhoff.perturbed)->required();
  bk_cmd->add_option("--seed", birkhoff.seed)->capture_default_str();
  bk_cmd->add_flag("--json", birkhoff.json_output);
  birkhoff.flags.attach(bk_cmd);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*spec_cmd) return cmd_spectrum(spectrum, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*cliff_cmd) return cmd_clifford(clifford, out);
    if (*exp_cmd) return cmd_experiment(experiment, out);
    if (*bk_cmd) return cmd_birkhoff(birkhoff, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace jspec::cli
