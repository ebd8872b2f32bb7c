#include "oil/cli.hpp"

#include "oil/extension.hpp"
#include "oil/random.hpp"
#include "oil/report.hpp"
#include "oil/stinespring.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

namespace oil {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kDilationTol = 1e-10;

const Symbol kZ = Symbol::monomial(1);
const Symbol kZbar = Symbol::monomial(-1);

Symbol z_plus_zbar() { return kZ + kZbar; }

json window_json(const Window& w) { return json::array({w.lo, w.hi}); }

Window window_or(const RunConfig& c, int lo, int hi) {
  return make_window(c.window_lo.value_or(lo), c.window_hi.value_or(hi));
}

Symbol symbol_or(const std::string& path, const Symbol& fallback) {
  return path.empty() ? fallback : load_symbol_file(path);
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (steps == 1) return {lo};
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  return out;
}

// ---------------------------------------------------------------------------

Report run_defect(const RunConfig& c) {
  const Symbol a = symbol_or(c.symbol_path, kZ);
  const Symbol b = symbol_or(c.symbol_b_path, kZbar);
  const Window w = window_or(c, -40, 40);
  Report r;
  r.params = {{"window", window_json(w)}, {"a", symbol_to_json(a)}, {"b", symbol_to_json(b)}};

  const SplittingDefect d = splitting_defect(a, b, w);
  const auto p = hardy_projection(w);
  const auto hankel_product = p * multiplication_operator(a, w) * complement_projection(w) *
                              multiplication_operator(b, w) * p;
  const double hankel_residual = guard_norm(d.product_defect - hankel_product, d.guard);
  const double adjoint_residual = guard_norm(d.adjoint_defect, d.guard);
  const double rotation = rotation_equivariance_residual(a, 1.0, w);

  const Matrix guarded =
      d.product_defect.entries.block(d.guard.begin, d.guard.begin, d.guard.size(), d.guard.size());
  r.results = {{"defect_guard_norm", guarded.norm()},
               {"defect_rank", numerical_rank(guarded)},
               {"guard_modes", json::array({w.mode_at(d.guard.begin),
                                            w.mode_at(d.guard.end - 1)})}};
  r.residuals = {{"hankel_product", hankel_residual},
                 {"adjoint_defect", adjoint_residual},
                 {"rotation_equivariance", rotation}};
  r.pass = hankel_residual <= kExactTol && adjoint_residual <= kExactTol && rotation <= kExactTol;
  return r;
}

struct SpectrumRun {
  Report report;
  SingularSpectrum spectrum;
};

SpectrumRun run_spectrum(const RunConfig& c) {
  const Symbol a = symbol_or(c.symbol_path, z_plus_zbar());
  const Window w = window_or(c, -64, 63);
  if (!(c.p > 0.0)) throw std::invalid_argument("p must be positive");
  static const std::map<std::string, std::function<WindowedOperator(const Symbol&, const Window&)>>
      builders{{"multiplication", multiplication_operator},
               {"toeplitz", toeplitz_compress},
               {"hankel", hankel_operator},
               {"commutator", projection_commutator}};
  const auto it = builders.find(c.op);
  if (it == builders.end()) throw UsageError("unknown operator '" + c.op + "'");
  const WindowedOperator op = it->second(a, w);

  SpectrumRun run;
  run.spectrum = singular_values(op);
  Report& r = run.report;
  r.params = {{"window", window_json(w)}, {"symbol", symbol_to_json(a)}, {"operator", c.op},
              {"p", c.p}};
  json results = {{"source", run.spectrum.source_label},
                  {"schatten_norm", schatten_norm(run.spectrum, c.p)},
                  {"rank", numerical_rank(op.entries)},
                  {"singular_values", run.spectrum.values}};
  if (run.spectrum.size() >= 2) {
    results["dixmier_estimate"] = dixmier_estimate(run.spectrum, run.spectrum.size());
  }
  r.results = std::move(results);
  r.pass = true;
  return run;
}

Report run_stinespring(const RunConfig& c) {
  const int pairs = c.pairs > 0 ? c.pairs : 20;
  if (c.maps < 1 || pairs < 1) throw std::invalid_argument("maps and pairs must be >= 1");
  Report r;
  r.params = {{"n", c.dim_in}, {"m", c.dim_out}, {"kraus", c.kraus}, {"maps", c.maps},
              {"pairs", pairs}, {"p", c.p}};

  double compression = 0.0, homomorphism = 0.0, adjoint = 0.0, product = 0.0, square = 0.0;
  for (int i = 0; i < c.maps; ++i) {
    const std::uint64_t map_seed = derive_seed(c.seed, static_cast<std::uint64_t>(i));
    const DilationData d =
        dilation_build(random_cp_contraction(c.dim_in, c.dim_out, c.kraus, map_seed));
    for (int j = 0; j < pairs; ++j) {
      const auto base = static_cast<std::uint64_t>(3 * j);
      Matrix a = random_gaussian(c.dim_in, c.dim_in, derive_seed(map_seed, base));
      Matrix b = random_gaussian(c.dim_in, c.dim_in, derive_seed(map_seed, base + 1));
      a /= operator_norm(a);
      b /= operator_norm(b);
      const Matrix h = random_hermitian(c.dim_in, derive_seed(map_seed, base + 2));
      compression = std::max(compression, compression_residual(d, a));
      homomorphism = std::max(homomorphism, homomorphism_residual(d, a, b));
      adjoint = std::max(adjoint, adjoint_residual(d, a));
      const DefectResiduals res = defect_identity_residuals(d, a, b);
      product = std::max(product, res.product);
      square = std::max(square, defect_identity_residuals(d, h, h).commutator_square);
    }
  }

  // Square-root ideal: mu(x^*x) = mu(x)^2.
  double sqrt_residual = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Matrix x = random_gaussian(64, 64, derive_seed(c.seed, 1000 + static_cast<std::uint64_t>(i)));
    const auto sx = singular_values(x).values;
    const auto sxx = singular_values(Matrix(x.adjoint() * x)).values;
    for (std::size_t k = 0; k < sx.size(); ++k) {
      sqrt_residual = std::max(sqrt_residual, std::abs(sxx[k] - sx[k] * sx[k]));
    }
  }

  // Toeplitz compression as a unital CP map: verdict of kappa(a^2)-kappa(a)^2
  // at p against [P, pi(a)] at 2p.
  const Window w{-128, 127};
  std::vector<std::pair<int, cplx>> coeffs;
  for (int k = 1; k <= 64; ++k) {
    coeffs.emplace_back(k, 1.0 / k);
    coeffs.emplace_back(-k, 1.0 / k);
  }
  const Matrix ma = multiplication_operator(Symbol::from_pairs(coeffs), w).entries;
  const DefectCommutatorEvidence ev =
      defect_commutator_evidence(dilation_build(hardy_compression_map(w)), ma, c.p, 64);

  r.results = {{"defect_verdict", to_json(ev.defect_verdict)},
               {"commutator_verdict", to_json(ev.commutator_verdict)},
               {"verdicts_match", ev.defect_verdict.verdict == ev.commutator_verdict.verdict}};
  r.residuals = {{"compression", compression},   {"homomorphism", homomorphism},
                 {"adjoint", adjoint},           {"product_defect_identity", product},
                 {"commutator_square", square}, {"square_root_spectrum", sqrt_residual},
                 {"evidence_mismatch", ev.evidence_mismatch}};
  r.pass = compression <= kDilationTol && homomorphism <= kDilationTol &&
           adjoint <= kExactTol * 100 && product <= kDilationTol && square <= kDilationTol &&
           sqrt_residual <= kDilationTol && ev.evidence_mismatch <= 1e-8 &&
           ev.defect_verdict.verdict == ev.commutator_verdict.verdict;
  return r;
}

Report run_sum_demo(const RunConfig& c) {
  const int n = c.modes > 0 ? c.modes : 32;
  const int pairs = c.pairs > 0 ? c.pairs : 50;
  Report r;
  r.params = {{"size", n}, {"pairs", pairs}};

  const IsometryPair v = interleaving_isometries(n);
  const Matrix id_n = Matrix::Identity(n, n);
  const Matrix id_2n = Matrix::Identity(2 * n, 2 * n);
  const bool exact = v.v1.adjoint() * v.v1 == id_n && v.v2.adjoint() * v.v2 == id_n &&
                     v.v1 * v.v1.adjoint() + v.v2 * v.v2.adjoint() == id_2n &&
                     v.v1.adjoint() * v.v2 == Matrix::Zero(n, n);

  const Window ref{0, n - 1};
  const Matrix swap = interleaving_swap(doubled_window(ref));
  double merge = 0.0, conjugation = 0.0, commutativity = 0.0;
  for (int j = 0; j < pairs; ++j) {
    const WindowedOperator a{ref, random_gaussian(n, n, derive_seed(c.seed, 2 * static_cast<std::uint64_t>(j))), "A"};
    const WindowedOperator b{ref, random_gaussian(n, n, derive_seed(c.seed, 2 * static_cast<std::uint64_t>(j) + 1)), "B"};
    const WindowedOperator ab = extension_sum(a, b);
    const WindowedOperator ba = extension_sum(b, a);
    auto merged = singular_values(a).values;
    const auto sb = singular_values(b).values;
    merged.insert(merged.end(), sb.begin(), sb.end());
    std::sort(merged.begin(), merged.end(), std::greater<>());
    const auto sab = singular_values(ab).values;
    const auto sba = singular_values(ba).values;
    for (std::size_t k = 0; k < merged.size(); ++k) {
      merge = std::max(merge, std::abs(merged[k] - sab[k]));
      commutativity = std::max(commutativity, std::abs(sab[k] - sba[k]));
    }
    conjugation = std::max(conjugation, (swap * ab.entries * swap.adjoint() - ba.entries).norm());
  }
  r.results = {{"isometry_relations_exact", exact}};
  r.residuals = {{"spectrum_merge", merge},
                 {"swap_conjugation", conjugation},
                 {"commutativity_spectrum", commutativity}};
  r.pass = exact && merge <= kDilationTol && conjugation <= kDilationTol &&
           commutativity <= kDilationTol;
  return r;
}

Report run_inverse(const RunConfig& c) {
  const Symbol a = symbol_or(c.symbol_path, z_plus_zbar());
  const Window w = window_or(c, -12, 60);
  std::size_t n_max = 4;
  while (n_max * 2 <= static_cast<std::size_t>(w.dimension())) n_max *= 2;
  const ToeplitzInvertibilityReport rep =
      toeplitz_invertibility_report(a, IdealSpec::schatten(c.p), w, n_max);

  Report r;
  r.params = {{"window", window_json(w)}, {"symbol", symbol_to_json(a)}, {"p", c.p},
              {"n_max", n_max}};
  r.results = {{"commutator_rank", rep.commutator_rank},
               {"commutator_verdict", to_json(rep.commutator_verdict)},
               {"inverse_commutator_verdict", to_json(rep.inverse_commutator_verdict)},
               {"commutator_singular_values", rep.commutator_spectrum.values}};
  r.residuals = {{"unitary", rep.residuals.unitary},
                 {"projection", rep.residuals.projection},
                 {"identity", rep.residuals.identity}};
  r.pass = rep.residuals.unitary == 0.0 && rep.residuals.projection == 0.0 &&
           rep.residuals.identity <= kExactTol;
  return r;
}

Report run_deformation(const RunConfig& c) {
  const int n = c.modes > 0 ? c.modes : 256;
  const Window w = window_or(c, -16, 80);
  if (!(c.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (w.hi < 0) throw std::invalid_argument("window must contain Hardy modes");

  const auto lambda = lambda_sequence(c.eps, c.family, static_cast<std::size_t>(n) + 4);
  const double shift = shift_compression_residual(lambda, n);
  const double quadratic = quadratic_identity_residual(c.eps, Window{0, n - 1});

  const auto lambda_w = lambda_sequence(c.eps, c.family, static_cast<std::size_t>(w.hi) + 1);
  const WindowedOperator t = deformation_operator(lambda_w, Window{0, w.hi});
  const std::vector<std::pair<std::string, Symbol>> symbols{
      {"z", kZ}, {"z+zbar", z_plus_zbar()}, {"z^2", Symbol::monomial(2)}};
  double expansion = 0.0;
  json per_pair = json::object();
  for (const auto& [na, a] : symbols) {
    for (const auto& [nb, b] : symbols) {
      const double res = deformation_defect_residuals(t, a, b, w);
      per_pair[na + "," + nb] = res;
      expansion = std::max(expansion, res);
    }
  }
  const double chopping = chopping_asymptotic_bound(static_cast<std::size_t>(n),
                                                    static_cast<std::size_t>(n));

  Report r;
  r.params = {{"eps", c.eps}, {"modes", n}, {"family", to_string(c.family)},
              {"window", window_json(w)}};
  r.results = {{"chopping_bound", chopping}, {"expansion_by_pair", per_pair}};
  r.residuals = {{"shift_coefficients", shift},
                 {"quadratic_identity", quadratic},
                 {"defect_expansion", expansion}};
  r.pass = shift <= kExactTol && quadratic <= kExactTol && expansion <= kExactTol &&
           chopping <= 0.5;
  return r;
}

json lemma_json(const LemmaReport& rep, bool full) {
  json trials = json::array();
  for (const auto& t : rep.trials) {
    json tj = {{"seed", t.seed},
               {"min_gap", t.min_gap},
               {"lhs_norm", t.lhs_norm},
               {"s1_residual", t.s1_residual},
               {"s2_residual", t.s2_residual},
               {"s3_residual", t.s3_residual},
               {"expansion_residual", t.expansion_residual}};
    if (full) tj["gaps"] = t.gaps;
    trials.push_back(std::move(tj));
  }
  return json{{"rhs_norm", rep.rhs_norm},
              {"min_gap", rep.min_gap()},
              {"min_norm_margin", rep.min_norm_margin()},
              {"max_s_residual", rep.max_s_residual()},
              {"holds", rep.holds()},
              {"trials", trials}};
}

Report run_lemma(const RunConfig& c) {
  DeformationParams params;
  params.epsilon = c.eps;
  params.p = c.p;
  params.family = c.family;
  params.modes = c.modes > 0 ? c.modes : 128;
  params.ambient = c.ambient > 0 ? c.ambient : params.modes + 2;
  params.seed = c.seed;
  validate(params);
  if (c.trials < 1) throw std::invalid_argument("trials must be >= 1");

  const LemmaReport rep = lemma_lower_bound_report(params, c.trials);
  Report r;
  r.params = {{"p", params.p},         {"eps", params.epsilon}, {"family", to_string(params.family)},
              {"modes", params.modes}, {"ambient", params.ambient}, {"trials", c.trials}};
  r.results = lemma_json(rep, true);
  r.residuals = {{"min_gap", rep.min_gap()},
                 {"min_norm_margin", rep.min_norm_margin()},
                 {"max_s_residual", rep.max_s_residual()}};
  r.pass = rep.holds(1e-9, 1e-10);
  return r;
}

Report run_sweep(const RunConfig& c) {
  const auto grid = linspace(c.eps_min, c.eps_max, c.steps);
  const SweepReport rep = epsilon_sweep(c.p, grid, c.family, c.max_index, c.with_lemma, c.seed);

  json points = json::array();
  bool lemma_ok = true;
  for (const auto& pt : rep.points) {
    json pj = {{"eps", pt.epsilon},
               {"measured_exponent", pt.measured_exponent},
               {"stated_exponent", pt.stated_exponent},
               {"expansion_exponent", pt.expansion_exponent},
               {"rate_discrepancy", pt.measured_exponent - pt.stated_exponent},
               {"doubling_indices", pt.doubling_indices},
               {"partial_sums", pt.partial_sums},
               {"doubling_ratio", pt.doubling_ratio},
               {"at_p", to_json(pt.at_p)},
               {"at_2p", to_json(pt.at_2p)}};
    if (pt.lemma) {
      pj["lemma"] = lemma_json(*pt.lemma, false);
      lemma_ok = lemma_ok && pt.lemma->holds();
    }
    points.push_back(std::move(pj));
  }
  json pairs = json::array();
  for (const auto& pr : rep.pairs) {
    pairs.push_back({{"eps", pr.epsilon}, {"shifted", pr.shifted}, {"distinct", pr.distinct}});
  }
  Report r;
  r.params = {{"p", c.p},           {"eps_min", c.eps_min},     {"eps_max", c.eps_max},
              {"steps", c.steps},   {"family", to_string(c.family)},
              {"max_index", c.max_index}, {"with_lemma", c.with_lemma}};
  r.results = {{"points", points}, {"pairs", pairs}};
  r.pass = lemma_ok;
  return r;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands{
      "defect",          "spectrum",          "stinespring-check", "sum-demo",
      "inverse-check",   "deformation-check", "lemma-check",       "sweep"};
  return commands;
}

RunConfig parse_command_line(int argc, const char* const* argv) {
  RunConfig c;
  if (const char* env = std::getenv("OIL_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("OIL_SEED is not an unsigned integer: ") + env);
    }
  }

  CLI::App app{"Numerical checks for Toeplitz extensions, dilations and deformations", "oil"};
  app.require_subcommand(1);
  std::string family = "paper";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "RNG seed (default $OIL_SEED or 42)");
    sub->add_option("--out", c.out_path, "report path (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto windowed = [&](CLI::App* sub) {
    sub->add_option("--window-lo", c.window_lo, "lowest Fourier mode");
    sub->add_option("--window-hi", c.window_hi, "highest Fourier mode");
  };
  auto family_opt = [&](CLI::App* sub) {
    sub->add_option("--family", family, "paper|power");
  };

  auto* defect = app.add_subcommand("defect", "Toeplitz splitting defects and Hankel products");
  common(defect);
  windowed(defect);
  defect->add_option("--symbol-a", c.symbol_path, "symbol file for a (default z)");
  defect->add_option("--symbol-b", c.symbol_b_path, "symbol file for b (default conj z)");

  auto* spectrum = app.add_subcommand("spectrum", "singular values of a Hardy-model operator");
  common(spectrum);
  windowed(spectrum);
  spectrum->add_option("--symbol", c.symbol_path, "symbol file (default z + conj z)");
  spectrum->add_option("--operator", c.op, "multiplication|toeplitz|hankel|commutator");
  spectrum->add_option("--p", c.p, "Schatten exponent");

  auto* stine = app.add_subcommand("stinespring-check", "dilation identities for random CP maps");
  common(stine);
  stine->add_option("--n", c.dim_in, "input dimension");
  stine->add_option("--m", c.dim_out, "output dimension");
  stine->add_option("--kraus", c.kraus, "Kraus operators per map");
  stine->add_option("--maps", c.maps, "number of random maps");
  stine->add_option("--pairs", c.pairs, "random pairs per map");
  stine->add_option("--p", c.p, "Schatten exponent for the square-root test");

  auto* sum = app.add_subcommand("sum-demo", "extension sums through interleaving isometries");
  common(sum);
  sum->add_option("--size", c.modes, "matrix size N");
  sum->add_option("--pairs", c.pairs, "random pairs");

  auto* inverse = app.add_subcommand("inverse-check", "inverse-extension identity");
  common(inverse);
  windowed(inverse);
  inverse->add_option("--symbol", c.symbol_path, "symbol file (default z + conj z)");
  inverse->add_option("--p", c.p, "Schatten exponent");

  auto* deform = app.add_subcommand("deformation-check", "deformed compressions and identities");
  common(deform);
  windowed(deform);
  deform->add_option("--eps", c.eps, "deformation order");
  deform->add_option("--modes", c.modes, "probe modes N");
  family_opt(deform);

  auto* lemma = app.add_subcommand("lemma-check", "unitary lower bound for a(z) = z");
  common(lemma);
  lemma->add_option("--p", c.p, "Schatten exponent");
  lemma->add_option("--eps", c.eps, "deformation order");
  lemma->add_option("--modes", c.modes, "probe modes N");
  lemma->add_option("--ambient", c.ambient, "ambient dimension M (default N+2)");
  lemma->add_option("--trials", c.trials, "Haar unitaries");
  family_opt(lemma);

  auto* sweep = app.add_subcommand("sweep", "epsilon sweep of the deformation family");
  common(sweep);
  sweep->add_option("--p", c.p, "Schatten exponent");
  sweep->add_option("--eps-min", c.eps_min, "first epsilon");
  sweep->add_option("--eps-max", c.eps_max, "last epsilon");
  sweep->add_option("--steps", c.steps, "grid points");
  sweep->add_option("--max-index", c.max_index, "N_max (power of two)");
  sweep->add_flag("--with-lemma", c.with_lemma, "attach a small lemma report per epsilon");
  family_opt(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  try {
    c.family = parse_family(family);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Report report;
  std::string csv;
  try {
    if (config.format == "csv" && config.command != "spectrum") {
      throw UsageError("csv output is only available for the spectrum command");
    }
    if (config.command == "defect") {
      report = run_defect(config);
    } else if (config.command == "spectrum") {
      SpectrumRun run = run_spectrum(config);
      report = std::move(run.report);
      if (config.format == "csv") csv = spectrum_csv(run.spectrum);
    } else if (config.command == "stinespring-check") {
      report = run_stinespring(config);
    } else if (config.command == "sum-demo") {
      report = run_sum_demo(config);
    } else if (config.command == "inverse-check") {
      report = run_inverse(config);
    } else if (config.command == "deformation-check") {
      report = run_deformation(config);
    } else if (config.command == "lemma-check") {
      report = run_lemma(config);
    } else if (config.command == "sweep") {
      report = run_sweep(config);
    } else {
      throw UsageError("unknown command '" + config.command + "'");
    }
  } catch (const UsageError& e) {
    err << "oil: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "oil: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "oil: " << config.command << " failed: " << e.what() << "\n";
    return kExitFail;
  }

  report.command = config.command;
  report.seed = config.seed;
  const std::string text = csv.empty() ? format_json(to_json(report)) : csv;
  try {
    if (config.out_path.empty()) {
      out << text;
    } else {
      write_text(text, config.out_path);
    }
  } catch (const ReportIoError& e) {
    err << "oil: " << e.what() << "\n";
    return kExitFail;
  }
  if (!report.pass) err << "oil: " << config.command << ": check failed\n";
  return report.pass ? kExitPass : kExitFail;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_command_line(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitPass;
  } catch (const UsageError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "oil: " << msg << "\n";
    return kExitUsage;
  }
  return dispatch(config, out, err);
}

}  // namespace oil
