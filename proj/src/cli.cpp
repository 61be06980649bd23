#include "palcanon/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>

#include "palcanon/blocks.hpp"
#include "palcanon/classifier.hpp"
#include "palcanon/error.hpp"
#include "palcanon/experiment.hpp"
#include "palcanon/matrix_io.hpp"
#include "palcanon/pencil.hpp"
#include "palcanon/perturbation.hpp"
#include "palcanon/random.hpp"

namespace palcanon {

namespace {

StarKind parse_star(const std::string& s) {
  if (s == "t") return StarKind::Transpose;
  if (s == "h") return StarKind::ConjugateTranspose;
  throw ValidationError("--star must be 't' or 'h'");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PALCANON_SEED")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ValidationError("PALCANON_SEED is not an unsigned integer");
    }
    return v;
  }
  return 0;
}

std::string fmt(double v, const char* spec = "%.6e") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Each check returns an empty string on success or a failure description.
using Check = std::pair<const char*, std::function<std::string()>>;

std::vector<Check> selftest_checks() {
  std::vector<Check> checks;
  checks.emplace_back("gamma cosquare eigenvalue (-1)^k", [] {
    for (std::size_t k = 1; k <= 8; ++k) {
      const Spectrum s = pencil_eigenvalues(gamma_block(k), StarKind::Transpose);
      const Complex target = k % 2 == 0 ? 1.0 : -1.0;
      Complex mean{};
      for (const auto& z : s.values) mean += z;
      mean /= static_cast<double>(k);
      if (std::abs(mean - target) > 1e-6) return "k=" + std::to_string(k);
    }
    return std::string();
  });
  checks.emplace_back("predicted spectrum of random generic specs", [] {
    for (std::uint64_t t = 0; t < 20; ++t) {
      RngStream rng(11, t);
      const std::size_t n = 2 + t % 9;
      const StarKind star = t % 2 == 0 ? StarKind::ConjugateTranspose : StarKind::Transpose;
      const std::size_t ell = star == StarKind::Transpose ? n / 2 : t % (n / 2 + 1);
      const CanonicalFormSpec spec = generic_spec(n, ell, star, rng);
      const SpectrumMatch m = match_spectrum(predicted_spectrum(spec), pencil_eigenvalues(realize(spec), star).values);
      if (!(m.max_rel_error <= 1e-8)) return "trial " + std::to_string(t);
    }
    return std::string();
  });
  checks.emplace_back("reciprocal pairing of random pencils", [] {
    for (std::uint64_t t = 0; t < 20; ++t) {
      RngStream rng(12, t);
      const StarKind star = t % 2 == 0 ? StarKind::ConjugateTranspose : StarKind::Transpose;
      const CMatrix a = random_uniform_complex(2 + t % 11, rng);
      const PairingReport r = reciprocal_pairing(pencil_eigenvalues(a, star), star, 1e-8);
      if (!(r.max_residual <= 1e-8)) return "trial " + std::to_string(t);
    }
    return std::string();
  });
  checks.emplace_back("generic round trip under congruence", [] {
    for (std::uint64_t t = 0; t < 20; ++t) {
      RngStream rng(13, t);
      const std::size_t n = 1 + t % 12;
      const std::size_t ell = t % (n / 2 + 1);
      const CanonicalFormSpec spec = generic_spec(n, ell, StarKind::ConjugateTranspose, rng);
      const CMatrix p = random_congruence(n, rng, 100.0);
      const CMatrix a = star_transpose(p, StarKind::ConjugateTranspose) * realize(spec) * p;
      if (classify_generic(a, StarKind::ConjugateTranspose) != BundleClass::generic_star(ell)) {
        return "n=" + std::to_string(n) + " ell=" + std::to_string(ell);
      }
    }
    return std::string();
  });
  checks.emplace_back("perturbation predictions", [] {
    const double delta = 1e-3;
    for (StarKind star : {StarKind::Transpose, StarKind::ConjugateTranspose}) {
      for (std::size_t k = 2; k <= 4; k += 2) {
        verify_prediction(gamma_perturbation_even(k, 1.0, linear_eps(k, delta)),
                          predicted_gamma_even(k, 1.0, linear_eps(k, delta), star), star, 1e-8);
      }
      verify_prediction(gamma_perturbation_odd(3, 1.0, linear_eps(2, delta)),
                        predicted_gamma_odd(3, 1.0, linear_eps(2, delta), star), star, 1e-8);
      verify_prediction(h_perturbation(3, 2.0, decreasing_eps(3, delta)),
                        predicted_h(3, 2.0, decreasing_eps(3, delta), star), star, 1e-8);
    }
    return std::string();
  });
  checks.emplace_back("experiment determinism across threads", [] {
    ExperimentConfig cfg;
    cfg.n = 6;
    cfg.trials = 24;
    cfg.master_seed = 5;
    const ExperimentResult one = run_experiment(cfg);
    cfg.threads = 3;
    const ExperimentResult three = run_experiment(cfg);
    if (!(one.table == three.table)) return std::string("tables differ");
    return std::string();
  });
  checks.emplace_back("matrix text round trip", [] {
    RngStream rng(14, 0);
    const CMatrix a = random_uniform_complex(5, rng);
    std::ostringstream os;
    write_matrix(a, os);
    if (!(parse_matrix(os.str()) == a)) return std::string("mismatch");
    return std::string();
  });
  return checks;
}

int run_selftest(std::ostream& out) {
  int failures = 0;
  for (const auto& [name, fn] : selftest_checks()) {
    std::string problem;
    try {
      problem = fn();
    } catch (const std::exception& e) {
      problem = e.what();
    }
    if (problem.empty()) {
      out << "PASS " << name << '\n';
    } else {
      out << "FAIL " << name << ": " << problem << '\n';
      ++failures;
    }
  }
  out << (failures == 0 ? "selftest passed\n" : "selftest failed\n");
  return failures == 0 ? 0 : 2;
}

void print_perturbation_table(const PerturbationReport& r, std::ostream& out) {
  const SpectrumMatch m = match_spectrum(r.predicted, r.computed.values);
  out << "predicted                                   computed                                    abs_error\n";
  for (std::size_t c = 0; c < r.computed.values.size(); ++c) {
    const Complex p = r.predicted.entries[m.assignment[c]].value;
    const Complex v = r.computed.values[c];
    out << format_complex(p) << "  " << format_complex(v) << "  " << fmt(std::abs(v - p)) << '\n';
  }
}

void write_perturbation_csv(const PerturbationReport& r, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  const SpectrumMatch m = match_spectrum(r.predicted, r.computed.values);
  f << "predicted_re,predicted_im,computed_re,computed_im,abs_error\n";
  for (std::size_t c = 0; c < r.computed.values.size(); ++c) {
    const Complex p = r.predicted.entries[m.assignment[c]].value;
    const Complex v = r.computed.values[c];
    f << fmt(p.real(), "%.17g") << ',' << fmt(p.imag(), "%.17g") << ',' << fmt(v.real(), "%.17g") << ','
      << fmt(v.imag(), "%.17g") << ',' << fmt(std::abs(v - p), "%.17g") << '\n';
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical forms under congruence and palindromic pencil spectra", "palcanon"};
  app.require_subcommand(1);

  // classify
  std::string star_s;
  std::string input;
  double unit_tol = 1e-14;
  double distinct_tol = 1e-8;
  bool scale_free = false;
  std::string eigs_csv;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a matrix into a generic bundle");
  classify_cmd->add_option("--star", star_s, "t (transpose) or h (conjugate transpose)")->required();
  classify_cmd->add_option("--input", input, "Matrix file")->required();
  classify_cmd->add_option("--unit-tol", unit_tol, "Unit-modulus tolerance");
  classify_cmd->add_option("--distinct-tol", distinct_tol, "Relative eigenvalue distinctness tolerance");
  classify_cmd->add_flag("--scale-free", scale_free, "Use | |λ|-1 | <= tol instead of dividing by ||A||_F");
  classify_cmd->add_option("--eigs-csv", eigs_csv, "Write the eigenvalues as CSV");

  // block
  std::string block_kind;
  std::size_t k = 1;
  std::string mu_s;
  std::string alpha_s = "1+0i";
  auto* block_cmd = app.add_subcommand("block", "Print a canonical block as a matrix file");
  block_cmd->add_option("kind", block_kind, "j0, gamma or h")->required()->check(CLI::IsMember({"j0", "gamma", "h"}));
  block_cmd->add_option("--k", k, "Block parameter k")->required();
  block_cmd->add_option("--mu", mu_s, "mu for h blocks");
  block_cmd->add_option("--alpha", alpha_s, "alpha for gamma blocks");

  // synth
  std::size_t n = 0;
  std::optional<std::size_t> ell;
  std::optional<std::uint64_t> seed;
  double cond = 100.0;
  std::string out_path;
  auto* synth_cmd = app.add_subcommand("synth", "Random matrix of a known generic bundle");
  synth_cmd->add_option("--star", star_s, "t or h")->required();
  synth_cmd->add_option("--n", n, "Size")->required();
  synth_cmd->add_option("--ell", ell, "Number of 2x2 hyperbolic blocks (default floor(n/2) for t)");
  synth_cmd->add_option("--seed", seed, "Master seed (falls back to PALCANON_SEED)");
  synth_cmd->add_option("--cond", cond, "Condition bound of the congruence");
  synth_cmd->add_option("--out", out_path, "Matrix output file (default stdout)");

  // perturb
  std::string family;
  double delta = 0.0;
  double tol = 1e-8;
  std::string csv_path;
  auto* perturb_cmd = app.add_subcommand("perturb", "Check a perturbation family against its predicted spectrum");
  perturb_cmd->add_option("family", family, "gamma-even, gamma-odd or h")
      ->required()
      ->check(CLI::IsMember({"gamma-even", "gamma-odd", "h"}));
  perturb_cmd->add_option("--k", k, "Block parameter k")->required();
  perturb_cmd->add_option("--alpha", alpha_s, "alpha for gamma families");
  perturb_cmd->add_option("--mu", mu_s, "mu for the h family");
  perturb_cmd->add_option("--delta", delta, "Perturbation scale")->required();
  perturb_cmd->add_option("--star", star_s, "t or h")->required();
  perturb_cmd->add_option("--tol", tol, "Relative error tolerance");
  perturb_cmd->add_option("--csv", csv_path, "Write (predicted, computed, abs error) rows");

  // experiment
  std::size_t trials = 0;
  std::string gen = "uniform";
  std::size_t threads = 1;
  std::string out_freq;
  std::string out_scatter;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo unit-eigenvalue counts");
  exp_cmd->add_option("--star", star_s, "t or h")->required();
  exp_cmd->add_option("--n", n, "Size")->required();
  exp_cmd->add_option("--trials", trials, "Number of trials")->required();
  exp_cmd->add_option("--gen", gen, "uniform or shifted")->check(CLI::IsMember({"uniform", "shifted"}));
  exp_cmd->add_option("--seed", seed, "Master seed (falls back to PALCANON_SEED)");
  exp_cmd->add_option("--threads", threads, "Worker threads");
  exp_cmd->add_option("--out-freq", out_freq, "Frequency CSV")->required();
  exp_cmd->add_option("--out-scatter", out_scatter, "Per-trial CSV");
  exp_cmd->add_option("--unit-tol", unit_tol, "Unit-modulus tolerance");
  exp_cmd->add_flag("--scale-free", scale_free, "Use | |λ|-1 | <= tol instead of dividing by ||A||_F");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in invariant checks at small sizes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 1;
  }

  try {
    if (classify_cmd->parsed()) {
      const StarKind star = parse_star(star_s);
      const CMatrix a = read_matrix(input);
      const Classification c = classify(a, star, UnitTolerance{unit_tol, scale_free}, distinct_tol);
      out << report_line(c) << '\n';
      if (!eigs_csv.empty()) {
        std::ofstream f(eigs_csv, std::ios::binary);
        if (!f) throw Error("cannot open '" + eigs_csv + "' for writing");
        write_eigenvalue_csv(c.spectrum, f);
      }
      return 0;
    }

    if (block_cmd->parsed()) {
      CMatrix b;
      if (block_kind == "j0") {
        b = jordan_zero_block(k);
      } else if (block_kind == "gamma") {
        b = parse_complex(alpha_s) * gamma_block(k);
      } else {
        if (mu_s.empty()) throw ValidationError("block h needs --mu");
        b = h_block(k, parse_complex(mu_s));
      }
      write_matrix(b, out);
      return 0;
    }

    if (synth_cmd->parsed()) {
      const StarKind star = parse_star(star_s);
      if (!ell) {
        if (star == StarKind::ConjugateTranspose) throw ValidationError("synth --star h needs --ell");
        ell = n / 2;
      }
      if (!(cond >= 1.0)) throw ValidationError("--cond must be >= 1");
      RngStream rng(resolve_seed(seed), 0);
      const CanonicalFormSpec spec = generic_spec(n, *ell, star, rng);
      const CMatrix p = random_congruence(n, rng, cond);
      const CMatrix a = star_transpose(p, star) * realize(spec) * p;
      Classification truth;
      truth.n = n;
      truth.unit_count = n - 2 * *ell;
      truth.cls = star == StarKind::ConjugateTranspose ? BundleClass::generic_star(*ell)
                                                       : BundleClass::generic_congruence(n % 2 == 1);
      const std::string truth_line = "truth " + report_line(truth) + " spec=" + format_spec(spec);
      if (out_path.empty()) {
        write_matrix(a, out);
        err << truth_line << '\n';
      } else {
        write_matrix(a, std::filesystem::path(out_path));
        out << truth_line << '\n';
      }
      return 0;
    }

    if (perturb_cmd->parsed()) {
      const StarKind star = parse_star(star_s);
      if (!(delta > 0.0)) throw ValidationError("--delta must be positive");
      const Complex alpha = parse_complex(alpha_s);
      CMatrix a;
      PredictedSpectrum pred;
      if (family == "gamma-even") {
        const auto eps = linear_eps(k, delta);
        a = gamma_perturbation_even(k, alpha, eps);
        pred = predicted_gamma_even(k, alpha, eps, star);
      } else if (family == "gamma-odd") {
        if (!(delta < 1.0 / static_cast<double>(k))) throw ValidationError("gamma-odd needs delta < 1/k");
        const auto eps = linear_eps(k - 1, delta);
        a = gamma_perturbation_odd(k, alpha, eps);
        pred = predicted_gamma_odd(k, alpha, eps, star);
      } else {
        if (mu_s.empty()) throw ValidationError("perturb h needs --mu");
        const Complex mu = parse_complex(mu_s);
        const auto eps = decreasing_eps(k, delta);
        a = h_perturbation(k, mu, eps);
        pred = predicted_h(k, mu, eps, star);
      }
      const PerturbationReport r = verify_prediction(a, pred, star, tol);
      out << "family=" << family << " k=" << k << " star=" << star_s << " delta=" << fmt(delta, "%g") << '\n';
      out << "convention=" << to_string(r.convention) << " max_rel_error=" << fmt(r.max_rel_error)
          << " class=" << to_string(r.classified) << '\n';
      print_perturbation_table(r, out);
      if (!csv_path.empty()) write_perturbation_csv(r, csv_path);
      return r.max_rel_error <= tol ? 0 : 2;
    }

    if (exp_cmd->parsed()) {
      ExperimentConfig cfg;
      cfg.n = n;
      cfg.trials = trials;
      cfg.star = parse_star(star_s);
      cfg.generator = gen == "shifted" ? Generator::ShiftedInteger : Generator::Uniform;
      cfg.unit_tol = UnitTolerance{unit_tol, scale_free};
      cfg.master_seed = resolve_seed(seed);
      cfg.threads = threads;
      const ExperimentResult res = run_experiment(cfg);
      emit_frequency_csv(res.table, std::filesystem::path(out_freq));
      if (!out_scatter.empty()) emit_scatter_csv(res.records, std::filesystem::path(out_scatter));
      out << "trials=" << res.table.total << " skipped=" << res.table.skipped << '\n';
      for (const auto& [count, freq] : res.table.bins) out << count << ": " << freq << '\n';
      if (!res.parity_violations.empty()) {
        out << "parity violations: " << res.parity_violations.size() << " (first at trial "
            << res.parity_violations.front() << ")\n";
      }
      return 0;
    }

    if (selftest_cmd->parsed()) return run_selftest(out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const NearSingular& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const SingularMatrix& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const PairingFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const PredictionMismatch& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace palcanon
