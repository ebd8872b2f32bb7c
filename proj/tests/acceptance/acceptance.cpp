// Acceptance run: one line per criterion, exit status 1 if any fails.
#include "oil/cli.hpp"
#include "oil/deformation.hpp"
#include "oil/extension.hpp"
#include "oil/report.hpp"
#include "oil/stinespring.hpp"

#include "../oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace oil;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.3f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), dt, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

std::vector<double> oracle_lambda(double eps, LambdaFamily fam, std::size_t n) {
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k)
    l[k] = fam == LambdaFamily::paper_formula ? oracle::lambda_paper(eps, k) : oracle::lambda_power(eps, k);
  return l;
}

Matrix unit_ball(int n, std::uint64_t seed) {
  Matrix a = random_gaussian(n, n, seed);
  return a / operator_norm(a);
}

std::string run_cli_text(std::vector<std::string> args, int* code) {
  args.insert(args.begin(), "oil");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  *code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  json j = json::parse(out.str());
  j.erase("tool_version");
  return format_json(j);
}

}  // namespace

int main() {
  criterion(1, "deformed compression of z, shift coefficients", 1.0, [] {
    const int n = 256;
    double worst = 0.0;
    for (double eps : {0.3, 0.6}) {
      for (auto fam : {LambdaFamily::paper_formula, LambdaFamily::pure_power}) {
        const auto lib = lambda_sequence(eps, fam, n + 4);
        const auto ref = oracle_lambda(eps, fam, n + 4);
        const Window w{-3, n + 3};
        const auto image = deformed_compression(deformation_operator(lib, Window{0, n + 3}), Symbol::monomial(1), w);
        const GuardBlock g = guard_block(w, 3, 1);
        for (int i = g.begin; i < g.end; ++i) {
          for (int j = g.begin; j < g.end; ++j) {
            const int r = w.mode_at(i), c = w.mode_at(j);
            double expect = 0.0;
            if (c >= 0 && r == c + 1) expect = 1 + ref[r] + ref[c] + ref[c] * ref[r];
            worst = std::max(worst, std::abs(image.entries(i, j) - expect));
          }
        }
        worst = std::max(worst, shift_compression_residual(lib, n));
      }
    }
    return Outcome{worst <= 1e-12, fmt("max entry deviation %.3g over eps {0.3,0.6} x both families, N=256", worst)};
  });

  criterion(2, "unitary lower bound, 100 Haar trials", 60.0, [] {
    DeformationParams p;
    p.epsilon = 0.4;
    p.p = 2.0;
    p.family = LambdaFamily::paper_formula;
    p.modes = 128;
    p.ambient = 130;
    const LemmaReport rep = lemma_lower_bound_report(p, 100);
    // hand-built L for a few trials; its 2-norm is the Frobenius norm
    double norm_dev = 0.0;
    const auto lam = oracle_lambda(0.4, LambdaFamily::paper_formula, 130);
    for (int t = 0; t < 100; t += 33) {
      const Matrix u = haar_unitary(128, p.seed ^ static_cast<std::uint64_t>(t)).entries;
      Matrix big = Matrix::Identity(130, 130);
      big.topLeftCorner(128, 128) = u;
      Matrix l = Matrix::Zero(130, 130);
      for (int i = 0; i < 130; ++i)
        for (int j = 0; j < 130; ++j) {
          cplx s{};
          for (int k = 0; k + 1 < 130; ++k) s += std::conj(big(k + 1, i)) * big(k, j);
          l(i, j) = s;
        }
      for (int k = 0; k + 1 < 130; ++k) l(k + 1, k) -= (1 + lam[k + 1]) * (1 + lam[k]);
      norm_dev = std::max(norm_dev, std::abs(l.norm() - rep.trials[static_cast<std::size_t>(t)].lhs_norm));
    }
    long double rhs = 0;
    for (int k = 0; k < 128; ++k) rhs += (long double)lam[k] * lam[k];
    const double rhs_dev = std::abs(std::sqrt((double)rhs) - rep.rhs_norm);
    const bool ok = rep.holds(1e-9, 1e-10) && rep.trials.size() == 100 && norm_dev <= 1e-10 && rhs_dev <= 1e-12;
    std::ostringstream d;
    d << "min gap " << fmt("%.4g", rep.min_gap()) << ", min ||L||_2 - rhs " << fmt("%.4g", rep.min_norm_margin())
      << ", max S residual " << fmt("%.3g", rep.max_s_residual()) << ", oracle ||L|| dev "
      << fmt("%.3g", norm_dev);
    return Outcome{ok, d.str()};
  });

  criterion(3, "quadratic identity for T_eps", 1.0, [] {
    double worst = 0.0;
    for (double eps : {0.3, 0.6, 1.5}) worst = std::max(worst, quadratic_identity_residual(eps, Window{0, 1023}));
    return Outcome{worst <= 1e-12, fmt("max residual %.3g, eps {0.3,0.6,1.5}, N=1024", worst)};
  });

  criterion(4, "four-term defect expansion", 5.0, [] {
    const Window w{-16, 80};
    const Symbol z = Symbol::monomial(1), zb = Symbol::monomial(-1);
    const std::vector<Symbol> symbols{z, z + zb, Symbol::monomial(2)};
    const WindowedOperator t_signed = signed_deformation_from_order(0.4, Window{0, 80});
    const WindowedOperator t_plus = deformation_operator(lambda_sequence(0.4, LambdaFamily::paper_formula, 81), Window{0, 80});
    double worst = 0.0;
    for (const auto& a : symbols)
      for (const auto& b : symbols)
        for (const auto* t : {&t_signed, &t_plus}) worst = std::max(worst, deformation_defect_residuals(*t, a, b, w));
    return Outcome{worst <= 1e-12, fmt("max guard residual %.3g over 9 pairs, both signs of T_0.4", worst)};
  });

  criterion(5, "Stinespring suite, 20 maps x 20 pairs", 10.0, [] {
    double comp = 0, prod = 0, sq = 0, hom = 0;
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t s = derive_seed(42, static_cast<std::uint64_t>(i));
      const DilationData d = dilation_build(random_cp_contraction(4, 4, 3, s));
      for (int j = 0; j < 20; ++j) {
        const Matrix a = unit_ball(4, derive_seed(s, 2 * j)), b = unit_ball(4, derive_seed(s, 2 * j + 1));
        comp = std::max(comp, compression_residual(d, a));
        hom = std::max(hom, homomorphism_residual(d, a, b));
        const DefectResiduals r = defect_identity_residuals(d, a, b);
        prod = std::max(prod, r.product);
        sq = std::max(sq, r.commutator_square);
      }
    }
    const double worst = std::max({comp, prod, sq, hom});
    std::ostringstream o;
    o << "compression " << fmt("%.3g", comp) << ", product defect " << fmt("%.3g", prod) << ", commutator square "
      << fmt("%.3g", sq) << ", homomorphism " << fmt("%.3g", hom);
    return Outcome{worst <= 1e-10, o.str()};
  });

  criterion(6, "extension sum via interleaving isometries", 10.0, [] {
    const int n = 32;
    const IsometryPair v = interleaving_isometries(n);
    const bool exact = v.v1.adjoint() * v.v1 == Matrix::Identity(n, n) &&
                       v.v2.adjoint() * v.v2 == Matrix::Identity(n, n) &&
                       v.v1.adjoint() * v.v2 == Matrix::Zero(n, n) &&
                       v.v1 * v.v1.adjoint() + v.v2 * v.v2.adjoint() == Matrix::Identity(2 * n, 2 * n);
    const Window w{0, n - 1};
    const Matrix swap = interleaving_swap(doubled_window(w));
    double merge = 0, conj = 0;
    for (int j = 0; j < 50; ++j) {
      const WindowedOperator a{w, random_gaussian(n, n, derive_seed(7, 2 * j)), "A"};
      const WindowedOperator b{w, random_gaussian(n, n, derive_seed(7, 2 * j + 1)), "B"};
      const auto ab = extension_sum(a, b);
      auto m = singular_values(a).values;
      for (double x : singular_values(b).values) m.push_back(x);
      std::sort(m.rbegin(), m.rend());
      const auto s = singular_values(ab).values;
      for (std::size_t k = 0; k < m.size(); ++k) merge = std::max(merge, std::abs(m[k] - s[k]));
      conj = std::max(conj, (swap * ab.entries * swap.adjoint() - extension_sum(b, a).entries).norm());
    }
    std::ostringstream o;
    o << "isometry relations " << (exact ? "exact" : "NOT exact") << ", merge " << fmt("%.3g", merge) << ", swap "
      << fmt("%.3g", conj);
    return Outcome{exact && merge <= 1e-10 && conj <= 1e-10, o.str()};
  });

  criterion(7, "inverse-extension identity", 1.0, [] {
    double ru = 0, rp = 0, rid = 0;
    for (const Symbol& a : {Symbol::constant(1.0), Symbol::monomial(1), Symbol::monomial(1) + Symbol::monomial(-1)}) {
      const InverseResiduals r = inverse_identity_residuals(a, Window{-12, 60});
      ru = std::max(ru, r.unitary);
      rp = std::max(rp, r.projection);
      rid = std::max(rid, r.identity);
    }
    std::ostringstream o;
    o << "rU " << fmt("%.3g", ru) << ", rP " << fmt("%.3g", rp) << ", rId " << fmt("%.3g", rid);
    return Outcome{ru == 0.0 && rp == 0.0 && rid <= 1e-12, o.str()};
  });

  criterion(8, "Toeplitz defect equals Hankel product", 5.0, [] {
    using P = std::vector<std::pair<int, cplx>>;
    const std::vector<std::pair<P, P>> list{
        {{{1, 1.0}}, {{-1, 1.0}}},
        {{{2, 1.0}}, {{-3, 1.0}}},
        {{{1, 1.0}, {-1, 1.0}}, {{1, 1.0}, {-1, 1.0}}},
        {{{-8, 0.5}}, {{8, {0.0, 2.0}}}},
        {{{0, 2.0}, {3, -1.0}}, {{-2, 1.0}, {5, 0.25}}},
        {{{-4, {1, 1}}, {4, {1, -1}}}, {{-1, 3.0}}},
        {{{-3, 0.2}, {-1, {0, 1}}, {2, 0.7}}, {{-5, 1.0}, {1, {0.5, 0.5}}, {6, -0.3}}},
        {{{7, 1.0}, {-7, 1.0}}, {{-6, {0, -1}}, {0, 1.0}}},
        {{{-2, 1.0}, {-1, 1.0}, {0, 1.0}, {1, 1.0}, {2, 1.0}}, {{-8, 0.1}, {8, 0.1}}},
        {{{5, {0.3, -0.2}}, {-6, 1.1}}, {{-8, 1.0}, {-4, -1.0}, {3, 0.5}}},
    };
    const Window w{-40, 40};
    double worst = 0.0, worst_matrix = 0.0;
    for (const auto& [pa, pb] : list) {
      const Symbol a = make_symbol(pa), b = make_symbol(pb);
      const SplittingDefect d = splitting_defect(a, b, w);
      const oracle::Coeffs ca(pa.begin(), pa.end()), cb(pb.begin(), pb.end());
      for (int i = d.guard.begin; i < d.guard.end; ++i)
        for (int k = d.guard.begin; k < d.guard.end; ++k) {
          const int jm = w.mode_at(i), km = w.mode_at(k);
          const cplx ref = (jm >= 0 && km >= 0) ? oracle::hankel_product_entry(ca, cb, jm, km) : cplx{};
          worst = std::max(worst, std::abs(d.product_defect.entries(i, k) - ref));
        }
      const auto hp = hardy_projection(w) * multiplication_operator(a, w) * complement_projection(w) *
                      multiplication_operator(b, w) * hardy_projection(w);
      worst_matrix = std::max(worst_matrix, guard_norm(d.product_defect - hp, d.guard));
    }
    std::ostringstream o;
    o << "max deviation from naive Hankel sums " << fmt("%.3g", worst) << ", from P M_a (1-P) M_b P "
      << fmt("%.3g", worst_matrix) << ", 10 pairs";
    return Outcome{worst <= 1e-12 && worst_matrix <= 1e-12, o.str()};
  });

  criterion(9, "square-root ideal", 10.0, [] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Matrix x = random_gaussian(64, 64, derive_seed(9, i));
      const auto s = singular_values(x).values;
      const auto g = singular_values(Matrix(x.adjoint() * x)).values;
      for (std::size_t k = 0; k < s.size(); ++k) worst = std::max(worst, std::abs(g[k] - s[k] * s[k]));
    }
    const Window w{-128, 127};
    const DilationData d = dilation_build(hardy_compression_map(w));
    std::ostringstream o;
    o << "max |mu(x*x) - mu(x)^2| " << fmt("%.3g", worst);
    bool match = true;
    for (double beta : {1.0, 0.5}) {
      std::vector<std::pair<int, cplx>> c;
      for (int k = 1; k <= 64; ++k) {
        c.emplace_back(k, std::pow(k, -beta));
        c.emplace_back(-k, std::pow(k, -beta));
      }
      const Matrix a = multiplication_operator(make_symbol(c), w).entries;
      const auto ev = defect_commutator_evidence(d, a, 2.0, 64);
      match = match && ev.defect_verdict.verdict == ev.commutator_verdict.verdict;
      o << "; beta=" << beta << ": defect@p " << to_string(ev.defect_verdict.verdict) << ", commutator@2p "
        << to_string(ev.commutator_verdict.verdict);
    }
    // off-diagonal a with prescribed corner singular values k^{-0.2}: divergent at p and at 2p
    {
      Eigen::VectorXcd s(128);
      for (int k = 0; k < 128; ++k) s(k) = std::pow(k + 1.0, -0.2);
      const Matrix u = haar_unitary(128, 1).entries, v = haar_unitary(128, 2).entries;
      const Matrix b = u * s.asDiagonal() * v.adjoint();
      Matrix a = Matrix::Zero(256, 256);
      a.bottomLeftCorner(128, 128) = b;
      a.topRightCorner(128, 128) = b.adjoint();
      const auto ev = defect_commutator_evidence(d, a, 2.0, 64);
      match = match && ev.defect_verdict.verdict == ev.commutator_verdict.verdict &&
              ev.defect_verdict.verdict == Verdict::divergent;
      o << "; corner k^-0.2: defect@p " << to_string(ev.defect_verdict.verdict) << ", commutator@2p "
        << to_string(ev.commutator_verdict.verdict);
    }
    return Outcome{worst <= 1e-10 && match, o.str()};
  });

  criterion(10, "epsilon sweep, N_max = 2^16, p = 2", 30.0, [] {
    const std::size_t n_max = 1 << 16;
    const SweepReport pw = epsilon_sweep(2.0, {0.3, 0.8}, LambdaFamily::pure_power, n_max, false);
    const double target = std::pow(2.0, 0.4);
    const auto& p03 = pw.points[0];
    const bool pw_ok = p03.at_p.verdict == Verdict::divergent &&
                       std::abs(p03.doubling_ratio - target) <= 0.1 * target &&
                       pw.points[1].at_p.verdict == Verdict::summable;

    const SweepReport pf = epsilon_sweep(2.0, {0.3, 0.5, 0.8}, LambdaFamily::paper_formula, n_max, false);
    bool pf_ok = true;
    std::ostringstream o;
    o << "pure_power: eps=0.3 " << to_string(p03.at_p.verdict) << " ratio " << fmt("%.4f", p03.doubling_ratio)
      << " (2^0.4=" << fmt("%.4f", target) << "), eps=0.8 " << to_string(pw.points[1].at_p.verdict)
      << "; paper_formula:";
    for (const auto& pt : pf.points) {
      // oracle: binomial series for lambda at the fit endpoints, then log-log slope
      const double k1 = n_max / 4.0, k2 = n_max / 2.0 - 1;
      const double l1 = oracle::chop_series(std::pow(k1, pt.epsilon));
      const double l2 = oracle::chop_series(std::pow(k2, pt.epsilon));
      const double chord = -std::log(l2 / l1) / std::log(k2 / k1);
      const double expect = 2.0 * pt.epsilon;
      const bool ok = std::abs(pt.measured_exponent - expect) <= 0.05 * expect &&
                      std::abs(pt.measured_exponent - chord) <= 0.01 * expect;
      pf_ok = pf_ok && ok;
      o << " eps=" << pt.epsilon << " measured " << fmt("%.4f", pt.measured_exponent) << " vs 2eps "
        << fmt("%.2f", expect) << " (stated eps: off by " << fmt("%.3f", pt.measured_exponent - pt.stated_exponent)
        << ")";
    }
    int code = 0;
    const std::string rep = run_cli_text({"sweep", "--p", "2", "--eps-min", "0.3", "--eps-max", "0.8", "--steps", "2",
                                          "--family", "paper"}, &code);
    const bool recorded = rep.find("\"rate_discrepancy\"") != std::string::npos &&
                          rep.find("\"stated_exponent\"") != std::string::npos;
    o << "; discrepancy field " << (recorded ? "present" : "MISSING") << " in sweep report";
    return Outcome{pw_ok && pf_ok && recorded, o.str()};
  });

  criterion(11, "byte-identical reports on rerun", 60.0, [] {
    const std::vector<std::vector<std::string>> configs{
        {"defect"},
        {"spectrum", "--operator", "hankel"},
        {"stinespring-check", "--maps", "4", "--pairs", "5"},
        {"sum-demo"},
        {"inverse-check"},
        {"deformation-check", "--eps", "0.3"},
        {"lemma-check", "--trials", "10"},
        {"sweep", "--with-lemma", "--steps", "4"},
    };
    int same = 0;
    std::string bad;
    for (const auto& c : configs) {
      int c1 = 0, c2 = 0;
      const std::string a = run_cli_text(c, &c1), b = run_cli_text(c, &c2);
      if (a == b && c1 == c2) {
        ++same;
      } else {
        bad += " " + c[0];
      }
    }
    std::ostringstream o;
    o << same << "/" << configs.size() << " commands identical" << (bad.empty() ? "" : "; differ:" + bad);
    return Outcome{same == static_cast<int>(configs.size()), o.str()};
  });

  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
