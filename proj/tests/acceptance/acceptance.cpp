// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: holosens_acceptance <corpus-dir> [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "holosens/experiment.hpp"
#include "holosens/phase_retrieval.hpp"
#include "holosens/random.hpp"
#include "straight_line_gs.hpp"

namespace fs = std::filesystem;
using namespace holosens;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Appends to the detail text and folds a condition into the verdict.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) verdict_.pass = false;
    note(ok ? what : "[fail] " + what);
  }
  void note(const std::string& what) {
    if (!verdict_.detail.empty()) verdict_.detail += "; ";
    verdict_.detail += what;
  }
  Verdict verdict() const { return verdict_; }

 private:
  Verdict verdict_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}
std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ComplexField random_field(std::size_t m, double pitch, std::uint64_t seed) {
  Rng rng(seed);
  ComplexField f(m, pitch);
  for (Complex& z : f.data()) z = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return f;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double d = 0.0;
  for (std::size_t p = 0; p < a.data().size(); ++p) d = std::max(d, std::abs(a.data()[p] - b.data()[p]));
  return d;
}

Image random_target(std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(m * m);
  for (double& x : v) x = rng.uniform();
  return Image(m, m, std::move(v));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- 1 ------------------------------------------------------------------

Verdict sobol_engine(const fs::path&) {
  Check c;
  const double a = 7.0, b = 0.1;
  // Closed-form Ishigami variance decomposition, inputs uniform on [-pi, pi].
  const double pi4 = std::pow(kPi, 4), pi8 = std::pow(kPi, 8);
  const double v1 = 0.5 * std::pow(1.0 + b * pi4 / 5.0, 2);
  const double v2 = a * a / 8.0;
  const double v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
  const double v = v1 + v2 + v13;
  const double s1_oracle[3] = {v1 / v, v2 / v, 0.0};
  const double st_oracle[3] = {(v1 + v13) / v, v2 / v, v13 / v};
  const double s1_ref[3] = {0.3139, 0.4424, 0.0};
  const double st_ref[3] = {0.5576, 0.4424, 0.2437};
  double oracle_gap = 0.0;
  for (int i = 0; i < 3; ++i)
    oracle_gap = std::max({oracle_gap, std::abs(s1_oracle[i] - s1_ref[i]),
                           std::abs(st_oracle[i] - st_ref[i])});
  c.expect(oracle_gap < 1e-3, fmt("closed-form oracle vs reference values max gap %.1e", oracle_gap));

  FmhBounds bounds;
  for (const char* n : {"x1", "x2", "x3"}) bounds.parameters.push_back({n, -kPi, kPi, false});
  const SaltelliDesign design = saltelli_design(bounds, 8192, true);
  std::vector<double> y(design.row_count());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double x1 = design.scaled_at(r, 0), x2 = design.scaled_at(r, 1), x3 = design.scaled_at(r, 2);
    y[r] = std::sin(x1) + a * std::sin(x2) * std::sin(x2) + b * std::pow(x3, 4) * std::sin(x1);
  }
  const SobolIndices idx = sobol_indices(design, y, 200, 1);
  for (int i = 0; i < 3; ++i) {
    c.expect(std::abs(idx.first[i].value - s1_ref[i]) <= 0.02,
             fmt("S1[%g]=%.4f", i + 1.0, idx.first[i].value));
    c.expect(std::abs(idx.total[i].value - st_ref[i]) <= 0.03,
             fmt("ST[%g]=%.4f", i + 1.0, idx.total[i].value));
  }
  return c.verdict();
}

// ---- 2 ------------------------------------------------------------------

Verdict design_shape(const fs::path&) {
  Check c;
  const FmhBounds bounds = paper_fmh_bounds();
  const std::size_t big = saltelli_design(bounds, 1024, true).row_count();
  const std::size_t small = saltelli_design(bounds, 256, true).row_count();
  c.expect(big == 10240, "N=1024 k=4 rows " + std::to_string(big));
  c.expect(small == 2560, "N=256 k=4 rows " + std::to_string(small));
  return c.verdict();
}

// ---- 3 ------------------------------------------------------------------

ComplexField brute_dft(const ComplexField& f, int sign) {
  const std::size_t m = f.size();
  ComplexField out(m, f.pitch());
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l < m; ++l) {
      Complex acc = 0.0;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s) {
          const double angle = sign * 2.0 * kPi * static_cast<double>(k * r + l * s) / static_cast<double>(m);
          acc += f(r, s) * Complex(std::cos(angle), std::sin(angle));
        }
      out(k, l) = acc / static_cast<double>(m);
    }
  return out;
}

Verdict propagation_invariants(const fs::path&) {
  Check c;
  double worst_round = 0.0, worst_energy = 0.0, worst_asm = 0.0;
  for (std::size_t m : {16u, 64u, 256u}) {
    const ComplexField f = random_field(m, 8e-6, m);
    for (ForwardModel fm : {ForwardModel::Fourier, ForwardModel::Asm}) {
      const FmhConfig fmh{633e-9, 8e-6, m, 0.0};
      const Propagator psi(fm, fmh);
      const ComplexField out = psi.forward(f);
      worst_round = std::max(worst_round, max_abs_diff(psi.inverse(out), f));
      worst_energy = std::max(worst_energy, std::abs(out.energy() - f.energy()) / f.energy());
    }
    const ComplexField spectrum = unitary_dft2(f, Direction::Forward);
    worst_round = std::max(worst_round, max_abs_diff(unitary_dft2(spectrum, Direction::Inverse), f));
    worst_energy = std::max(worst_energy, std::abs(spectrum.energy() - f.energy()) / f.energy());

    // Band-limited field: random spectrum restricted to the transfer support.
    const FmhConfig fmh{633e-9, 8e-6, m, 0.005};
    const TransferFunction h = asm_transfer(fmh, +1);
    ComplexField spec = random_field(m, fmh.pixel_pitch, 100 + m);
    for (std::size_t p = 0; p < spec.data().size(); ++p)
      if (h.values[p] == Complex(0.0, 0.0)) spec.data()[p] = 0.0;
    const ComplexField field = unitary_dft2(spec, Direction::Inverse);
    const ComplexField there = propagate_asm(field, fmh, Direction::Forward);
    worst_asm = std::max(worst_asm, max_abs_diff(propagate_asm(there, fmh, Direction::Inverse), field));
  }
  c.expect(worst_round <= 1e-12, fmt("round trip max |err| %.2e", worst_round));
  c.expect(worst_energy <= 1e-12, fmt("energy rel err %.2e", worst_energy));
  c.expect(worst_asm <= 1e-10, fmt("ASM +-d round trip %.2e", worst_asm));

  const ComplexField small = random_field(4, 1.0, 4);
  const double fwd = max_abs_diff(unitary_dft2(small, Direction::Forward), brute_dft(small, -1));
  const double inv = max_abs_diff(unitary_dft2(small, Direction::Inverse), brute_dft(small, +1));
  c.expect(std::max(fwd, inv) <= 1e-12, fmt("4x4 brute-force DFT %.2e", std::max(fwd, inv)));
  return c.verdict();
}

// ---- 4 ------------------------------------------------------------------

Verdict gaussian_beam(const fs::path&) {
  Check c;
  const std::size_t m = 256;
  const double pitch = 8e-6, lambda = 633e-9, w0 = 16 * pitch;
  const double z_r = kPi * w0 * w0 / lambda;
  const double c0 = static_cast<double>(m / 2);
  ComplexField beam(m, pitch);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t col = 0; col < m; ++col) {
      const double x = (static_cast<double>(col) - c0) * pitch, y = (static_cast<double>(r) - c0) * pitch;
      beam(r, col) = std::exp(-(x * x + y * y) / (w0 * w0));
    }
  const ComplexField out = propagate_asm(beam, FmhConfig{lambda, pitch, m, z_r}, Direction::Forward);
  double sum = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t col = 0; col < m; ++col) {
      const double i = std::norm(out(r, col));
      const double x = (static_cast<double>(col) - c0) * pitch, y = (static_cast<double>(r) - c0) * pitch;
      sum += i;
      sxx += i * x * x;
      syy += i * y * y;
    }
  const double expected = w0 * std::sqrt(2.0);
  const double wx = 2.0 * std::sqrt(sxx / sum), wy = 2.0 * std::sqrt(syy / sum);
  c.expect(std::abs(wx / expected - 1.0) <= 0.02, fmt("w_x/(w0 sqrt2)=%.4f", wx / expected));
  c.expect(std::abs(wy / expected - 1.0) <= 0.02, fmt("w_y/(w0 sqrt2)=%.4f", wy / expected));
  return c.verdict();
}

// ---- 5 ------------------------------------------------------------------

Verdict gs_behaviour(const fs::path& corpus_dir) {
  Check c;
  // (a) Target synthesized from a phase-only SLM field; the distance keeps the
  // whole grid inside the ASM band limit so the forward map is invertible.
  for (ForwardModel fm : {ForwardModel::Fourier, ForwardModel::Asm}) {
    const std::size_t m = 32;
    const FmhConfig fmh{800e-9, 10e-6, m, 0.0005};
    const Propagator psi(fm, fmh);
    const std::vector<double> phi = random_phase(m, 5);
    ComplexField slm(m, fmh.pixel_pitch);
    for (std::size_t p = 0; p < m * m; ++p) slm.data()[p] = std::polar(1.0, phi[p]);
    ComplexField e = psi.forward(slm);
    double peak = 0.0;
    for (const Complex& z : e.data()) peak = std::max(peak, std::norm(z));
    const double amp = 1.0 / std::sqrt(peak);
    std::vector<double> intensity(m * m), start(m * m);
    for (std::size_t p = 0; p < m * m; ++p) {
      e.data()[p] *= amp;
      intensity[p] = std::min(1.0, std::norm(e.data()[p]));
      start[p] = std::arg(e.data()[p]);
    }
    GsConfig cfg;
    cfg.forward_model = fm;
    cfg.fmh = fmh;
    cfg.iterations = 1;
    cfg.slm_amplitude = amp;
    cfg.initial_phase = start;
    const double psnr = gs_run(Image(m, m, intensity), cfg).records[0].metrics.psnr;
    c.expect(std::abs(psnr - 120.0) < 1e-6,
             std::string("(a) ") + std::string(to_string(fm)) + fmt(" PSNR@1 %.6f dB", psnr));
  }

  // (b) 100 seeded runs, corpus images resampled to 64 x 64.
  const auto corpus = load_corpus(corpus_dir, 100);
  std::size_t violations = 0;
  double worst_rise = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GsConfig cfg;
    cfg.fmh.slm_resolution = 64;
    cfg.iterations = 30;
    cfg.seed = seed;
    const Image target = resize_bilinear(corpus[seed % corpus.size()].image, 64);
    const GsTrace t = gs_run(target, cfg);
    for (std::size_t i = 1; i < t.records.size(); ++i) {
      const double rise = t.records[i].amplitude_error - t.records[i - 1].amplitude_error;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 1e-9) ++violations;
    }
  }
  c.expect(violations == 0, "(b) 100 runs, error increases > 1e-9: " + std::to_string(violations) +
                                fmt(", largest step %.2e", worst_rise));

  // (c) Bit-identical to the straight-line oracle at M=16.
  std::size_t mismatches = 0;
  for (ForwardModel fm : {ForwardModel::Fourier, ForwardModel::Asm}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      GsConfig cfg;
      cfg.forward_model = fm;
      cfg.fmh = {700e-9, 12e-6, 16, 0.03};
      cfg.iterations = 8;
      cfg.seed = seed;
      const Image target = resize_bilinear(corpus[seed].image, 16);
      const GsTrace t = gs_run(target, cfg);
      const auto o = testing_support::straight_line_gs(target, cfg);
      if (t.final_intensity.data != o.intensity || t.final_slm_phase != o.slm_phase) ++mismatches;
      for (std::size_t i = 0; i < o.errors.size(); ++i)
        if (t.records[i].amplitude_error != o.errors[i]) ++mismatches;
    }
  }
  c.expect(mismatches == 0, "(c) M=16 oracle mismatches: " + std::to_string(mismatches));
  return c.verdict();
}

// ---- 6 ------------------------------------------------------------------

Verdict fm_comparison(const fs::path& corpus_dir) {
  Check c;
  CampaignConfig cfg;
  for (auto& p : cfg.bounds.parameters)
    if (p.name == "M") {
      p.lower = 64;
      p.upper = 512;
    }
  cfg.base_samples = 128;
  cfg.iterations = 20;
  cfg.record_iterations = {1, 5, 12, 20};
  cfg.corpus = corpus_dir;
  cfg.image_limit = 10;
  cfg.master_seed = 2024;
  const FmComparisonResult result = run_fm_comparison(cfg);
  const auto report = fm_comparison_report(result, "psnr");
  for (const auto& r : report) {
    c.expect(r.median_fourier > r.median_asm && r.wilcoxon_fourier_greater.p_value < 0.025,
             "it " + std::to_string(r.iteration) +
                 fmt(": median F %.3f vs ASM %.3f dB, Wilcoxon p=%.2g", r.median_fourier,
                     r.median_asm, r.wilcoxon_fourier_greater.p_value));
  }
  for (const auto& r : report) {
    const bool final = r.iteration == report.back().iteration;
    const std::string text = "Spearman(M, F) it " + std::to_string(r.iteration) +
                             fmt(" rho=%.3f p=%.3g", r.spearman_m_fourier.statistic,
                                 r.spearman_m_fourier.p_value);
    if (final)
      c.expect(r.spearman_m_fourier.statistic < 0 && r.spearman_m_fourier.p_value < 0.05, text);
    else
      c.note(text);
  }
  return c.verdict();
}

// ---- 7 ------------------------------------------------------------------

Verdict fmh_sensitivity(const fs::path& corpus_dir) {
  Check c;
  CampaignConfig cfg;
  cfg.bounds = FmhBounds{{{"lambda", 400e-9, 800e-9, false}, {"pitch", 4e-6, 20e-6, false},
                          {"M", 64, 256, true}, {"d", 0.01, 0.3, false}}};
  cfg.base_samples = 64;
  cfg.second_order = true;
  cfg.iterations = 30;
  cfg.record_iterations = {30};
  cfg.corpus = corpus_dir;
  cfg.image_limit = 10;
  cfg.master_seed = 2024;
  const CampaignResult result = run_fmh_campaign(cfg);
  c.note("runs " + std::to_string(result.rows.size()));
  const SobolIndices idx = sobol_indices(result.design, result.column("psnr", 30), 200, 1);
  std::size_t top = 0;
  std::string ranking;
  for (std::size_t i = 0; i < idx.names.size(); ++i) {
    if (idx.total[i].value > idx.total[top].value) top = i;
    ranking += idx.names[i] + fmt(" ST=%.3f S1=%.3f ", idx.total[i].value, idx.first[i].value);
  }
  c.note(ranking);
  c.expect(idx.names[top] == "pitch", "top ST for PSNR@30: " + idx.names[top]);
  return c.verdict();
}

// ---- 8 ------------------------------------------------------------------

Verdict metric_identities(const fs::path&) {
  Check c;
  const std::vector<double> gs{0.3, 0.7, 1.0, 0.45};
  const double gsw = gs_weighted_metric(gs, gs);
  c.expect(gsw == 1.0, fmt("gsw(P=GS)=%.17g", gsw));
  const double gm = generalization_metric(0.2, 0.5, 0.8);
  c.expect(std::abs(gm - 0.5) < 1e-15, fmt("gm(0.2,0.5,0.8)=%.17g", gm));
  const std::vector<double> same{0.62, 0.62, 0.62};
  const double res = resilience_metric(0.62, same);
  c.expect(res == 1.0, fmt("resilience(zero deviation)=%.17g", res));
  const double comp = composite_metric({1.0, 0.0, 0.0}, 1.37, 0.5, 0.2);
  c.expect(comp == 1.37, fmt("composite(1,0,0)=%.17g", comp));
  return c.verdict();
}

// ---- 9 ------------------------------------------------------------------

Verdict determinism(const fs::path& corpus_dir) {
  Check c;
  CampaignConfig cfg;
  cfg.bounds = FmhBounds{{{"lambda", 400e-9, 800e-9, false}, {"pitch", 4e-6, 20e-6, false},
                          {"M", 24, 48, true}, {"d", 0.001, 0.05, false}}};
  cfg.base_samples = 4;
  cfg.iterations = 5;
  cfg.corpus = corpus_dir;
  cfg.image_limit = 3;
  cfg.master_seed = 99;
  const fs::path root = fs::temp_directory_path() / "holosens_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> results, comparisons;
  for (std::size_t workers : {1u, 2u, 4u}) {
    cfg.workers = workers;
    CampaignOptions options;
    options.output_dir = root / ("w" + std::to_string(workers));
    run_fmh_campaign(cfg, options);
    results.push_back(slurp(*options.output_dir / "results.csv"));
    std::ostringstream fm;
    CampaignConfig fm_cfg = cfg;
    fm_cfg.base_samples = 6;
    write_fm_comparison_csv(fm, run_fm_comparison(fm_cfg));
    comparisons.push_back(fm.str());
  }
  fs::remove_all(root);
  const bool same_results = results[0] == results[1] && results[0] == results[2];
  const bool same_fm = comparisons[0] == comparisons[1] && comparisons[0] == comparisons[2];
  c.expect(same_results, "campaign results.csv byte-identical for workers 1/2/4 (" +
                             std::to_string(results[0].size()) + " bytes)");
  c.expect(same_fm, "FM comparison CSV byte-identical for workers 1/2/4");
  return c.verdict();
}

// ---- 10 -----------------------------------------------------------------

std::vector<double> midrank_oracle(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double x : v) {
      less += x < v[i];
      equal += x == v[i];
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Verdict statistics_oracles(const fs::path&) {
  Check c;
  Rng rng(2718);
  double worst_p = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(rng.below(6));
        y[i] = static_cast<double>(rng.below(6));
      }
      std::vector<double> d, mag;
      for (std::size_t i = 0; i < n; ++i)
        if (x[i] != y[i]) {
          d.push_back(x[i] - y[i]);
          mag.push_back(std::abs(x[i] - y[i]));
        }
      if (d.empty()) continue;
      const std::vector<double> ranks = midrank_oracle(mag);
      double w = 0;
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0) w += ranks[i];
      double le = 0, ge = 0;
      for (std::uint64_t mask = 0; mask < (1ULL << d.size()); ++mask) {
        double s = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
          if (mask & (1ULL << i)) s += ranks[i];
        le += s <= w + 1e-9;
        ge += s >= w - 1e-9;
      }
      const double total = std::ldexp(1.0, static_cast<int>(d.size()));
      const double p_two = std::min(1.0, 2 * std::min(le, ge) / total);
      const TestResult g = wilcoxon_signed_rank(x, y, Alternative::Greater);
      const TestResult l = wilcoxon_signed_rank(x, y, Alternative::Less);
      const TestResult t = wilcoxon_signed_rank(x, y, Alternative::TwoSided);
      worst_p = std::max({worst_p, std::abs(g.p_value - ge / total), std::abs(l.p_value - le / total),
                          std::abs(t.p_value - p_two)});
      if (!g.exact) worst_p = 1.0;
      ++cases;
    }
  }
  c.expect(worst_p <= 1e-15, "Wilcoxon exact vs 2^n enumeration, " + std::to_string(cases) +
                                 fmt(" cases, max |dp| %.1e", worst_p));

  double worst_rho = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.below(40);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(5));
      b[i] = static_cast<double>(rng.below(4)) + 0.25 * a[i];
    }
    if (*std::min_element(a.begin(), a.end()) == *std::max_element(a.begin(), a.end())) continue;
    const double oracle = correlation(midrank_oracle(a), midrank_oracle(b));
    worst_rho = std::max(worst_rho, std::abs(spearman(a, b).statistic - oracle));
  }
  c.expect(worst_rho <= 1e-12, fmt("Spearman with ties vs mid-rank oracle max |d| %.1e", worst_rho));
  return c.verdict();
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Verdict(const fs::path&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <corpus-dir> [criterion ...]\n", argv[0]);
    return 2;
  }
  const fs::path corpus = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria{
      {1, "Sobol engine on Ishigami", 10, sobol_engine},
      {2, "Saltelli design shape", 1, design_shape},
      {3, "propagation invariants", 5, propagation_invariants},
      {4, "Gaussian beam radius at z_R", 5, gaussian_beam},
      {5, "GS behaviour", 120, gs_behaviour},
      {6, "forward-model comparison", 1800, fm_comparison},
      {7, "FMH sensitivity ranking", 3600, fmh_sensitivity},
      {8, "benchmarking metric identities", 1, metric_identities},
      {9, "worker-count determinism", 600, determinism},
      {10, "statistics oracles", 5, statistics_oracles},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    if (!only.empty() && !only.count(cr.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = cr.run(corpus);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget_s) {
      v.pass = false;
      v.detail += fmt("; [fail] runtime %.1f s over budget %.0f s", secs, cr.budget_s);
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", cr.id, cr.title,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
