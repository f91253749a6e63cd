#include <cmath>
#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "holosens/error.hpp"
#include "holosens/random.hpp"
#include "holosens/sensitivity.hpp"

namespace holosens {

void FmhBounds::validate() const {
  require(!parameters.empty(), ErrorKind::InvalidArgument, "bounds have no parameters");
  for (const auto& p : parameters) {
    require(std::isfinite(p.lower) && std::isfinite(p.upper) && p.lower < p.upper,
            ErrorKind::InvalidArgument, "bound for '" + p.name + "' needs lower < upper");
  }
}

double FmhBounds::scale(std::size_t parameter, double unit) const {
  const ParameterBound& p = parameters.at(parameter);
  const double v = p.lower + unit * (p.upper - p.lower);
  return p.integer ? std::round(v) : v;
}

FmhBounds paper_fmh_bounds() {
  return FmhBounds{{
      {"lambda", 200e-9, 1800e-9, false},
      {"pitch", 4e-6, 80e-6, false},
      {"M", 128, 4000, true},
      {"d", 0.0, 1.5, false},
  }};
}

std::string block_label(const DesignRow& row) {
  switch (row.block) {
    case Block::A: return "A";
    case Block::B: return "B";
    case Block::AB: return "AB" + std::to_string(row.column + 1);
    case Block::BA: return "BA" + std::to_string(row.column + 1);
  }
  return "?";
}

std::size_t SaltelliDesign::row_index(Block block, std::size_t column, std::size_t base) const {
  const std::size_t start = base * rows_per_base();
  switch (block) {
    case Block::A: return start;
    case Block::AB: return start + 1 + column;
    case Block::BA: return start + 1 + dimensions + column;
    case Block::B: return start + rows_per_base() - 1;
  }
  return start;
}

SaltelliDesign saltelli_design(const FmhBounds& bounds, std::size_t base_samples,
                               bool second_order) {
  bounds.validate();
  require(base_samples >= 2, ErrorKind::InvalidArgument, "Saltelli design needs N >= 2");
  const std::size_t k = bounds.size();
  require(2 * k <= kSobolMaxDim, ErrorKind::InvalidArgument,
          "too many parameters for the embedded Sobol table");

  SaltelliDesign d;
  d.base_samples = base_samples;
  d.dimensions = k;
  d.second_order = second_order;
  d.bounds = bounds;
  const std::size_t per = d.rows_per_base();
  const std::size_t total = base_samples * per;
  d.rows.reserve(total);
  d.unit.reserve(total * k);

  const std::vector<double> base = sobol_points(2 * k, base_samples);
  auto push = [&](Block block, std::size_t column, std::size_t n, const double* a,
                  const double* b) {
    d.rows.push_back(DesignRow{block, column, n});
    for (std::size_t c = 0; c < k; ++c) {
      const bool from_b = (block == Block::B) || (block == Block::AB && c == column) ||
                          (block == Block::BA && c != column);
      d.unit.push_back(from_b ? b[c] : a[c]);
    }
  };
  for (std::size_t n = 0; n < base_samples; ++n) {
    const double* a = &base[n * 2 * k];
    const double* b = a + k;
    push(Block::A, 0, n, a, b);
    for (std::size_t i = 0; i < k; ++i) push(Block::AB, i, n, a, b);
    if (second_order) {
      for (std::size_t i = 0; i < k; ++i) push(Block::BA, i, n, a, b);
    }
    push(Block::B, 0, n, a, b);
  }

  d.scaled.resize(d.unit.size());
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < k; ++c) d.scaled[r * k + c] = bounds.scale(c, d.unit[r * k + c]);
  }
  return d;
}

namespace {

// Model outputs regrouped by block, each of length N.
struct BlockOutputs {
  std::vector<double> a, b;
  std::vector<std::vector<double>> ab, ba;
};

BlockOutputs split_outputs(const SaltelliDesign& design, const std::vector<double>& y) {
  const std::size_t n = design.base_samples, k = design.dimensions;
  BlockOutputs out{std::vector<double>(n), std::vector<double>(n),
                   std::vector<std::vector<double>>(k, std::vector<double>(n)),
                   std::vector<std::vector<double>>(design.second_order ? k : 0,
                                                    std::vector<double>(n))};
  for (std::size_t base = 0; base < n; ++base) {
    out.a[base] = y[design.row_index(Block::A, 0, base)];
    out.b[base] = y[design.row_index(Block::B, 0, base)];
    for (std::size_t i = 0; i < k; ++i) {
      out.ab[i][base] = y[design.row_index(Block::AB, i, base)];
      if (design.second_order) out.ba[i][base] = y[design.row_index(Block::BA, i, base)];
    }
  }
  return out;
}

struct PointEstimates {
  std::vector<double> first, total, second;  // second: k*k
};

// Estimates on the base indices listed in sample (bootstrap-aware).
PointEstimates estimate(const BlockOutputs& f, const std::vector<std::size_t>& sample,
                        std::size_t k, bool second_order) {
  const auto n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (std::size_t s : sample) mean += f.a[s] + f.b[s];
  mean /= 2.0 * n;
  double var = 0.0;
  for (std::size_t s : sample) {
    var += (f.a[s] - mean) * (f.a[s] - mean) + (f.b[s] - mean) * (f.b[s] - mean);
  }
  var /= 2.0 * n;
  // Rounding in the mean can leave a tiny positive variance for constant data.
  bool constant = true;
  const double ref = f.a[sample.front()];
  for (std::size_t s : sample) constant = constant && f.a[s] == ref && f.b[s] == ref;

  PointEstimates e{std::vector<double>(k), std::vector<double>(k),
                   std::vector<double>(second_order ? k * k : 0, 0.0)};
  if (constant || var <= 0.0) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::fill(e.first.begin(), e.first.end(), nan);
    std::fill(e.total.begin(), e.total.end(), nan);
    std::fill(e.second.begin(), e.second.end(), nan);
    return e;
  }
  // Products use outputs centered on the A/B mean. The indices of y - c equal
  // those of y, but the uncentered products have variance growing with
  // mean^2 / Var, which swamps S1 and S2 for outputs like PSNR in dB.
  for (std::size_t i = 0; i < k; ++i) {
    double s1 = 0.0, st = 0.0;
    for (std::size_t s : sample) {
      const double diff = f.ab[i][s] - f.a[s];
      s1 += (f.b[s] - mean) * diff;
      st += diff * diff;
    }
    e.first[i] = s1 / n / var;
    e.total[i] = 0.5 * st / n / var;
  }
  if (second_order) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        double acc = 0.0;
        for (std::size_t s : sample)
          acc += (f.ba[i][s] - mean) * (f.ab[j][s] - mean) - (f.a[s] - mean) * (f.b[s] - mean);
        e.second[i * k + j] = acc / n / var - e.first[i] - e.first[j];
      }
    }
  }
  return e;
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

SobolIndices sobol_indices(const SaltelliDesign& design, const std::vector<double>& y,
                           std::size_t bootstrap_resamples, std::uint64_t seed) {
  require(y.size() == design.row_count(), ErrorKind::SizeMismatch,
          "output length does not match design rows");
  for (double v : y) {
    require(std::isfinite(v), ErrorKind::InvalidArgument, "model outputs must be finite");
  }
  const std::size_t n = design.base_samples, k = design.dimensions;
  const BlockOutputs f = split_outputs(design, y);

  std::vector<std::size_t> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = i;
  const PointEstimates point = estimate(f, identity, k, design.second_order);
  require(!std::isnan(point.first.at(0)), ErrorKind::VarianceZero,
          "model output has zero variance over A and B");

  const std::size_t pairs = design.second_order ? k * k : 0;
  std::vector<std::vector<double>> boot_first(k), boot_total(k), boot_second(pairs);
  Rng rng(seed);
  std::vector<std::size_t> sample(n);
  for (std::size_t r = 0; r < bootstrap_resamples; ++r) {
    for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
    const PointEstimates e = estimate(f, sample, k, design.second_order);
    // A degenerate resample carries no spread information; skip it.
    if (std::isnan(e.first[0])) continue;
    for (std::size_t i = 0; i < k; ++i) {
      boot_first[i].push_back(e.first[i]);
      boot_total[i].push_back(e.total[i]);
    }
    for (std::size_t p = 0; p < pairs; ++p) boot_second[p].push_back(e.second[p]);
  }

  constexpr double z95 = 1.959963984540054;
  SobolIndices out;
  out.has_second = design.second_order;
  for (const auto& p : design.bounds.parameters) out.names.push_back(p.name);
  for (std::size_t i = 0; i < k; ++i) {
    out.first.push_back({point.first[i], z95 * sample_stddev(boot_first[i])});
    out.total.push_back({point.total[i], z95 * sample_stddev(boot_total[i])});
  }
  out.second.resize(pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    out.second[p] = {point.second[p], z95 * sample_stddev(boot_second[p])};
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void write_design_csv(std::ostream& out, const SaltelliDesign& design) {
  out << "block,base_index";
  for (const auto& p : design.bounds.parameters) out << ',' << p.name;
  out << '\n';
  for (std::size_t r = 0; r < design.row_count(); ++r) {
    out << block_label(design.rows[r]) << ',' << design.rows[r].base_index;
    for (std::size_t c = 0; c < design.dimensions; ++c) out << ',' << fmt(design.scaled_at(r, c));
    out << '\n';
  }
}

void write_indices_csv(std::ostream& out, const SobolIndices& indices) {
  out << "param,order,S,conf\n";
  const std::size_t k = indices.names.size();
  for (std::size_t i = 0; i < k; ++i) {
    out << indices.names[i] << ",S1," << fmt(indices.first[i].value) << ','
        << fmt(indices.first[i].conf) << '\n';
  }
  for (std::size_t i = 0; i < k; ++i) {
    out << indices.names[i] << ",ST," << fmt(indices.total[i].value) << ','
        << fmt(indices.total[i].conf) << '\n';
  }
  if (indices.has_second) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const IndexEstimate& e = indices.s2(i, j);
        out << indices.names[i] << ':' << indices.names[j] << ",S2," << fmt(e.value) << ','
            << fmt(e.conf) << '\n';
      }
    }
  }
}

}  // namespace holosens
