// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nlm/io.hpp"
#include "nlm/parallel.hpp"

namespace nlm {

namespace {

constexpr double kSqrt3Over2 = 0.86602540378443864676;

void simplex_xy(double p1, double p2, double* x, double* y) {
  *x = p1 + 0.5 * p2;
  *y = kSqrt3Over2 * p2;
}

SchmidtSpectrum spectrum_from_probs(std::vector<double> probs) {
  double sum = 0.0;
  for (double p : probs) sum += p;
  std::vector<double> lambdas(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    lambdas[i] = std::sqrt(std::max(0.0, probs[i]) / sum);
  }
  return SchmidtSpectrum(static_cast<int>(probs.size()), std::move(lambdas));
}

std::vector<GridPoint> simplex_grid(int resolution, int dim) {
  if (resolution < 2) {
    throw std::invalid_argument("simplex grid: resolution must be >= 2");
  }
  std::vector<GridPoint> points;
  points.reserve(static_cast<std::size_t>(resolution + 1) * (resolution + 2) / 2);
  const double h = 1.0 / resolution;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j + i <= resolution; ++j) {
      const int k = resolution - i - j;
      GridPoint pt;
      pt.probs.assign(dim, 0.0);
      pt.probs[0] = i * h;
      pt.probs[1] = j * h;
      pt.probs[2] = k * h;
      simplex_xy(pt.probs[1], pt.probs[2], &pt.x, &pt.y);
      pt.m = nlm_schmidt(spectrum_from_probs(pt.probs)).value;
      points.push_back(std::move(pt));
    }
  }
  return points;
}

// Pattern search over the free coordinates (p0, p1) of a 3-point simplex;
// f must be defined on p0, p1 >= 0, p0 + p1 <= 1.
template <typename F>
MaxSearchResult pattern_search_simplex(const F& f, int coarse) {
  double bestP0 = 1.0, bestP1 = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  const double h0 = 1.0 / coarse;
  for (int i = 0; i <= coarse; ++i) {
    for (int j = 0; j + i <= coarse; ++j) {
      const double v = f(i * h0, j * h0);
      if (v > best) {
        best = v;
        bestP0 = i * h0;
        bestP1 = j * h0;
      }
    }
  }
  double h = h0;
  while (h > 1e-8) {
    bool improved = false;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const double p0 = bestP0 + di * h;
        const double p1 = bestP1 + dj * h;
        if (p0 < 0.0 || p1 < 0.0 || p0 + p1 > 1.0) continue;
        const double v = f(p0, p1);
        if (v > best) {
          best = v;
          bestP0 = p0;
          bestP1 = p1;
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.25;
  }
  MaxSearchResult result;
  result.m = best;
  result.probs = {bestP0, bestP1, std::max(0.0, 1.0 - bestP0 - bestP1)};
  return result;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error(context + ": bad numeric field '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::vector<double> sample_spectrum_raw(int dim, RandomStream& stream) {
  if (dim < 2) throw std::invalid_argument("sample_spectrum: dim must be >= 2");
  std::vector<double> lambdas(dim);
  double sumSq = 0.0;
  for (double& l : lambdas) {
    l = std::abs(stream.normal());
    sumSq += l * l;
  }
  const double inv = 1.0 / std::sqrt(sumSq);
  for (double& l : lambdas) l *= inv;
  return lambdas;
}

SchmidtSpectrum sample_spectrum(int dim, RandomStream& stream) {
  return SchmidtSpectrum(dim, sample_spectrum_raw(dim, stream));
}

std::vector<ScanRecord> run_scan(int dim, int numSamples, const ScanConfig& config) {
  if (dim < 2 || dim > 5) {
    throw std::invalid_argument("run_scan: closed forms cover dims 2..5 only");
  }
  if (numSamples < 1) throw std::invalid_argument("run_scan: need numSamples >= 1");

  std::vector<ScanRecord> records(numSamples);
  parallel_for(static_cast<std::size_t>(numSamples), [&](std::size_t i) {
    const std::uint64_t sampleSeed = config.seed ^ splitmix64(i);
    RandomStream stream(sampleSeed);

    ScanRecord rec;
    rec.dim = dim;
    rec.lambdas = sample_spectrum_raw(dim, stream);
    rec.nStarts = config.nStarts;
    rec.maxIter = config.maxIter;
    rec.seed = sampleSeed;

    const SchmidtSpectrum spectrum(dim, rec.lambdas);
    rec.mFormula = nlm_schmidt(spectrum).value;

    OptimizerConfig oc;
    oc.nStarts = config.nStarts;
    oc.maxIter = config.maxIter;
    oc.gradTolerance = config.gradTolerance;
    oc.seed = sampleSeed;
    oc.initScale = config.initScale;
    oc.gradientMode = config.gradientMode;
    try {
      const OptResult opt = minimize(state_from_spectrum(spectrum), oc);
      rec.mNumerical = opt.minValue;
      std::size_t ok = 0;
      for (bool c : opt.converged) ok += c ? 1 : 0;
      rec.convergedFraction =
          static_cast<double>(ok) / static_cast<double>(opt.converged.size());
      rec.residual = rec.mFormula - rec.mNumerical;
    } catch (const std::exception&) {  // record the failure, keep scanning
      rec.mNumerical = std::numeric_limits<double>::quiet_NaN();
      rec.residual = std::numeric_limits<double>::quiet_NaN();
      rec.convergedFraction = 0.0;
    }
    records[i] = std::move(rec);
  });
  return records;
}

ResidualStats residual_stats(const std::vector<ScanRecord>& records, double threshold) {
  ResidualStats stats;
  double sumAbs = 0.0;
  for (const ScanRecord& rec : records) {
    if (!std::isfinite(rec.residual)) continue;
    if (stats.count == 0 || rec.residual > stats.maxResidual) {
      stats.maxResidual = rec.residual;
    }
    if (rec.residual < 0.0) ++stats.negativeCount;
    if (std::abs(rec.residual) < threshold) stats.fractionBelow += 1.0;
    sumAbs += std::abs(rec.residual);
    ++stats.count;
  }
  if (stats.count == 0) {
    throw std::invalid_argument("residual_stats: no records with finite residuals");
  }
  stats.meanAbs = sumAbs / static_cast<double>(stats.count);
  stats.fractionBelow /= static_cast<double>(stats.count);
  double varAcc = 0.0;
  for (const ScanRecord& rec : records) {
    if (!std::isfinite(rec.residual)) continue;
    const double d = std::abs(rec.residual) - stats.meanAbs;
    varAcc += d * d;
  }
  stats.stdAbs = std::sqrt(varAcc / static_cast<double>(stats.count));
  return stats;
}

std::vector<GridPoint> simplex_grid_qutrit(int resolution) {
  return simplex_grid(resolution, 3);
}

std::vector<GridPoint> ququint_slice_grid(int resolution) {
  return simplex_grid(resolution, 5);
}

std::vector<std::vector<BandSlicePoint>> n4_band_slices(
    const std::vector<ScanRecord>& records, const std::vector<double>& centers,
    double halfwidth) {
  for (const ScanRecord& rec : records) {
    if (rec.dim != 4 || rec.lambdas.size() != 4) {
      throw std::invalid_argument("n4_band_slices: records must come from an N=4 scan");
    }
  }
  std::vector<std::vector<BandSlicePoint>> slices(centers.size());
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    for (const ScanRecord& rec : records) {
      const double lam3sq = rec.lambdas[3] * rec.lambdas[3];
      if (std::abs(lam3sq - centers[ci]) > halfwidth) continue;
      const double rest = 1.0 - lam3sq;
      if (rest < 1e-12) continue;  // nothing left to project
      BandSlicePoint pt;
      pt.lambda3Sq = lam3sq;
      pt.q0 = rec.lambdas[0] * rec.lambdas[0] / rest;
      pt.q1 = rec.lambdas[1] * rec.lambdas[1] / rest;
      pt.q2 = rec.lambdas[2] * rec.lambdas[2] / rest;
      simplex_xy(pt.q1, pt.q2, &pt.x, &pt.y);
      pt.residual = rec.residual;
      slices[ci].push_back(pt);
    }
  }
  return slices;
}

MaxSearchResult max_search_qutrit() {
  const auto f = [](double p0, double p1) {
    return nlm_schmidt(spectrum_from_probs({p0, p1, 1.0 - p0 - p1})).value;
  };
  return pattern_search_simplex(f, 16);
}

MaxSearchResult max_search_ququint_slice() {
  const auto f = [](double p0, double p1) {
    return nlm_schmidt(spectrum_from_probs({p0, p1, 1.0 - p0 - p1, 0.0, 0.0})).value;
  };
  MaxSearchResult result = pattern_search_simplex(f, 16);
  result.probs.push_back(0.0);
  result.probs.push_back(0.0);
  return result;
}

void write_scan_csv(const std::string& path, const std::vector<ScanRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("write_scan_csv: no records");
  }
  const int dim = records.front().dim;
  std::ofstream out = open_out(path);
  out << "dim";
  for (int i = 0; i < dim; ++i) out << ",lambda_" << i;
  out << ",m_formula,m_numerical,residual,n_starts,max_iter,converged_fraction,seed\n";
  for (const ScanRecord& rec : records) {
    if (rec.dim != dim || static_cast<int>(rec.lambdas.size()) != dim) {
      throw std::invalid_argument("write_scan_csv: mixed-dimension records");
    }
    out << rec.dim;
    for (double l : rec.lambdas) out << ',' << format_full(l);
    out << ',' << format_full(rec.mFormula) << ',' << format_full(rec.mNumerical)
        << ',' << format_full(rec.residual) << ',' << rec.nStarts << ','
        << rec.maxIter << ',' << format_full(rec.convergedFraction) << ','
        << rec.seed << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<ScanRecord> read_scan_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const std::vector<std::string> header = split_line(line);
  int dim = 0;
  for (const std::string& h : header) {
    if (h.rfind("lambda_", 0) == 0) ++dim;
  }
  const std::size_t expected = static_cast<std::size_t>(dim) + 8;
  if (dim < 2 || header.size() != expected || header[0] != "dim") {
    throw std::runtime_error(path + ": not a scan CSV");
  }

  std::vector<ScanRecord> records;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    const std::string ctx = path + ":" + std::to_string(lineNo);
    if (f.size() != expected) throw std::runtime_error(ctx + ": wrong field count");
    ScanRecord rec;
    rec.dim = static_cast<int>(parse_double(f[0], ctx));
    if (rec.dim != dim) throw std::runtime_error(ctx + ": dim mismatch");
    double sumSq = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double l = parse_double(f[1 + i], ctx);
      if (l < 0.0) throw std::runtime_error(ctx + ": negative Schmidt coefficient");
      rec.lambdas.push_back(l);
      sumSq += l * l;
    }
    if (std::abs(sumSq - 1.0) > kNormTol) {
      throw std::runtime_error(ctx + ": lambdas are not a unit spectrum");
    }
    rec.mFormula = parse_double(f[dim + 1], ctx);
    rec.mNumerical = parse_double(f[dim + 2], ctx);
    rec.residual = parse_double(f[dim + 3], ctx);
    rec.nStarts = static_cast<int>(parse_double(f[dim + 4], ctx));
    rec.maxIter = static_cast<int>(parse_double(f[dim + 5], ctx));
    rec.convergedFraction = parse_double(f[dim + 6], ctx);
    rec.seed = std::strtoull(f[dim + 7].c_str(), nullptr, 10);
    if (std::isfinite(rec.residual) &&
        std::abs(rec.residual - (rec.mFormula - rec.mNumerical)) > 1e-12) {
      throw std::runtime_error(ctx + ": residual inconsistent with its record");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_grid_csv(const std::string& path, const std::vector<GridPoint>& points) {
  if (points.empty()) throw std::invalid_argument("write_grid_csv: no points");
  const std::size_t dim = points.front().probs.size();
  std::ofstream out = open_out(path);
  out << "x,y";
  for (std::size_t i = 0; i < dim; ++i) out << ",p" << i;
  out << ",m\n";
  for (const GridPoint& pt : points) {
    if (pt.probs.size() != dim) {
      throw std::invalid_argument("write_grid_csv: mixed-dimension points");
    }
    out << format_full(pt.x) << ',' << format_full(pt.y);
    for (double p : pt.probs) out << ',' << format_full(p);
    out << ',' << format_full(pt.m) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

void write_band_slice_csv(const std::string& path,
                          const std::vector<BandSlicePoint>& points) {
  std::ofstream out = open_out(path);
  out << "x,y,q0,q1,q2,lambda3_sq,residual\n";
  for (const BandSlicePoint& pt : points) {
    out << format_full(pt.x) << ',' << format_full(pt.y) << ','
        << format_full(pt.q0) << ',' << format_full(pt.q1) << ','
        << format_full(pt.q2) << ',' << format_full(pt.lambda3Sq) << ','
        << format_full(pt.residual) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace nlm
