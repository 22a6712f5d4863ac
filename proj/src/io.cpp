// Copyright 2026 The nlmagic Authors
// SPDX-License-Identifier: Apache-2.0

#include "nlm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace nlm {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

PureBipartiteState load_state_json(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.contains("dim") || !j.contains("amplitudes")) {
    throw std::runtime_error(path + ": state file needs dim and amplitudes");
  }
  const int n = j.at("dim").get<int>();
  const json& rows = j.at("amplitudes");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw std::runtime_error(path + ": amplitudes must be dim rows");
  }
  MatrixC x(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw std::runtime_error(path + ": amplitude rows must have dim entries");
    }
    for (int c = 0; c < n; ++c) {
      const json& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2) {
        throw std::runtime_error(path + ": amplitude entries must be [re, im]");
      }
      x(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return PureBipartiteState(n, std::move(x));
}

void save_state_json(const PureBipartiteState& state, const std::string& path) {
  const int n = state.dim();
  json rows = json::array();
  for (int r = 0; r < n; ++r) {
    json row = json::array();
    for (int c = 0; c < n; ++c) {
      const Complex v = state.amplitudes()(r, c);
      row.push_back(json::array({v.real(), v.imag()}));
    }
    rows.push_back(std::move(row));
  }
  save_json_file(path, json{{"dim", n}, {"amplitudes", std::move(rows)}});
}

RawSpectrum load_spectrum_json_raw(const std::string& path) {
  const json j = load_json_file(path);
  if (!j.contains("dim") || !j.contains("lambdas")) {
    throw std::runtime_error(path + ": spectrum file needs dim and lambdas");
  }
  RawSpectrum raw;
  raw.dim = j.at("dim").get<int>();
  raw.lambdas = j.at("lambdas").get<std::vector<double>>();
  if (static_cast<int>(raw.lambdas.size()) != raw.dim) {
    throw std::runtime_error(path + ": lambdas length must equal dim");
  }
  return raw;
}

SchmidtSpectrum load_spectrum_json(const std::string& path) {
  RawSpectrum raw = load_spectrum_json_raw(path);
  return SchmidtSpectrum(raw.dim, std::move(raw.lambdas));
}

void save_spectrum_json(const SchmidtSpectrum& spectrum, const std::string& path) {
  save_json_file(path, json{{"dim", spectrum.dim()}, {"lambdas", spectrum.lambdas()}});
}

SchmidtSpectrum make_normalized_spectrum(int dim, std::vector<double> lambdas,
                                         double* deviation) {
  double sumSq = 0.0;
  for (double l : lambdas) {
    if (!std::isfinite(l) || l < 0.0) {
      throw std::invalid_argument(
          "make_normalized_spectrum: entries must be finite and non-negative");
    }
    sumSq += l * l;
  }
  if (sumSq <= 0.0) {
    throw std::invalid_argument("make_normalized_spectrum: all-zero spectrum");
  }
  if (deviation) *deviation = std::abs(sumSq - 1.0);
  const double inv = 1.0 / std::sqrt(sumSq);
  for (double& l : lambdas) l *= inv;
  return SchmidtSpectrum(dim, std::move(lambdas));
}

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace nlm
