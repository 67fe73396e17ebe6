#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symaccel/types.hpp"

namespace symaccel {

struct Dataset {
  Matrix features;
  Vector labels;  // entries in {0,1}
  std::string name;
  std::string provenance;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DelimitedOptions {
  char delimiter = ',';
  bool has_header = false;
  std::string label_column;  // by name (needs header) ...
  int label_index = -1;      // ... or by 0-based index
  std::string positive_label = "1";
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

inline double parse_feature(const std::string& s, std::size_t row, std::size_t col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("non-numeric or non-finite feature at row " + std::to_string(row) +
                    ", column " + std::to_string(col) + ": '" + s + "'");
  }
}

}  // namespace detail

// Parses delimited text; the label column maps positive_label -> 1, any other
// value -> 0. Errors carry row/column locations.
inline Dataset load_delimited(const std::string& path, const DelimitedOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);

  std::string line;
  std::size_t row = 0;
  int label_idx = opt.label_index;
  std::size_t ncols = 0;

  if (opt.has_header) {
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    ++row;
    const auto header = detail::split_fields(line, opt.delimiter);
    ncols = header.size();
    if (!opt.label_column.empty()) {
      const auto it = std::find(header.begin(), header.end(), opt.label_column);
      if (it == header.end())
        throw DataError("label column '" + opt.label_column + "' not found in header");
      label_idx = static_cast<int>(it - header.begin());
    }
  } else if (!opt.label_column.empty()) {
    throw DataError("label column by name requires a header");
  }

  std::vector<std::vector<double>> feats;
  std::vector<double> labels;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line, opt.delimiter);
    if (ncols == 0) ncols = fields.size();
    if (fields.size() != ncols)
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(ncols));
    const int li = label_idx >= 0 ? label_idx : static_cast<int>(ncols) - 1;
    if (li >= static_cast<int>(fields.size()))
      throw DataError("label column index " + std::to_string(li) + " out of range");
    std::vector<double> frow;
    frow.reserve(ncols - 1);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == li) continue;
      frow.push_back(detail::parse_feature(fields[c], row, c));
    }
    labels.push_back(fields[static_cast<std::size_t>(li)] == opt.positive_label ? 1.0 : 0.0);
    feats.push_back(std::move(frow));
  }
  if (feats.empty()) throw DataError("no data rows in file: " + path);

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(feats.size()),
                     static_cast<Eigen::Index>(feats[0].size()));
  ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < feats.size(); ++i) {
    for (std::size_t j = 0; j < feats[i].size(); ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feats[i][j];
    ds.labels[static_cast<Eigen::Index>(i)] = labels[i];
  }
  ds.name = path;
  ds.provenance = "file:" + path;
  return ds;
}

enum class LabelRule { Parity };  // even digit -> 1, odd -> 0

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated IDX file: " + what);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

}  // namespace detail

// IDX image/label pair (big-endian magic 0x803 / 0x801, unsigned-byte
// payload). Images flatten to rows scaled to [0,1] by /255.
inline Dataset load_idx_pair(const std::string& images_path, const std::string& labels_path,
                             LabelRule rule = LabelRule::Parity) {
  (void)rule;
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw IoError("cannot open file: " + images_path);
  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw IoError("cannot open file: " + labels_path);

  if (detail::read_be32(imgs, images_path) != 0x00000803u)
    throw DataError("bad magic number in images file: " + images_path);
  const std::uint32_t n = detail::read_be32(imgs, images_path);
  const std::uint32_t rows = detail::read_be32(imgs, images_path);
  const std::uint32_t cols = detail::read_be32(imgs, images_path);

  if (detail::read_be32(labs, labels_path) != 0x00000801u)
    throw DataError("bad magic number in labels file: " + labels_path);
  const std::uint32_t nl = detail::read_be32(labs, labels_path);
  if (nl != n)
    throw DataError("labels count " + std::to_string(nl) + " != images count " +
                    std::to_string(n));

  const std::size_t d = std::size_t(rows) * cols;
  std::vector<unsigned char> pixels(d);
  Dataset ds;
  ds.features.resize(n, static_cast<Eigen::Index>(d));
  ds.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!imgs.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(d)))
      throw DataError("truncated IDX file: " + images_path);
    for (std::size_t j = 0; j < d; ++j)
      ds.features(i, static_cast<Eigen::Index>(j)) = pixels[j] / 255.0;
    unsigned char lab;
    if (!labs.read(reinterpret_cast<char*>(&lab), 1))
      throw DataError("truncated IDX file: " + labels_path);
    ds.labels[i] = (lab % 2 == 0) ? 1.0 : 0.0;
  }
  ds.name = images_path;
  ds.provenance = "idx:" + images_path;
  return ds;
}

struct StandardizeResult {
  Dataset dataset;
  Vector mean;
  Vector sd;
};

// Per-column (x - mean)/sd with population (1/N) sd and floor 1e-12.
inline StandardizeResult standardize(const Dataset& ds) {
  if (ds.features.rows() < 2) throw DataError("standardize: need at least 2 rows");
  const double n = static_cast<double>(ds.features.rows());
  const Vector mean = ds.features.colwise().mean();
  Matrix centered = ds.features.rowwise() - mean.transpose();
  Vector sd = (centered.array().square().colwise().sum() / n).sqrt();
  sd = sd.cwiseMax(1e-12);
  Dataset out = ds;
  out.features = centered.array().rowwise() / sd.transpose().array();
  return {std::move(out), mean, sd};
}

// Two Gaussian clouds at +-(separation/2) u along u = (1,...,1)/sqrt(d),
// labels alternating so classes stay balanced. Deterministic in seed.
inline Dataset synth_logistic(std::uint64_t seed, int n, int d, double separation) {
  if (n < 2 || d < 1) throw DataError("synth_logistic: need N >= 2, d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Vector u = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double label = (i % 2 == 0) ? 1.0 : 0.0;
    const double sign = label == 1.0 ? 1.0 : -1.0;
    for (int j = 0; j < d; ++j)
      ds.features(i, j) = sign * separation / 2.0 * u[j] + gauss(rng);
    ds.labels[i] = label;
  }
  ds.name = "synthetic";
  ds.provenance = "synthetic:seed=" + std::to_string(seed) + ",n=" + std::to_string(n) +
                  ",d=" + std::to_string(d) + ",sep=" + std::to_string(separation);
  return ds;
}

// Appends a constant-1 feature column (explicit intercept).
inline Dataset add_intercept(const Dataset& ds) {
  Dataset out = ds;
  out.features.resize(ds.features.rows(), ds.features.cols() + 1);
  out.features << ds.features, Vector::Ones(ds.features.rows());
  return out;
}

}  // namespace symaccel
