// cepstra/vq.hpp

// Copyright 2026  The cepstra authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cepstra/errors.hpp"
#include "cepstra/fft.hpp"
#include "cepstra/mel_features.hpp"

namespace cepstra {

struct LbgParams {
  double epsilon_split = 0.01;
  double distortion_rel_tol = 1e-4;
  int max_iters = 100;
};

/// Codebook trained by binary splitting + Lloyd refinement. Codewords are
/// immutable after training and safe to share across threads.
struct Codebook {
  std::vector<std::vector<double>> codewords;
  std::size_t dim = 0;
  std::string label;
  double train_distortion = 0.0;
  LbgParams params;
};

// Per-stage distortion history recorded during training; distortions within a
// stage are non-increasing across Lloyd iterations.
struct LbgTrace {
  struct Stage {
    std::size_t codebook_size = 0;
    std::vector<double> distortions;
  };
  std::vector<Stage> stages;
};

inline double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("vector dimensions " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

namespace detail {

inline std::pair<std::size_t, double> nearest_codeword(
    std::span<const double> v, const std::vector<std::vector<double>>& codewords) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    const double d = squared_euclidean(v, codewords[i]);
    if (d < best_dist) {  // ties keep the lowest index
      best_dist = d;
      best = i;
    }
  }
  return {best, best_dist};
}

inline double average_distortion(const std::vector<std::vector<double>>& vectors,
                                 const std::vector<std::vector<double>>& codewords) {
  double acc = 0.0;
  for (const auto& v : vectors) acc += nearest_codeword(v, codewords).second;
  return acc / static_cast<double>(vectors.size());
}

}  // namespace detail

/// LBG training: start from the global centroid, then repeatedly split every
/// codeword into c*(1 +/- epsilon) and refine with Lloyd iterations until the
/// relative distortion decrease drops below distortion_rel_tol (or max_iters).
/// A codeword attracting no vectors is re-seeded to the training vector
/// farthest from its current nearest codeword. Fully deterministic.
inline Codebook lbg_train(const std::vector<std::vector<double>>& vectors,
                          std::size_t target_size, const LbgParams& params = {},
                          std::string label = {}, LbgTrace* trace = nullptr) {
  if (vectors.empty()) throw EmptyTrainingSet("lbg_train requires at least one vector");
  if (!is_power_of_two(target_size)) {
    throw ConfigMismatch("codebook size must be a power of two, got " +
                         std::to_string(target_size));
  }
  if (params.max_iters < 1) throw ConfigMismatch("max_iters must be >= 1");
  const std::size_t dim = vectors.front().size();
  if (dim == 0) throw DimensionMismatch("training vectors must be non-empty");
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw DimensionMismatch("training vectors have mixed dimensions");
    }
  }

  Codebook book;
  book.dim = dim;
  book.label = std::move(label);
  book.params = params;

  // Size-1 stage: the global centroid minimizes total squared distance.
  std::vector<double> centroid(dim, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t d = 0; d < dim; ++d) centroid[d] += v[d];
  }
  for (double& c : centroid) c /= static_cast<double>(vectors.size());
  book.codewords = {centroid};
  book.train_distortion = detail::average_distortion(vectors, book.codewords);
  if (trace) trace->stages.push_back({1, {book.train_distortion}});

  std::vector<std::size_t> assign(vectors.size());
  while (book.codewords.size() < target_size) {
    // Split every codeword; an all-zero parent splits additively since a
    // multiplicative perturbation of zero is degenerate.
    const std::size_t old_size = book.codewords.size();
    book.codewords.reserve(2 * old_size);
    for (std::size_t i = 0; i < old_size; ++i) {
      std::vector<double> hi = book.codewords[i];
      std::vector<double>& lo = book.codewords[i];
      bool all_zero = true;
      for (double c : lo) {
        if (c != 0.0) {
          all_zero = false;
          break;
        }
      }
      for (std::size_t d = 0; d < dim; ++d) {
        if (all_zero) {
          hi[d] = params.epsilon_split;
          lo[d] = -params.epsilon_split;
        } else {
          hi[d] *= 1.0 + params.epsilon_split;
          lo[d] *= 1.0 - params.epsilon_split;
        }
      }
      book.codewords.push_back(std::move(hi));
    }

    LbgTrace::Stage stage{book.codewords.size(), {}};
    double prev = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iters; ++iter) {
      const std::size_t k = book.codewords.size();
      std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t vi = 0; vi < vectors.size(); ++vi) {
        const std::size_t ci = detail::nearest_codeword(vectors[vi], book.codewords).first;
        assign[vi] = ci;
        ++counts[ci];
        for (std::size_t d = 0; d < dim; ++d) sums[ci][d] += vectors[vi][d];
      }
      for (std::size_t ci = 0; ci < k; ++ci) {
        if (counts[ci] == 0) continue;
        for (std::size_t d = 0; d < dim; ++d) {
          book.codewords[ci][d] = sums[ci][d] / static_cast<double>(counts[ci]);
        }
      }
      // Re-seed dead codewords one at a time so each repair sees the book as
      // already repaired.
      for (std::size_t ci = 0; ci < k; ++ci) {
        if (counts[ci] != 0) continue;
        std::size_t farthest = 0;
        double far_dist = -1.0;
        for (std::size_t vi = 0; vi < vectors.size(); ++vi) {
          const double d = detail::nearest_codeword(vectors[vi], book.codewords).second;
          if (d > far_dist) {
            far_dist = d;
            farthest = vi;
          }
        }
        book.codewords[ci] = vectors[farthest];
      }

      const double dist = detail::average_distortion(vectors, book.codewords);
      stage.distortions.push_back(dist);
      if (prev <= 0.0) break;
      if (std::isfinite(prev) && (prev - dist) / prev < params.distortion_rel_tol) {
        prev = dist;
        break;
      }
      prev = dist;
    }
    book.train_distortion = stage.distortions.back();
    if (trace) trace->stages.push_back(std::move(stage));
  }
  return book;
}

/// Index and squared distance of the nearest codeword; ties break toward the
/// lowest index.
inline std::pair<std::size_t, double> quantize(std::span<const double> v, const Codebook& book) {
  if (v.size() != book.dim) {
    throw DimensionMismatch("vector dimension " + std::to_string(v.size()) +
                            " does not match codebook dim " + std::to_string(book.dim));
  }
  return detail::nearest_codeword(v, book.codewords);
}

/// Mean squared distance of the feature frames to their nearest codewords;
/// lower is better.
inline double score(const FeatureMatrix& features, const Codebook& book) {
  if (features.vectors.empty()) throw EmptyFeatures("cannot score an empty feature matrix");
  double acc = 0.0;
  for (const auto& frame : features.vectors) acc += quantize(frame, book).second;
  return acc / static_cast<double>(features.vectors.size());
}

struct RecognitionResult {
  std::string label;
  std::vector<std::pair<std::string, double>> scores;  // in codebook order
};

inline RecognitionResult recognize(const FeatureMatrix& features,
                                   const std::vector<Codebook>& books) {
  if (books.empty()) throw NoModels("no codebooks to match against");
  RecognitionResult res;
  res.scores.reserve(books.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < books.size(); ++i) {
    res.scores.emplace_back(books[i].label, score(features, books[i]));
    if (res.scores[i].second < res.scores[best].second) best = i;
  }
  res.label = res.scores[best].first;
  return res;
}

// ---------------------------------------------------------------------------
// Codebook file format (JSON)
// ---------------------------------------------------------------------------

inline void save_codebook(const Codebook& book, const std::string& path,
                          const std::string& config_digest = {}) {
  nlohmann::json j;
  j["label"] = book.label;
  j["dim"] = book.dim;
  j["codebook_size"] = book.codewords.size();
  j["params"] = {{"epsilon_split", book.params.epsilon_split},
                 {"distortion_rel_tol", book.params.distortion_rel_tol},
                 {"max_iters", book.params.max_iters}};
  j["train_distortion"] = book.train_distortion;
  j["codewords"] = book.codewords;
  if (!config_digest.empty()) j["config_digest"] = config_digest;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoFailure("failed writing " + path);
}

inline Codebook load_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
    Codebook book;
    book.label = j.at("label").get<std::string>();
    book.dim = j.at("dim").get<std::size_t>();
    book.params.epsilon_split = j.at("params").at("epsilon_split").get<double>();
    book.params.distortion_rel_tol = j.at("params").at("distortion_rel_tol").get<double>();
    book.params.max_iters = j.at("params").at("max_iters").get<int>();
    book.train_distortion = j.at("train_distortion").get<double>();
    book.codewords = j.at("codewords").get<std::vector<std::vector<double>>>();
    if (book.codewords.size() != j.at("codebook_size").get<std::size_t>()) {
      throw ConfigMismatch(path + ": codebook_size does not match codewords");
    }
    for (const auto& cw : book.codewords) {
      if (cw.size() != book.dim) {
        throw ConfigMismatch(path + ": codeword width does not match dim");
      }
    }
    return book;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigMismatch(path + ": invalid codebook file (" + e.what() + ")");
  }
}

}  // namespace cepstra
