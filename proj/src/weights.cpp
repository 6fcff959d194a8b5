// Copyright 2026 The pathint Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pathint/weights.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathint {

WeightVector softmax_weights(const Eigen::Ref<const Vector>& costs, double lambda) {
  const Eigen::Index count = costs.size();
  if (count < 1) {
    throw ConfigError("softmax_weights needs at least one cost");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError(fmt::format("temperature must be positive and finite, got {}", lambda));
  }
  double min_cost = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < count; ++k) {
    if (std::isfinite(costs[k])) {
      min_cost = std::min(min_cost, costs[k]);
    }
  }
  if (!std::isfinite(min_cost)) {
    throw DegenerateBatch("every cost in the batch is non-finite");
  }

  WeightVector out;
  out.temperature = lambda;
  out.weights.resize(count);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < count; ++k) {
    const double e = std::isfinite(costs[k]) ? std::exp(-(costs[k] - min_cost) / lambda) : 0.0;
    out.weights[k] = e;
    sum += e;
  }
  out.weights /= sum;
  out.log_normalizer = -min_cost / lambda + std::log(sum / static_cast<double>(count));
  out.free_energy = min_cost - lambda * std::log(sum / static_cast<double>(count));
  return out;
}

double effective_sample_size(const Eigen::Ref<const Vector>& weights) {
  const Eigen::Index count = weights.size();
  if (count < 1) {
    throw ConfigError("effective_sample_size needs at least one weight");
  }
  const double top = weights.maxCoeff();
  if (!(top > 0.0)) {
    throw ConfigError("weights must contain a positive entry");
  }
  const Vector relative = weights / top;
  const double ess = relative.sum() * relative.sum() / relative.squaredNorm();
  return std::clamp(ess, 1.0, static_cast<double>(count));
}

double effective_sample_size(const WeightVector& w) { return effective_sample_size(w.weights); }

double weight_entropy(const Eigen::Ref<const Vector>& weights) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    if (weights[k] > 0.0) {
      h -= weights[k] * std::log(weights[k]);
    }
  }
  return std::max(0.0, h);
}

int argmax_weight(const Eigen::Ref<const Vector>& weights) {
  int best = 0;
  for (Eigen::Index k = 1; k < weights.size(); ++k) {
    if (weights[k] > weights[best]) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

SamplingDiagnostics diagnose(const Eigen::Ref<const Vector>& costs, const WeightVector& w) {
  SamplingDiagnostics d;
  d.num_samples = static_cast<int>(costs.size());
  d.ess = effective_sample_size(w);
  d.weight_entropy = weight_entropy(w.weights);
  d.max_weight = w.weights.maxCoeff();
  d.free_energy = w.free_energy;

  double sum = 0.0;
  double min_cost = std::numeric_limits<double>::infinity();
  int finite = 0;
  for (Eigen::Index k = 0; k < costs.size(); ++k) {
    if (std::isfinite(costs[k])) {
      sum += costs[k];
      min_cost = std::min(min_cost, costs[k]);
      ++finite;
    }
  }
  d.cost_mean = finite > 0 ? sum / finite : std::numeric_limits<double>::quiet_NaN();
  d.cost_min = min_cost;
  double ss = 0.0;
  for (Eigen::Index k = 0; k < costs.size(); ++k) {
    if (std::isfinite(costs[k])) {
      ss += (costs[k] - d.cost_mean) * (costs[k] - d.cost_mean);
    }
  }
  d.cost_std = finite > 1 ? std::sqrt(ss / (finite - 1)) : 0.0;
  return d;
}

McEstimate mc_estimate(const Eigen::Ref<const Vector>& values) {
  const Eigen::Index count = values.size();
  if (count < 2) {
    throw InsufficientSamples(
        fmt::format("a standard error needs at least 2 samples, got {}", count));
  }
  McEstimate out;
  out.mean = values.mean();
  const double ss = (values.array() - out.mean).square().sum();
  out.std_error = std::sqrt(ss / static_cast<double>(count - 1)) / std::sqrt(static_cast<double>(count));
  return out;
}

double is_estimate(const Eigen::Ref<const Vector>& values,
                   const Eigen::Ref<const Vector>& rn_derivative) {
  if (values.size() != rn_derivative.size()) {
    throw ConfigError(fmt::format("{} values but {} Radon-Nikodym derivatives", values.size(),
                                  rn_derivative.size()));
  }
  if (values.size() == 0) {
    throw InsufficientSamples("importance sampling needs at least one sample");
  }
  if (!rn_derivative.allFinite() || (rn_derivative.array() < 0.0).any()) {
    throw ConfigError("Radon-Nikodym derivatives must be finite and non-negative");
  }
  return values.dot(rn_derivative) / static_cast<double>(values.size());
}

MisResult mis_estimate(const std::vector<SampleGroup>& groups, MisScheme scheme,
                       double condition_tolerance) {
  const int num_groups = static_cast<int>(groups.size());
  if (num_groups < 1) {
    throw ConfigError("multiple importance sampling needs at least one group");
  }
  std::vector<double> sizes(static_cast<std::size_t>(num_groups));
  double total = 0.0;
  for (int j = 0; j < num_groups; ++j) {
    const auto& g = groups[static_cast<std::size_t>(j)];
    if (g.values.size() != g.rn_derivatives.size()) {
      throw ConfigError(fmt::format("group {}: values and derivatives differ in length", j));
    }
    if (g.values.size() == 0) {
      throw ConfigError(fmt::format("group {} is empty", j));
    }
    if (scheme == MisScheme::balance_heuristic &&
        (g.cross_densities.rows() != g.values.size() || g.cross_densities.cols() != num_groups)) {
      throw ConfigError(fmt::format("group {}: cross_densities must be {}x{}", j, g.values.size(),
                                    num_groups));
    }
    sizes[static_cast<std::size_t>(j)] = static_cast<double>(g.values.size());
    total += sizes[static_cast<std::size_t>(j)];
  }

  MisResult out;
  double sum = 0.0;
  double variance_sum = 0.0;
  for (int j = 0; j < num_groups; ++j) {
    const auto& g = groups[static_cast<std::size_t>(j)];
    const Eigen::Index n = g.values.size();
    Vector terms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double gamma = 1.0;
      double condition = 0.0;
      if (scheme == MisScheme::flat) {
        for (int l = 0; l < num_groups; ++l) {
          condition += sizes[static_cast<std::size_t>(l)];
        }
        condition /= total;
      } else {
        const auto ratios = g.cross_densities.row(i);
        if (!ratios.allFinite() || (ratios.array() < 0.0).any()) {
          throw InvalidScheme(fmt::format("group {} sample {}: density ratios must be finite and "
                                          "non-negative", j, i));
        }
        if (std::abs(ratios[j] - 1.0) > condition_tolerance) {
          throw InvalidScheme(fmt::format("group {} sample {}: self density ratio is {}, not 1", j,
                                          i, ratios[j]));
        }
        double mixture = 0.0;
        for (int k = 0; k < num_groups; ++k) {
          mixture += sizes[static_cast<std::size_t>(k)] * ratios[k];
        }
        gamma = total / mixture;
        // gamma^l(X) = N r_l / sum_k N_k r_k, with r the ratios relative to P^j.
        for (int l = 0; l < num_groups; ++l) {
          condition += sizes[static_cast<std::size_t>(l)] * (total * ratios[l] / mixture);
        }
        condition /= total;
      }
      if (g.values[i] != 0.0) {
        out.max_condition_error = std::max(out.max_condition_error, std::abs(condition - 1.0));
      }
      terms[i] = g.values[i] * g.rn_derivatives[i] * gamma;
    }
    if (!terms.allFinite()) {
      throw InvalidScheme(fmt::format("group {} produced non-finite weighted terms", j));
    }
    sum += terms.sum();
    if (n > 1) {
      const double mean = terms.mean();
      const double var = (terms.array() - mean).square().sum() / static_cast<double>(n - 1);
      variance_sum += static_cast<double>(n) * var;
    }
  }
  if (out.max_condition_error > condition_tolerance) {
    throw InvalidScheme(fmt::format("reweighting condition violated by {}", out.max_condition_error));
  }
  out.estimate = sum / total;
  out.std_error = std::sqrt(variance_sum) / total;
  return out;
}

double importance_weight_path(const Eigen::Ref<const RowMatrix>& controls,
                              const Eigen::Ref<const RowMatrix>& brownian_increments,
                              double state_cost, double lambda, double dt) {
  if (controls.rows() != brownian_increments.rows() ||
      controls.cols() != brownian_increments.cols()) {
    throw ConfigError("controls and Brownian increments must have the same shape");
  }
  if (!(lambda > 0.0) || !(dt > 0.0)) {
    throw ConfigError("lambda and dt must be positive");
  }
  double log_weight = 0.0;
  for (Eigen::Index i = 0; i < controls.rows(); ++i) {
    const auto u = controls.row(i);
    log_weight -= 0.5 * u.squaredNorm() * dt + u.dot(brownian_increments.row(i));
  }
  return log_weight - state_cost / lambda;
}

}  // namespace pathint
