// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {

namespace {

// log(1 + exp(-m)), stable for large |m|.
double softplus_neg(double m) {
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Row-major parity-feature matrix plus labels in {-1, +1}.
struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;

  std::span<const double> row(std::size_t r) const {
    return {x.data() + r * cols, cols};
  }
};

Design make_design(const CrpDataset& data) {
  Design d;
  d.rows = data.size();
  d.cols = data.challenge_bits() + 1;
  d.x.resize(d.rows * d.cols);
  d.y.resize(d.rows);
  for (std::size_t r = 0; r < d.rows; ++r) {
    parity_features(data.entries[r].challenge,
                    std::span<double>(d.x.data() + r * d.cols, d.cols));
    d.y[r] = data.entries[r].response ? 1.0 : -1.0;
  }
  return d;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Mean loss; when grad is non-null it receives the mean gradient.
double loss_and_gradient(const Design& d, std::span<const double> w,
                         std::vector<double>* grad) {
  if (grad != nullptr) grad->assign(d.cols, 0.0);
  double loss = 0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    const auto phi = d.row(r);
    const double margin = d.y[r] * dot(w, phi);
    loss += softplus_neg(margin);
    if (grad != nullptr) {
      const double g = -d.y[r] * sigmoid(-margin);
      for (std::size_t i = 0; i < d.cols; ++i) (*grad)[i] += g * phi[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(d.rows);
  if (grad != nullptr) {
    for (auto& g : *grad) g *= inv;
  }
  return loss * inv;
}

void check_weights(std::span<const double> w, const CrpDataset& data) {
  require(w.size() == data.challenge_bits() + 1, ErrorCode::kInvalidParameter,
          "weight vector must have challenge_bits + 1 entries");
}

double xor_sign(std::size_t k) { return k % 2 == 1 ? 1.0 : -1.0; }

template <typename Predict>
AttackReport evaluate(Predict&& predict, const ResponseDevice& device,
                      std::size_t n_test, Rng& rng, std::size_t train_size) {
  require(n_test >= 100, ErrorCode::kInvalidParameter, "n_test must be >= 100");
  const auto env = EnvironmentConditions::nominal();
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n_test; ++t) {
    const BitString c = rng.bits(device.challenge_bits());
    const int truth = device.respond(c, env, nullptr).get(0) ? 1 : 0;
    hits += predict(c) == truth ? 1 : 0;
  }
  return {device.model(), train_size, n_test,
          static_cast<double>(hits) / static_cast<double>(n_test)};
}

}  // namespace

std::size_t CrpDataset::challenge_bits() const {
  require(!entries.empty(), ErrorCode::kInvalidDataset, "dataset is empty");
  const std::size_t n = entries.front().challenge.size();
  for (const auto& e : entries) {
    require(e.challenge.size() == n, ErrorCode::kInvalidDataset,
            "challenge lengths differ within the dataset");
  }
  return n;
}

CrpDataset collect_crps(const ResponseDevice& device, std::size_t n, Rng& rng) {
  require(n >= 1, ErrorCode::kInvalidParameter, "n must be >= 1");
  require(device.response_bits() >= 1, ErrorCode::kInvalidParameter,
          "device has no response bits");
  const auto env = EnvironmentConditions::nominal();
  CrpDataset data;
  data.source = device.model();
  data.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitString c = rng.bits(device.challenge_bits());
    const int r = device.respond(c, env, nullptr).get(0) ? 1 : 0;
    data.entries.push_back({std::move(c), r});
  }
  return data;
}

double LinearModel::score(const BitString& challenge) const {
  require(challenge.size() + 1 == weights.size(), ErrorCode::kInvalidChallenge,
          "challenge length does not match the model");
  return dot(weights, parity_features(challenge));
}

double logistic_loss(std::span<const double> w, const CrpDataset& data) {
  check_weights(w, data);
  return loss_and_gradient(make_design(data), w, nullptr);
}

std::vector<double> logistic_gradient(std::span<const double> w,
                                      const CrpDataset& data) {
  check_weights(w, data);
  std::vector<double> g;
  loss_and_gradient(make_design(data), w, &g);
  return g;
}

LinearModel train_model(const CrpDataset& data, std::size_t epochs,
                        double learning_rate) {
  require(data.size() >= 10, ErrorCode::kInvalidDataset,
          "training needs at least 10 entries");
  require(learning_rate > 0 && std::isfinite(learning_rate),
          ErrorCode::kInvalidParameter, "learning_rate must be positive");
  const Design d = make_design(data);
  LinearModel m;
  m.weights.assign(d.cols, 0.0);
  m.train_size = data.size();
  m.loss_history.reserve(epochs + 1);
  std::vector<double> grad;
  for (std::size_t e = 0; e < epochs; ++e) {
    m.loss_history.push_back(loss_and_gradient(d, m.weights, &grad));
    for (std::size_t i = 0; i < d.cols; ++i) m.weights[i] -= learning_rate * grad[i];
  }
  m.loss_history.push_back(loss_and_gradient(d, m.weights, nullptr));
  return m;
}

double XorModel::score(const BitString& challenge) const {
  const auto phi = parity_features(challenge);
  double z = xor_sign(weights.size());
  for (const auto& w : weights) {
    require(w.size() == phi.size(), ErrorCode::kInvalidChallenge,
            "challenge length does not match the model");
    z *= dot(w, phi);
  }
  return z;
}

// Resilient backpropagation on the product model; step sizes adapt per
// weight from gradient signs, which copes with the product's badly scaled
// curvature where fixed-step descent stalls.
XorModel train_xor_model(const CrpDataset& data, std::size_t k,
                         std::size_t epochs, double learning_rate,
                         std::size_t restarts, Rng& rng) {
  require(k >= 1 && k <= 4, ErrorCode::kInvalidParameter, "k must be in [1, 4]");
  require(data.size() >= 10, ErrorCode::kInvalidDataset,
          "training needs at least 10 entries");
  require(restarts >= 1, ErrorCode::kInvalidParameter, "restarts must be >= 1");
  require(learning_rate > 0, ErrorCode::kInvalidParameter,
          "learning_rate must be positive");
  const Design d = make_design(data);
  const double s = xor_sign(k);
  const double inv_n = 1.0 / static_cast<double>(d.rows);

  XorModel best;
  best.final_loss = std::numeric_limits<double>::infinity();
  std::vector<double> u(k);
  for (std::size_t attempt = 0; attempt < restarts; ++attempt) {
    const std::size_t p = k * d.cols;
    std::vector<double> w(p), grad(p), prev(p, 0.0), step(p, learning_rate);
    for (auto& x : w) x = rng.normal();
    double loss = 0;
    for (std::size_t e = 0; e <= epochs; ++e) {
      std::fill(grad.begin(), grad.end(), 0.0);
      loss = 0;
      for (std::size_t r = 0; r < d.rows; ++r) {
        const auto phi = d.row(r);
        double prod = s;
        for (std::size_t i = 0; i < k; ++i) {
          u[i] = dot(std::span<const double>(w.data() + i * d.cols, d.cols), phi);
          prod *= u[i];
        }
        const double margin = d.y[r] * prod;
        loss += softplus_neg(margin);
        const double g = -d.y[r] * sigmoid(-margin);
        for (std::size_t i = 0; i < k; ++i) {
          double others = s;
          for (std::size_t j = 0; j < k; ++j) {
            if (j != i) others *= u[j];
          }
          double* gi = grad.data() + i * d.cols;
          for (std::size_t c = 0; c < d.cols; ++c) gi[c] += g * others * phi[c];
        }
      }
      loss *= inv_n;
      if (e == epochs) break;
      for (std::size_t q = 0; q < p; ++q) {
        const double sign_change = grad[q] * prev[q];
        if (sign_change > 0) {
          step[q] = std::min(step[q] * 1.2, 50.0);
        } else if (sign_change < 0) {
          step[q] = std::max(step[q] * 0.5, 1e-6);
          grad[q] = 0;
        }
        if (grad[q] > 0) {
          w[q] -= step[q];
        } else if (grad[q] < 0) {
          w[q] += step[q];
        }
        prev[q] = grad[q];
      }
    }
    if (loss < best.final_loss) {
      best.final_loss = loss;
      best.weights.assign(k, {});
      for (std::size_t i = 0; i < k; ++i) {
        best.weights[i].assign(w.begin() + static_cast<std::ptrdiff_t>(i * d.cols),
                               w.begin() + static_cast<std::ptrdiff_t>((i + 1) * d.cols));
      }
    }
  }
  best.train_size = data.size();
  return best;
}

AttackReport eval_model(const LinearModel& model, const ResponseDevice& device,
                        std::size_t n_test, Rng& rng) {
  return evaluate([&](const BitString& c) { return model.predict(c); }, device,
                  n_test, rng, model.train_size);
}

AttackReport eval_model(const XorModel& model, const ResponseDevice& device,
                        std::size_t n_test, Rng& rng) {
  return evaluate([&](const BitString& c) { return model.predict(c); }, device,
                  n_test, rng, model.train_size);
}

double dataset_accuracy(const LinearModel& model, const CrpDataset& data) {
  require(data.size() >= 1, ErrorCode::kInvalidDataset, "dataset is empty");
  std::size_t hits = 0;
  for (const auto& e : data.entries) hits += model.predict(e.challenge) == e.response ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

void to_json(nlohmann::json& j, const AttackReport& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"target", r.target},
                     {"train_size", r.train_size},
                     {"test_size", r.test_size},
                     {"accuracy", r.accuracy}};
}

void from_json(const nlohmann::json& j, AttackReport& r) {
  check_schema_version(j);
  r.target = j.at("target").get<std::string>();
  r.train_size = j.at("train_size").get<std::size_t>();
  r.test_size = j.at("test_size").get<std::size_t>();
  r.accuracy = j.at("accuracy").get<double>();
}

void to_json(nlohmann::json& j, const LinearModel& m) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"weights", m.weights},
                     {"train_size", m.train_size},
                     {"final_loss", m.loss_history.empty() ? 0.0 : m.loss_history.back()}};
}

SucBitTarget::SucBitTarget(const SucDevice& dev, std::size_t bit)
    : dev_(&dev), bit_(bit) {
  require(bit < 64, ErrorCode::kInvalidParameter, "target bit must be < 64");
}

BitString SucBitTarget::respond(const BitString& challenge,
                                const EnvironmentConditions& env, Rng*) const {
  env.validate();
  BitString out(1);
  out.set(0, suc_encrypt(*dev_, challenge).get(bit_));
  return out;
}

SramPuf readout_clone(const SramPuf& target, Rng& rng) {
  const BitString pattern = target.reference_pattern();
  std::vector<double> bias(pattern.size());
  for (std::size_t i = 0; i < bias.size(); ++i) {
    double mag = 0;
    while (mag == 0) mag = std::abs(rng.normal());
    bias[i] = pattern.get(i) ? mag : -mag;
  }
  return SramPuf::from_biases(std::move(bias), target.noise());
}

}  // namespace clonebench
