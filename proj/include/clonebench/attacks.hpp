// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonebench/bitstring.hpp"
#include "clonebench/device.hpp"
#include "clonebench/puf_models.hpp"
#include "clonebench/rng.hpp"

namespace clonebench {

class SucDevice;

// Cloning experiments: characterization by CRP collection, emulation by
// modeling, and full-readout cloning of memory PUFs.

struct CrpEntry {
  BitString challenge;
  int response = 0;
};

struct CrpDataset {
  std::vector<CrpEntry> entries;
  std::string source;  // model name of the device the pairs came from

  std::size_t size() const { return entries.size(); }
  // Throws invalid-dataset when empty or the lengths differ.
  std::size_t challenge_bits() const;
};

// n uniform challenges, nominal environment, zero noise; response is bit 0
// of the device output.
CrpDataset collect_crps(const ResponseDevice& device, std::size_t n, Rng& rng);

// Logistic model over the parity features: P[r = 1] = sigmoid(w . phi(c)).
struct LinearModel {
  std::vector<double> weights;       // n + 1
  std::vector<double> loss_history;  // mean loss before each epoch, then final
  std::size_t train_size = 0;

  double score(const BitString& challenge) const;
  int predict(const BitString& challenge) const { return score(challenge) > 0 ? 1 : 0; }
};

// Mean logistic loss of weights w on the dataset, and its analytic gradient.
double logistic_loss(std::span<const double> w, const CrpDataset& data);
std::vector<double> logistic_gradient(std::span<const double> w,
                                      const CrpDataset& data);

inline constexpr std::size_t kDefaultEpochs = 1000;
inline constexpr double kDefaultLearningRate = 1.0;

// Full-batch gradient descent from w = 0. Deterministic. Needs >= 10 entries.
LinearModel train_model(const CrpDataset& data,
                        std::size_t epochs = kDefaultEpochs,
                        double learning_rate = kDefaultLearningRate);

// k-XOR arbiter model: r = 1 iff (-1)^(k+1) prod_i (w_i . phi(c)) > 0,
// fitted by logistic loss on that product with random restarts (k <= 4).
struct XorModel {
  std::vector<std::vector<double>> weights;  // k vectors of n + 1
  double final_loss = 0;
  std::size_t train_size = 0;

  double score(const BitString& challenge) const;
  int predict(const BitString& challenge) const { return score(challenge) > 0 ? 1 : 0; }
};

XorModel train_xor_model(const CrpDataset& data, std::size_t k,
                         std::size_t epochs, double learning_rate,
                         std::size_t restarts, Rng& rng);

struct AttackReport {
  std::string target;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double accuracy = 0;
};

// Accuracy on n_test >= 100 fresh uniform challenges against the device's
// zero-noise nominal bit 0.
AttackReport eval_model(const LinearModel& model, const ResponseDevice& device,
                        std::size_t n_test, Rng& rng);
AttackReport eval_model(const XorModel& model, const ResponseDevice& device,
                        std::size_t n_test, Rng& rng);

// Fraction of entries the model reproduces.
double dataset_accuracy(const LinearModel& model, const CrpDataset& data);

void to_json(nlohmann::json& j, const AttackReport& r);
void from_json(const nlohmann::json& j, AttackReport& r);
void to_json(nlohmann::json& j, const LinearModel& m);

// Attack view of a SUC: one fixed ciphertext bit of E(challenge).
class SucBitTarget final : public ResponseDevice {
 public:
  // bit < 64, in BitString order (bit 0 = most significant ciphertext bit).
  SucBitTarget(const SucDevice& dev, std::size_t bit);
  std::string model() const override { return "suc-bit"; }
  std::size_t challenge_bits() const override { return 64; }
  std::size_t response_bits() const override { return 1; }
  BitString respond(const BitString& challenge, const EnvironmentConditions& env,
                    Rng* noise) const override;

 private:
  const SucDevice* dev_;
  std::size_t bit_;
};

// Clone of an SRAM PUF from its full read-out power-up pattern: the same
// zero-noise reference, with fresh cell-bias magnitudes so that the clone's
// noise realizations are independent of the target's.
SramPuf readout_clone(const SramPuf& target, Rng& rng);

// A SUC has no readable state; there is nothing to clone from.
SramPuf readout_clone(const SucDevice& target, Rng& rng) = delete;

}  // namespace clonebench
