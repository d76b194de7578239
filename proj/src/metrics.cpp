// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/metrics.hpp"

#include <cmath>

#include "clonebench/acoustic.hpp"
#include "clonebench/error.hpp"
#include "clonebench/serialization.hpp"

namespace clonebench {

BitString reference_response(const ResponseDevice& device,
                             std::span<const BitString> challenges) {
  require(!challenges.empty(), ErrorCode::kInvalidParameter,
          "need at least one challenge");
  const auto env = EnvironmentConditions::nominal();
  BitString out;
  for (const auto& c : challenges) out.append(device.respond(c, env, nullptr));
  return out;
}

PopulationReport uniqueness(std::span<const ResponseDevice* const> population,
                            std::span<const BitString> challenges) {
  require(population.size() >= 2, ErrorCode::kInsufficientPopulation,
          "uniqueness needs at least two devices");
  std::vector<BitString> responses;
  responses.reserve(population.size());
  for (const auto* d : population) responses.push_back(reference_response(*d, challenges));

  const EntropyEstimate est = estimate_degrees_of_freedom(responses);
  PopulationReport rep;
  rep.model = population.front()->model();
  rep.n_devices = population.size();
  rep.uniqueness_mean = est.mean_hd;
  rep.uniqueness_std = std::sqrt(est.variance);
  rep.uniformity = uniformity(responses);
  rep.dof_bits = est.dof_bits;
  return rep;
}

ReliabilityTable reliability(const ResponseDevice& device,
                             std::span<const BitString> challenges,
                             std::span<const EnvironmentConditions> env_grid,
                             std::size_t reps, Rng& rng) {
  require(reps >= 100, ErrorCode::kInvalidParameter, "reliability needs reps >= 100");
  const BitString reference = reference_response(device, challenges);
  ReliabilityTable table;
  table.model = device.model();
  table.reps = reps;
  for (const auto& env : env_grid) {
    env.validate();
    std::size_t errors = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      BitString measured;
      for (const auto& c : challenges) measured.append(device.respond(c, env, &rng));
      errors += hamming_distance(measured, reference);
    }
    const double total = static_cast<double>(reps) * static_cast<double>(reference.size());
    table.rows.push_back({env.temperature_c, env.voltage_v,
                          static_cast<double>(errors) / total});
  }
  return table;
}

double uniformity(std::span<const BitString> responses) {
  require(!responses.empty(), ErrorCode::kInvalidParameter,
          "uniformity needs at least one response");
  std::size_t ones = 0;
  std::size_t bits = 0;
  for (const auto& r : responses) {
    ones += r.popcount();
    bits += r.size();
  }
  require(bits > 0, ErrorCode::kInvalidParameter, "responses are empty");
  return static_cast<double>(ones) / static_cast<double>(bits);
}

void to_json(nlohmann::json& j, const PopulationReport& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"model", r.model},
                     {"n_devices", r.n_devices},
                     {"uniqueness_mean", r.uniqueness_mean},
                     {"uniqueness_std", r.uniqueness_std},
                     {"uniformity", r.uniformity},
                     {"dof_bits", r.dof_bits}};
}

void from_json(const nlohmann::json& j, PopulationReport& r) {
  check_schema_version(j);
  j.at("model").get_to(r.model);
  j.at("n_devices").get_to(r.n_devices);
  j.at("uniqueness_mean").get_to(r.uniqueness_mean);
  j.at("uniqueness_std").get_to(r.uniqueness_std);
  j.at("uniformity").get_to(r.uniformity);
  j.at("dof_bits").get_to(r.dof_bits);
}

void to_json(nlohmann::json& j, const ReliabilityTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"temperature_c", r.temperature_c},
                    {"voltage_v", r.voltage_v},
                    {"ber", r.ber}});
  }
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"model", t.model},
                     {"reps", t.reps},
                     {"rows", rows}};
}

void from_json(const nlohmann::json& j, ReliabilityTable& t) {
  check_schema_version(j);
  j.at("model").get_to(t.model);
  j.at("reps").get_to(t.reps);
  t.rows.clear();
  for (const auto& r : j.at("rows")) {
    t.rows.push_back({r.at("temperature_c").get<double>(),
                      r.at("voltage_v").get<double>(), r.at("ber").get<double>()});
  }
}

}  // namespace clonebench
