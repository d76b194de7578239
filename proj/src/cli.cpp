// Copyright 2026 The clonebench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clonebench/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "clonebench/acoustic.hpp"
#include "clonebench/attacks.hpp"
#include "clonebench/auth.hpp"
#include "clonebench/error.hpp"
#include "clonebench/fuzzy_extractor.hpp"
#include "clonebench/metrics.hpp"
#include "clonebench/puf_models.hpp"
#include "clonebench/repro.hpp"
#include "clonebench/serialization.hpp"
#include "clonebench/suc.hpp"

namespace clonebench {

namespace {

using nlohmann::json;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  bool unsafe_dump = false;
  bool quiet = false;
};

struct SeedChoice {
  std::uint64_t value = 0;
  bool from_entropy = false;
};

// --seed, then CLONEBENCH_SEED, then OS entropy.
SeedChoice resolve_seed(const Globals& g) {
  if (g.seed) return {*g.seed, false};
  if (const char* env = std::getenv("CLONEBENCH_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 0);
    require(errno == 0 && end != nullptr && *end == '\0', ErrorCode::kInvalidParameter,
            "CLONEBENCH_SEED is not an unsigned 64-bit integer");
    return {static_cast<std::uint64_t>(v), false};
  }
  return {Rng::from_os_entropy().seed(), true};
}

// Command-line hex goes through here so that malformed input is a usage
// error rather than a data error.
BitString arg_hex(const std::string& text, std::optional<std::size_t> bits,
                  const char* what) {
  try {
    return BitString::from_hex(text, bits);
  } catch (const Error& e) {
    fail(ErrorCode::kInvalidParameter, std::string(what) + ": " + e.what());
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDataError:
    case ErrorCode::kInvalidDataset:
    case ErrorCode::kInvalidInput:
    case ErrorCode::kEnrollmentAborted:
    case ErrorCode::kGenerationFailure:
      return kExitData;
    default:
      return kExitUsage;
  }
}

bool is_suc_device_file(const json& j) { return j.contains("descriptor"); }

// Device parameters shared by the verbs that build classic PUFs.
struct DeviceFlags {
  std::string model = "arbiter";
  std::size_t stages = 64;
  std::size_t xor_k = 2;
  std::size_t oscillators = 64;
  std::size_t cells = 256;
  std::optional<double> noise_sigma;
  std::size_t rounds = 40;

  void add_to(CLI::App* app) {
    app->add_option("--model", model, "arbiter | xor-arbiter | ro | sram | suc")
        ->check(CLI::IsMember({"arbiter", "xor-arbiter", "ro", "sram", "suc"}));
    app->add_option("--stages", stages, "arbiter stages")->check(CLI::Range(1, 4096));
    app->add_option("--xor-k", xor_k, "XOR arbiter width")->check(CLI::Range(1, 16));
    app->add_option("--oscillators", oscillators, "ring oscillators")->check(CLI::Range(2, 1 << 20));
    app->add_option("--cells", cells, "SRAM cells")->check(CLI::Range(1, 1 << 24));
    app->add_option("--noise-sigma", noise_sigma, "override the model's noise level");
    app->add_option("--rounds", rounds, "SUC rounds")->check(CLI::Range(1, 1000));
  }

  DeviceDescriptor descriptor(std::uint64_t seed) const {
    DeviceDescriptor d;
    d.model = model;
    d.seed = seed;
    if (model == "arbiter" || model == "xor-arbiter") d.params["n_stages"] = stages;
    if (model == "xor-arbiter") d.params["k"] = xor_k;
    if (model == "ro") d.params["m_oscillators"] = oscillators;
    if (model == "sram") d.params["n_cells"] = cells;
    if (noise_sigma) d.params[model == "ro" ? "meas_sigma" : "noise_sigma"] = *noise_sigma;
    return d;
  }

  SucParams suc_params() const {
    SucParams p;
    p.rounds = rounds;
    p.validate();
    return p;
  }
};

struct EnvFlags {
  double temperature = 25.0;
  double voltage = 1.26;

  void add_to(CLI::App* app) {
    app->add_option("--temperature", temperature, "degrees C");
    app->add_option("--voltage", voltage, "supply volts");
  }
  EnvironmentConditions env() const {
    EnvironmentConditions e{temperature, voltage};
    e.validate();
    return e;
  }
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err)
      : out_(out),
        log_("clonebench", std::make_shared<spdlog::sinks::ostream_sink_mt>(err)) {
    log_.set_pattern("[%l] %v");
  }

  int run(const std::vector<std::string>& args);

 private:
  void emit(const json& j) { out_ << j.dump() << '\n'; }

  // Writes the verb's artifact when --out was given.
  void save(const json& j) {
    if (globals_.out.empty()) return;
    write_json_file(globals_.out, j);
    log_.info("wrote {}", globals_.out);
  }

  Rng verb_rng(std::string_view verb, json* echo) {
    const SeedChoice s = resolve_seed(globals_);
    if (s.from_entropy) log_.info("seed {} drawn from OS entropy", s.value);
    if (echo != nullptr) (*echo)["seed"] = s.value;
    return Rng(s.value).split(verb);
  }

  void build(CLI::App& app);

  int puf_simulate();
  int puf_metrics();
  int fe_design();
  int fe_generate_cmd();
  int fe_reproduce_cmd();
  int suc_personalize();
  int suc_analyze();
  int suc_encrypt_cmd();
  int acoustic_fingerprint();
  int acoustic_enroll();
  int acoustic_entropy();
  int acoustic_space();
  int enroll_cmd();
  int identify_cmd();
  int combined_verify_cmd();
  int attack_model();
  int attack_readout();
  int repro_cmd();

  BitString reading_from_flags(std::size_t min_bits);

  std::ostream& out_;
  spdlog::logger log_;
  Globals globals_;
  std::vector<std::pair<CLI::App*, std::function<int()>>> actions_;

  DeviceFlags dev_;
  EnvFlags env_;
  std::size_t sim_count_ = 8;
  std::size_t met_devices_ = 100;
  std::size_t met_challenges_ = 32;
  std::size_t reps_ = 100;
  std::vector<double> temperatures_{25.0, -40.0, 85.0};
  double fe_ber_ = 0.25;
  double fe_fail_ = 1e-6;
  std::size_t fe_blocks_ = 128;
  std::optional<std::size_t> n_rep_;
  std::size_t fe_key_len_ = 128;
  std::size_t ac_population_ = 200;
  double ac_ber_ = 0.05;
  double ac_fail_ = 1e-5;
  std::size_t ac_blocks_ = 16;
  std::size_t ac_key_len_ = 64;
  std::size_t ent_devices_ = 1000;
  std::size_t enroll_pairs_ = 0;
  std::string reading_hex_;
  std::optional<std::size_t> reading_bits_;
  std::string fingerprint_path_;
  std::string helper_path_;
  std::string device_path_;
  std::string store_path_;
  std::string device_id_;
  std::string mode_ = "forward";
  std::size_t budget_ = 10000;
  std::string text_hex_;
  bool decrypt_ = false;
  std::uint64_t structure_seed_ = 0;
  std::size_t bins_ = 256;
  double smoothing_ = 0;
  double meas_noise_ = 0.05;
  std::size_t t_ = 32;
  std::size_t k_ = 20;
  std::optional<std::size_t> p_;
  bool iid_ = false;
  std::vector<std::size_t> flips_;
  std::string challenge_hex_;
  std::string response_hex_;
  double tau_ = 0.25;
  double suc_entropy_ = 80;
  std::size_t atk_crps_ = 5000;
  std::size_t atk_test_ = 10000;
  std::size_t epochs_ = kDefaultEpochs;
  double lr_ = kDefaultLearningRate;
  std::size_t xor_epochs_ = 300;
  double xor_step_ = 0.1;
  std::size_t restarts_ = 4;
  std::size_t bit_ = 0;
  std::size_t ro_trials_ = 1000;
  double ro_ber_ = kSramBerExtreme;
  std::string repro_name_;
  bool list_ = false;
};

void Runner::build(CLI::App& app) {
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file supplying any option");
  app.add_option("--seed", globals_.seed, "64-bit seed (default: CLONEBENCH_SEED, then OS entropy)");
  app.add_option("--out", globals_.out, "write the verb's artifact or report to this file");
  app.add_flag("--unsafe-dump", globals_.unsafe_dump, "allow printing SUC descriptors");
  app.add_flag("-q,--quiet", globals_.quiet, "log warnings only");

  const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                        int (Runner::*fn)()) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->fallthrough();
    actions_.emplace_back(sub, [this, fn] { return (this->*fn)(); });
    return sub;
  };
  const auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };

  // puf
  CLI::App* puf = group("puf", "classic PUF models");
  CLI::App* sim = leaf(puf, "simulate", "evaluate random challenges on one device", &Runner::puf_simulate);
  dev_.add_to(sim);
  env_.add_to(sim);
  sim->add_option("--challenges", sim_count_, "number of evaluations")->check(CLI::Range(1, 1 << 20));
  CLI::App* met = leaf(puf, "metrics", "uniqueness, reliability and uniformity", &Runner::puf_metrics);
  dev_.add_to(met);
  met->add_option("--devices", met_devices_, "population size");
  met->add_option("--challenges", met_challenges_, "challenges per device (ignored by sram/ro)");
  met->add_option("--reps", reps_, "repetitions per grid point");
  met->add_option("--temperatures", temperatures_, "reliability grid")->delimiter(',');
  met->add_option("--voltage", env_.voltage, "supply volts for the grid");

  // fe
  CLI::App* fe = group("fe", "fuzzy extractor");
  CLI::App* des = leaf(fe, "design", "size a repetition code", &Runner::fe_design);
  CLI::App* gen = leaf(fe, "generate", "enroll a reading", &Runner::fe_generate_cmd);
  for (CLI::App* sub : {des, gen}) {
    sub->add_option("--ber", fe_ber_, "design bit error rate");
    sub->add_option("--fail", fe_fail_, "key failure target");
    sub->add_option("--blocks", fe_blocks_, "message bits");
  }
  gen->add_option("--n-rep", n_rep_, "use this repetition length instead of designing one");
  gen->add_option("--key-len", fe_key_len_, "extracted key bits");
  CLI::App* rep = leaf(fe, "reproduce", "recover a key from a noisy reading", &Runner::fe_reproduce_cmd);
  rep->add_option("--helper", helper_path_, "helper data file")->required();
  for (CLI::App* sub : {gen, rep}) {
    sub->add_option("--reading", reading_hex_, "reading as MSB-first hex");
    sub->add_option("--reading-bits", reading_bits_, "reading length when not a multiple of 4");
    sub->add_option("--fingerprint", fingerprint_path_, "take the reading from a fingerprint file");
  }

  // suc
  CLI::App* suc = group("suc", "secret unknown cipher");
  CLI::App* per = leaf(suc, "personalize", "create a device (seeded only for tests)", &Runner::suc_personalize);
  per->add_option("--id", device_id_, "device id")->required();
  per->add_option("--rounds", dev_.rounds, "rounds")->check(CLI::Range(1, 1000));
  CLI::App* ana = leaf(suc, "analyze", "cardinality and trail bounds", &Runner::suc_analyze);
  ana->add_option("--rounds", dev_.rounds, "rounds")->check(CLI::Range(1, 1000));
  ana->add_option("--budget", budget_, "sampled bijections");
  CLI::App* enc = leaf(suc, "encrypt", "encrypt or decrypt one block", &Runner::suc_encrypt_cmd);
  enc->add_option("--device", device_path_, "device file")->required();
  enc->add_option("--block", text_hex_, "64-bit block as 16 hex digits")->required();
  enc->add_flag("--decrypt", decrypt_, "decrypt instead");

  // acoustic
  CLI::App* ac = group("acoustic", "structural identity");
  CLI::App* fp = leaf(ac, "fingerprint", "measure one structure", &Runner::acoustic_fingerprint);
  CLI::App* aen = leaf(ac, "enroll", "structural helper data for combined verification", &Runner::acoustic_enroll);
  for (CLI::App* sub : {fp, aen}) {
    sub->add_option("--structure-seed", structure_seed_, "identity of the physical structure")->required();
    sub->add_option("--id", device_id_, "device id");
  }
  fp->add_option("--helper", helper_path_, "take bin thresholds from a structural helper file");
  env_.add_to(fp);
  aen->add_option("--population", ac_population_, "reference population for the entropy estimate");
  aen->add_option("--ber", ac_ber_, "design bit error rate");
  aen->add_option("--fail", ac_fail_, "key failure target");
  aen->add_option("--blocks", ac_blocks_, "message bits");
  aen->add_option("--key-len", ac_key_len_, "extracted key bits");
  CLI::App* ent = leaf(ac, "entropy", "degrees-of-freedom estimate", &Runner::acoustic_entropy);
  ent->add_option("--devices", ent_devices_, "population size");
  ent->add_flag("--iid", iid_, "uniform random bit vectors instead of structures");
  for (CLI::App* sub : {fp, aen, ent}) {
    sub->add_option("--bins", bins_, "frequency bins");
    sub->add_option("--smoothing", smoothing_, "adjacent-bin correlation in [0, 1)");
    sub->add_option("--meas-noise", meas_noise_, "complex measurement noise sigma");
  }
  CLI::App* sp = leaf(ac, "space", "challenge-space size in bits", &Runner::acoustic_space);
  sp->add_option("--t", t_, "stimulation frequencies");
  sp->add_option("--k", k_, "slots per wave train");
  sp->add_option("--p", p_, "occupied slots");

  // protocol
  CLI::App* en = leaf(&app, "enroll", "collect CRPs into a store", &Runner::enroll_cmd);
  en->add_option("--pairs", enroll_pairs_, "pairs to add")->required();
  en->add_option("--mode", mode_, "forward | inverse")->check(CLI::IsMember({"forward", "inverse"}));
  CLI::App* id = leaf(&app, "identify", "one identification round", &Runner::identify_cmd);
  id->add_option("--flip", flips_, "tamper: response bit positions flipped in transit")->delimiter(',');
  id->add_option("--challenge", challenge_hex_, "verify a presented transcript instead of querying");
  id->add_option("--response", response_hex_, "response of the presented transcript");
  CLI::App* cv = leaf(&app, "combined-verify", "structural + SUC verification", &Runner::combined_verify_cmd);
  cv->add_option("--helper", helper_path_, "structural helper file")->required();
  cv->add_option("--fingerprint", fingerprint_path_, "measured fingerprint file")->required();
  cv->add_option("--tau", tau_, "max fraction of corrected fingerprint bits");
  cv->add_option("--suc-entropy", suc_entropy_, "SUC identification entropy in bits");
  for (CLI::App* sub : {en, id, cv}) {
    sub->add_option("--store", store_path_, "CRP store file")->required();
    sub->add_option("--device", device_path_, "device file");
    sub->add_option("--id", device_id_, "device id (default: the device's)");
  }

  // attack
  CLI::App* at = group("attack", "cloning attacks");
  CLI::App* am = leaf(at, "model", "modeling attack", &Runner::attack_model);
  dev_.add_to(am);
  am->add_option("--crps", atk_crps_, "training CRPs");
  am->add_option("--test", atk_test_, "test challenges");
  am->add_option("--epochs", epochs_, "gradient-descent epochs");
  am->add_option("--lr", lr_, "learning rate");
  am->add_option("--xor-epochs", xor_epochs_, "XOR model epochs");
  am->add_option("--xor-step", xor_step_, "XOR model initial step size");
  am->add_option("--restarts", restarts_, "XOR model restarts");
  am->add_option("--bit", bit_, "SUC ciphertext bit attacked")->check(CLI::Range(0, 63));
  am->add_option("--device", device_path_, "SUC device file to attack");
  CLI::App* ar = leaf(at, "readout", "SRAM readout clone", &Runner::attack_readout);
  ar->add_option("--cells", dev_.cells, "SRAM cells");
  ar->add_option("--trials", ro_trials_, "authentication attempts per device");
  ar->add_option("--ber", ro_ber_, "design bit error rate");
  env_.add_to(ar);

  CLI::App* rp = leaf(&app, "repro", "run a reproduction experiment", &Runner::repro_cmd);
  rp->add_option("name", repro_name_, "experiment name, or 'all'");
  rp->add_flag("--list", list_, "list experiments");
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"clonebench: clone-resistance experiments", "clonebench"};
  build(app);
  std::vector<const char*> argv{"clonebench"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), const_cast<char**>(argv.data()));
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    std::ostringstream help;
    const int code = app.exit(e, help, msg);
    if (code == 0) {
      out_ << help.str();
      return kExitAccept;
    }
    log_.error("{}", CLI::detail::trim_copy(msg.str()));
    return kExitUsage;
  }
  if (globals_.quiet) log_.set_level(spdlog::level::warn);

  for (auto& [sub, action] : actions_) {
    if (!sub->parsed()) continue;
    try {
      return action();
    } catch (const Error& e) {
      log_.error("{}", e.what());
      return exit_code_for(e.code());
    } catch (const json::exception& e) {
      log_.error("data-error: {}", e.what());
      return kExitData;
    } catch (const std::exception& e) {
      log_.error("{}", e.what());
      return kExitData;
    }
  }
  log_.error("no command given");
  return kExitUsage;
}

// ---------------------------------------------------------------------------
// puf

int Runner::puf_simulate() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("puf.simulate", &result);
  require(dev_.model != "suc", ErrorCode::kInvalidParameter,
          "use 'suc personalize' and 'suc encrypt' for the SUC");
  const std::size_t n = sim_count_;
  const DeviceDescriptor desc = dev_.descriptor(rng.split("device").seed());
  const auto device = make_device(desc);
  const auto env = env_.env();
  Rng challenges = rng.split("challenges");
  Rng noise = rng.split("noise");
  json evals = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const BitString c = challenges.bits(device->challenge_bits());
    evals.push_back({{"c_hex", c.to_hex()}, {"r_hex", device->respond(c, env, &noise).to_hex()}});
  }
  result["device"] = desc;
  result["temperature_c"] = env.temperature_c;
  result["voltage_v"] = env.voltage_v;
  result["evaluations"] = evals;
  save(desc);
  emit(result);
  return kExitAccept;
}

int Runner::puf_metrics() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("puf.metrics", &result);
  require(met_devices_ >= 2, ErrorCode::kInsufficientPopulation, "need at least two devices");

  std::vector<std::unique_ptr<ResponseDevice>> owned;
  std::vector<SucDevice> sucs;
  sucs.reserve(met_devices_);
  for (std::size_t i = 0; i < met_devices_; ++i) {
    if (dev_.model == "suc") {
      sucs.push_back(personalize(dev_.suc_params(), rng.split("population").split(i),
                                 "suc-" + std::to_string(i)));
      owned.push_back(std::make_unique<SucResponder>(sucs.back()));
    } else {
      owned.push_back(make_device(dev_.descriptor(rng.split("population").split(i).seed())));
    }
  }
  std::vector<const ResponseDevice*> population;
  for (const auto& d : owned) population.push_back(d.get());

  std::vector<BitString> challenges;
  Rng crng = rng.split("challenges");
  const std::size_t width = population.front()->challenge_bits();
  const std::size_t n = width == 0 ? 1 : met_challenges_;
  for (std::size_t i = 0; i < n; ++i) challenges.push_back(crng.bits(width));

  PopulationReport pop = uniqueness(population, challenges);
  std::vector<EnvironmentConditions> grid;
  for (double t : temperatures_) grid.push_back(EnvironmentConditions{t, env_.voltage});
  Rng noise = rng.split("noise");
  const ReliabilityTable table = reliability(*population.front(), challenges, grid, reps_, noise);
  result["population"] = pop;
  result["reliability"] = table;
  save(result);
  emit(result);
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// fe

int Runner::fe_design() {
  const auto params = design_repetition(fe_ber_, fe_fail_, fe_blocks_);
  const double block_failure = repetition_block_failure(params.n_rep, fe_ber_);
  json result = params;
  result["schema_version"] = kSchemaVersion;
  result["codeword_bits"] = params.codeword_bits();
  result["block_failure"] = block_failure;
  result["key_failure_bound"] = static_cast<double>(fe_blocks_) * block_failure;
  result["sketch_leak_bits"] = code_offset_leak_bits(params.n_rep, params.n_blocks);
  save(result);
  emit(result);
  return kExitAccept;
}

BitString Runner::reading_from_flags(std::size_t min_bits) {
  require(reading_hex_.empty() || fingerprint_path_.empty(), ErrorCode::kInvalidParameter,
          "give --reading or --fingerprint, not both");
  BitString w;
  if (!fingerprint_path_.empty()) {
    w = read_json_file(fingerprint_path_).get<Fingerprint>().bits;
  } else {
    require(!reading_hex_.empty(), ErrorCode::kInvalidParameter,
            "a reading is required (--reading or --fingerprint)");
    w = arg_hex(reading_hex_, reading_bits_, "--reading");
  }
  require(w.size() >= min_bits, ErrorCode::kInvalidParameter,
          "reading has " + std::to_string(w.size()) + " bits, " + std::to_string(min_bits) +
              " needed");
  return w.slice(0, min_bits);
}

int Runner::fe_generate_cmd() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("fe.generate", &result);
  RepetitionParams params;
  if (n_rep_) {
    params.n_rep = *n_rep_;
    params.n_blocks = fe_blocks_;
    params.design_ber = fe_ber_;
    params.fail_target = fe_fail_;
    params.validate();
  } else {
    params = design_repetition(fe_ber_, fe_fail_, fe_blocks_);
  }
  const BitString w = reading_from_flags(params.codeword_bits());
  const auto [key, helper] = fe_generate(w, params, fe_key_len_, rng);
  result["key_hex"] = key.key.to_hex();
  result["params"] = params;
  result["helper"] = helper;
  save(json(helper));
  emit(result);
  return kExitAccept;
}

int Runner::fe_reproduce_cmd() {
  const HelperData helper = read_json_file(helper_path_).get<HelperData>();
  const BitString w = reading_from_flags(helper.sketch.size());
  const Reproduction rep = fe_reproduce_detailed(w, helper);
  json result{{"schema_version", kSchemaVersion},
              {"status", rep.key ? "ok" : "fail"},
              {"corrected_bits", rep.corrected_bits}};
  if (rep.key) result["key_hex"] = rep.key->key.to_hex();
  save(result);
  emit(result);
  return rep.key ? kExitAccept : kExitReject;
}

// ---------------------------------------------------------------------------
// suc

int Runner::suc_personalize() {
  // The generation stream must stay unknown: without --seed it comes from OS
  // entropy and is never echoed, logged or stored. --seed is for tests.
  const bool test_mode = globals_.seed.has_value();
  Rng trng = test_mode ? Rng(*globals_.seed).split("suc.personalize") : Rng::from_os_entropy();
  const SucDevice dev = personalize(dev_.suc_params(), std::move(trng), device_id_);
  const json file = SucDeviceVault::save(dev);
  json result{{"schema_version", kSchemaVersion},
              {"device_id", dev.device_id()},
              {"params", params_to_json(dev.params())},
              {"test_mode", test_mode}};
  if (globals_.out.empty()) {
    log_.warn("no --out given; the device exists only for this run");
  } else {
    save(file);
    result["device_file"] = globals_.out;
  }
  if (globals_.unsafe_dump) result["descriptor"] = file.at("descriptor");
  emit(result);
  return kExitAccept;
}

int Runner::suc_analyze() {
  json result;
  Rng rng = verb_rng("suc.analyze", &result);
  const SecurityReport rep = security_report(dev_.suc_params(), budget_, rng);
  json report = rep;
  report["seed"] = result["seed"];
  report["rounds"] = dev_.rounds;
  save(report);
  emit(report);
  return kExitAccept;
}

int Runner::suc_encrypt_cmd() {
  const SucDevice dev = SucDeviceVault::load(read_json_file(device_path_));
  const BitString x = arg_hex(text_hex_, 64, "--block");
  const BitString y = decrypt_ ? suc_decrypt(dev, x) : suc_encrypt(dev, x);
  json result{{"schema_version", kSchemaVersion},
              {"device_id", dev.device_id()},
              {decrypt_ ? "ciphertext_hex" : "plaintext_hex", x.to_hex()},
              {decrypt_ ? "plaintext_hex" : "ciphertext_hex", y.to_hex()}};
  if (globals_.unsafe_dump) result["descriptor"] = SucDeviceVault::save(dev).at("descriptor");
  save(result);
  emit(result);
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// acoustic

namespace {

StructureOptions structure_options(double meas_noise) {
  StructureOptions o;
  o.meas_noise_sigma = meas_noise;
  return o;
}

}  // namespace

int Runner::acoustic_fingerprint() {
  json echo;
  Rng noise = verb_rng("acoustic.fingerprint", &echo);
  const StructureModel s =
      StructureModel::create(structure_seed_, bins_, smoothing_, structure_options(meas_noise_));
  std::optional<std::vector<double>> thresholds;
  if (!helper_path_.empty()) {
    thresholds = read_json_file(helper_path_).get<StructuralHelper>().thresholds;
  }
  Fingerprint f = fingerprint(s, env_.env(), &noise, thresholds);
  f.device_id = device_id_.empty() ? "structure-" + std::to_string(structure_seed_) : device_id_;
  json result = f;
  save(result);
  emit(result);
  return kExitAccept;
}

int Runner::acoustic_enroll() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("acoustic.enroll", &result);
  const std::size_t n = ac_population_;
  const auto opts = structure_options(meas_noise_);
  Rng noise = rng.split("noise");
  std::vector<Fingerprint> pop;
  for (std::size_t i = 0; i < n; ++i) {
    pop.push_back(fingerprint(
        StructureModel::create(rng.split("population").split(i).seed(), bins_, smoothing_, opts),
        EnvironmentConditions::nominal(), &noise));
  }
  const EntropyEstimate est = structural_entropy_estimate(pop);
  const auto params = design_repetition(ac_ber_, ac_fail_, ac_blocks_);
  const StructureModel s = StructureModel::create(structure_seed_, bins_, smoothing_, opts);
  const Fingerprint enrolled = fingerprint(s, EnvironmentConditions::nominal(), &noise);
  require(params.codeword_bits() <= enrolled.bits.size(), ErrorCode::kInfeasibleDesign,
          "repetition code needs " + std::to_string(params.codeword_bits()) +
              " bits but the fingerprint has " + std::to_string(enrolled.bits.size()));
  Rng gen = rng.split("generate");
  StructuralHelper helper;
  helper.fe = fe_generate(enrolled.bits.slice(0, params.codeword_bits()), params, ac_key_len_, gen).second;
  helper.thresholds = enrolled.thresholds;
  helper.dof_bits = est.dof_bits;
  save(json(helper));
  result["entropy"] = est;
  result["params"] = params;
  result["helper"] = helper;
  emit(result);
  return kExitAccept;
}

int Runner::acoustic_entropy() {
  json result;
  Rng rng = verb_rng("acoustic.entropy", &result);
  const std::size_t n = ent_devices_;
  EntropyEstimate est;
  if (iid_) {
    std::vector<BitString> pop;
    for (std::size_t i = 0; i < n; ++i) pop.push_back(rng.bits(bins_));
    est = estimate_degrees_of_freedom(pop);
  } else {
    const auto opts = structure_options(meas_noise_);
    Rng noise = rng.split("noise");
    std::vector<Fingerprint> pop;
    for (std::size_t i = 0; i < n; ++i) {
      pop.push_back(fingerprint(
          StructureModel::create(rng.split("population").split(i).seed(), bins_, smoothing_, opts),
          EnvironmentConditions::nominal(), &noise));
    }
    est = structural_entropy_estimate(pop);
  }
  json report = est;
  report["seed"] = result["seed"];
  report["devices"] = n;
  save(report);
  emit(report);
  return kExitAccept;
}

int Runner::acoustic_space() {
  const ChallengeSpace space = challenge_space_bits({t_, k_, p_});
  json result{{"bits", space.bits}};
  if (!space.note.empty()) result["note"] = space.note;
  save(result);
  emit(result);
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// protocol

namespace {

// The device side of a protocol run, built from a device file.
struct DeviceAgent {
  std::optional<SucDevice> suc;
  std::unique_ptr<ResponseDevice> puf;
  std::unique_ptr<DeviceChannel> channel;
  std::string id;
};

// The noise stream is only drawn for analog devices.
DeviceAgent load_agent(const std::string& path, const std::function<Rng()>& noise) {
  require(!path.empty(), ErrorCode::kInvalidParameter, "--device is required");
  const json j = read_json_file(path);
  DeviceAgent a;
  if (is_suc_device_file(j)) {
    a.suc.emplace(SucDeviceVault::load(j));
    a.id = a.suc->device_id();
    a.channel = std::make_unique<SucChannel>(*a.suc);
  } else {
    DeviceDescriptor d;
    try {
      d = j.get<DeviceDescriptor>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kDataError, std::string("malformed device file: ") + e.what());
    }
    a.puf = make_device(d);
    a.id = j.value("device_id", d.model + "-" + std::to_string(d.seed));
    a.channel = std::make_unique<PufChannel>(*a.puf, EnvironmentConditions::nominal(), noise());
  }
  return a;
}

}  // namespace

int Runner::enroll_cmd() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("enroll", &result);
  DeviceAgent agent = load_agent(device_path_, [&] { return rng.split("noise"); });
  const std::string id = device_id_.empty() ? agent.id : device_id_;
  const CrpMode mode = parse_mode(mode_);
  std::optional<CrpStore> store;
  if (std::filesystem::exists(store_path_)) {
    store.emplace(store_from_json(read_json_file(store_path_)));
    require(store->device_id() == id, ErrorCode::kInvalidInput,
            "store belongs to device '" + store->device_id() + "'");
    require(store->mode() == mode, ErrorCode::kInvalidParameter,
            "store is in " + std::string(mode_name(store->mode())) + " mode");
  } else {
    const std::size_t rbits = agent.suc ? 64 : agent.puf->response_bits();
    store.emplace(id, mode, agent.channel->challenge_bits(), rbits);
  }
  Rng draw = rng.split("challenges");
  const std::size_t added = enroll(*agent.channel, enroll_pairs_, draw, *store);
  write_json_file(store_path_, store_to_json(*store));
  log_.info("stored {} pairs in {}", added, store_path_);
  result["device_id"] = id;
  result["mode"] = mode_name(store->mode());
  result["added"] = added;
  result["unused"] = store->unused_count();
  result["total"] = store->size();
  emit(result);
  return kExitAccept;
}

int Runner::identify_cmd() {
  CrpStore store = store_from_json(read_json_file(store_path_));
  VerdictReport verdict;
  if (!challenge_hex_.empty() || !response_hex_.empty()) {
    require(!challenge_hex_.empty() && !response_hex_.empty(), ErrorCode::kInvalidParameter,
            "--challenge and --response go together");
    const std::string id = device_id_.empty() ? store.device_id() : device_id_;
    verdict = verify_transcript(store, id,
                                arg_hex(challenge_hex_, store.challenge_bits(), "--challenge"),
                                arg_hex(response_hex_, store.response_bits(), "--response"));
  } else {
    DeviceAgent agent = load_agent(
        device_path_, [this] { return verb_rng("identify", nullptr).split("noise"); });
    const std::string id = device_id_.empty() ? agent.id : device_id_;
    if (flips_.empty()) {
      verdict = identify(store, *agent.channel, id);
    } else {
      const std::size_t width =
          store.mode() == CrpMode::kForward ? store.response_bits() : store.challenge_bits();
      TamperedChannel tampered = tamper_channel(*agent.channel, flips_, width);
      verdict = identify(store, tampered, id);
    }
  }
  write_json_file(store_path_, store_to_json(store));
  json result = verdict;
  result["unused"] = store.unused_count();
  emit(result);
  return verdict.accepted() ? kExitAccept : kExitReject;
}

int Runner::combined_verify_cmd() {
  CrpStore store = store_from_json(read_json_file(store_path_));
  const StructuralHelper helper = read_json_file(helper_path_).get<StructuralHelper>();
  const Fingerprint fp = read_json_file(fingerprint_path_).get<Fingerprint>();
  DeviceAgent agent = load_agent(
      device_path_, [this] { return verb_rng("combined-verify", nullptr).split("noise"); });
  const std::string id = device_id_.empty() ? agent.id : device_id_;
  const VerdictReport verdict =
      combined_verify(store, helper, fp, *agent.channel, id, tau_, suc_entropy_);
  write_json_file(store_path_, store_to_json(store));
  json result = verdict;
  result["structural_dof_bits"] = helper.dof_bits;
  result["suc_entropy_bits"] = suc_entropy_;
  emit(result);
  return verdict.accepted() ? kExitAccept : kExitReject;
}

// ---------------------------------------------------------------------------
// attack

int Runner::attack_model() {
  json echo;
  Rng rng = verb_rng("attack.model", &echo);
  const std::size_t n_train = atk_crps_;
  const std::size_t n_test = atk_test_;
  AttackReport report;
  if (dev_.model == "suc") {
    std::optional<SucDevice> dev;
    if (device_path_.empty()) {
      dev.emplace(personalize(dev_.suc_params(), rng.split("genie"), "attack-target"));
    } else {
      dev.emplace(SucDeviceVault::load(read_json_file(device_path_)));
    }
    const SucBitTarget target(*dev, bit_);
    Rng crps = rng.split("crps");
    const LinearModel m = train_model(collect_crps(target, n_train, crps), epochs_, lr_);
    report = eval_model(m, target, n_test, crps);
  } else if (dev_.model == "arbiter" || dev_.model == "xor-arbiter") {
    const auto target = make_device(dev_.descriptor(rng.split("target").seed()));
    Rng crps = rng.split("crps");
    const CrpDataset data = collect_crps(*target, n_train, crps);
    if (dev_.model == "arbiter") {
      report = eval_model(train_model(data, epochs_, lr_), *target, n_test, crps);
    } else {
      Rng init = rng.split("init");
      report = eval_model(train_xor_model(data, dev_.xor_k, xor_epochs_, xor_step_, restarts_, init),
                          *target, n_test, crps);
    }
  } else {
    fail(ErrorCode::kInvalidParameter, "modeling attacks target arbiter, xor-arbiter or suc");
  }
  json result = report;
  result["seed"] = echo["seed"];
  save(result);
  emit(result);
  return kExitAccept;
}

int Runner::attack_readout() {
  json result{{"schema_version", kSchemaVersion}};
  Rng rng = verb_rng("attack.readout", &result);
  const auto params = design_repetition(ro_ber_, 1e-6, 32);
  const std::size_t cells = std::max(dev_.cells, params.codeword_bits());
  const SramPuf target = SramPuf::create(cells, rng.split("target").seed());
  Rng attacker = rng.split("attacker");
  const SramPuf clone = readout_clone(target, attacker);
  const BitString w = target.reference_pattern().slice(0, params.codeword_bits());
  Rng gen = rng.split("generate");
  const auto [key, helper] = fe_generate(w, params, 128, gen);
  const auto env = env_.env();
  Rng noise = rng.split("noise");
  std::size_t genuine_ok = 0;
  std::size_t clone_ok = 0;
  for (std::size_t t = 0; t < ro_trials_; ++t) {
    const auto kg = fe_reproduce(sram_startup(target, env, &noise).slice(0, w.size()), helper);
    const auto kc = fe_reproduce(sram_startup(clone, env, &noise).slice(0, w.size()), helper);
    genuine_ok += (kg && *kg == key) ? 1 : 0;
    clone_ok += (kc && *kc == key) ? 1 : 0;
  }
  result["cells"] = cells;
  result["reference_hd"] = hamming_distance(clone.reference_pattern(), target.reference_pattern());
  result["trials"] = ro_trials_;
  result["genuine_rate"] = static_cast<double>(genuine_ok) / static_cast<double>(ro_trials_);
  result["clone_rate"] = static_cast<double>(clone_ok) / static_cast<double>(ro_trials_);
  result["suc_readout"] = "unavailable: a SUC has no readable descriptor";
  save(result);
  emit(result);
  return kExitAccept;
}

// ---------------------------------------------------------------------------
// repro

int Runner::repro_cmd() {
  if (list_) {
    json list = json::array();
    for (const auto& r : repro_catalog()) {
      list.push_back({{"name", r.name},
                      {"description", r.description},
                      {"time_limit_seconds", r.time_limit_seconds}});
    }
    emit(list);
    return kExitAccept;
  }
  require(!repro_name_.empty(), ErrorCode::kInvalidParameter, "name an experiment or pass --list");
  require(repro_name_ == "all" || is_repro_name(repro_name_), ErrorCode::kInvalidParameter,
          "unknown experiment '" + repro_name_ + "'");
  json echo;
  verb_rng("repro", &echo);
  const std::uint64_t seed = echo["seed"].get<std::uint64_t>();
  std::vector<std::string> names;
  if (repro_name_ == "all") {
    for (const auto& r : repro_catalog()) names.push_back(r.name);
  } else {
    names.push_back(repro_name_);
  }
  json results = json::array();
  bool all_pass = true;
  for (const auto& name : names) {
    const ReproResult r = run_repro(name, seed);
    log_.info("{} {} in {:.2f}s (limit {:.0f}s): {}", r.pass ? "PASS" : "FAIL", r.name,
              r.seconds, r.time_limit_seconds, r.summary);
    json j = r;
    j.erase("seconds");  // stdout stays byte-identical across runs
    j["seed"] = seed;
    results.push_back(std::move(j));
    all_pass = all_pass && r.pass;
  }
  const json result = names.size() == 1 ? results.front() : results;
  save(result);
  emit(result);
  return all_pass ? kExitAccept : kExitReject;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  Runner runner(out, err);
  return runner.run(args);
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace clonebench
