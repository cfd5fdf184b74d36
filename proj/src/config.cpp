#include "jrs/config.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jrs {

using nlohmann::json;

JointConfig JointConfig::denoising() { return {}; }

JointConfig JointConfig::synthetic() {
  JointConfig c;
  c.sigma = 0.3;
  c.u0 = 0.5;
  c.beta = 3e-5;
  c.nu = 1e-9;
  c.huber_scale = 1.0;
  c.iterations = 10;
  c.reference_samples = 10;
  return c;
}

JointConfig JointConfig::deblurring() {
  JointConfig c;
  c.alpha = 2.0;
  c.eta = 2.0;
  c.tau = 0.002;
  c.epsilon = 0.002;
  c.rank = 200;
  c.huber_scale = 1.0;
  c.iterations = 15;
  c.init_fidelity = 45.0;
  c.model = "blur";
  c.blur_length = 75;
  return c;
}

ForwardModel JointConfig::forward_model() const {
  if (model == "identity") return ForwardModel::identity();
  if (model == "blur") return ForwardModel::motion_blur(blur_length);
  throw std::invalid_argument("config: model must be \"identity\" or \"blur\", got \"" + model + "\"");
}

void JointConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(tau > 0.0, "tau must be positive");
  require(epsilon > 0.0, "epsilon must be positive");
  require(tau <= epsilon, "tau must not exceed epsilon");
  require(alpha >= 0.0 && beta >= 0.0 && eta >= 0.0 && nu >= 0.0,
          "alpha, beta, eta and nu must be non-negative");
  require(beta == 0.0 || eta > 0.0, "eta must be positive when beta > 0");
  require(sigma > 0.0, "sigma must be positive");
  require(mu >= 0.0, "mu must be non-negative");
  require(rank >= 1, "rank must be at least 1");
  require(k1 >= 0 && k2 >= 0, "k1 and k2 must be non-negative");
  require(k_s >= 1 && n_b >= 1, "k_s and n_b must be at least 1");
  require(delta > 0.0, "delta must be positive");
  require(max_sdie_iters >= 1, "max_sdie_iters must be at least 1");
  require(u0 >= 0.0 && u0 <= 1.0, "u0 must lie in [0, 1]");
  require(huber_scale > 0.0 && huber_threshold > 0.0, "invalid Huber-TV parameters");
  require(init_huber_scale > 0.0 && init_huber_threshold > 0.0,
          "invalid initialisation Huber-TV parameters");
  require(init_fidelity > 0.0, "init_fidelity must be positive");
  require(pd_max_iters >= 1 && init_max_iters >= 1 && prox_max_iters >= 1,
          "iteration budgets must be at least 1");
  require(pd_tolerance > 0.0 && prox_tolerance > 0.0, "tolerances must be positive");
  require(pd_patience >= 1, "pd_patience must be at least 1");
  require(iterations >= 0, "iterations must be non-negative");
  require(reference_samples >= 0, "reference_samples must be non-negative");
  require(observation_noise >= 0.0, "observation_noise must be non-negative");
  forward_model();
}

namespace {

using Setter = std::function<void(JointConfig&, const json&)>;

template <class T>
Setter field(T JointConfig::*member) {
  return [member](JointConfig& c, const json& v) { c.*member = v.get<T>(); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha", field(&JointConfig::alpha)},
      {"beta", field(&JointConfig::beta)},
      {"epsilon", field(&JointConfig::epsilon)},
      {"tau", field(&JointConfig::tau)},
      {"sigma", field(&JointConfig::sigma)},
      {"eta", field(&JointConfig::eta)},
      {"nu", field(&JointConfig::nu)},
      {"mu", field(&JointConfig::mu)},
      {"K", field(&JointConfig::rank)},
      {"rank", field(&JointConfig::rank)},
      {"K1", field(&JointConfig::k1)},
      {"K2", field(&JointConfig::k2)},
      {"k_s", field(&JointConfig::k_s)},
      {"n_b", field(&JointConfig::n_b)},
      {"delta", field(&JointConfig::delta)},
      {"max_sdie_iters", field(&JointConfig::max_sdie_iters)},
      {"u0", field(&JointConfig::u0)},
      {"huber_scale", field(&JointConfig::huber_scale)},
      {"huber_threshold", field(&JointConfig::huber_threshold)},
      {"pd_max_iters", field(&JointConfig::pd_max_iters)},
      {"pd_tolerance", field(&JointConfig::pd_tolerance)},
      {"pd_patience", field(&JointConfig::pd_patience)},
      {"prox_tolerance", field(&JointConfig::prox_tolerance)},
      {"prox_max_iters", field(&JointConfig::prox_max_iters)},
      {"init_fidelity", field(&JointConfig::init_fidelity)},
      {"init_huber_scale", field(&JointConfig::init_huber_scale)},
      {"init_huber_threshold", field(&JointConfig::init_huber_threshold)},
      {"init_max_iters", field(&JointConfig::init_max_iters)},
      {"model", field(&JointConfig::model)},
      {"blur_length", field(&JointConfig::blur_length)},
      {"iterations", field(&JointConfig::iterations)},
      {"seed", field(&JointConfig::seed)},
      {"exact_mode", field(&JointConfig::exact_mode)},
      {"exact_updates", field(&JointConfig::exact_updates)},
      {"exact_inner_iters", field(&JointConfig::exact_inner_iters)},
      {"energy",
       [](JointConfig& c, const json& v) {
         const std::string s = v.get<std::string>();
         if (s == "off") c.energy = EnergyMode::off;
         else if (s == "dense") c.energy = EnergyMode::dense;
         else if (s == "auto") c.energy = EnergyMode::automatic;
         else throw std::invalid_argument("config: energy must be off, dense or auto");
       }},
      {"reference_image", field(&JointConfig::reference_image)},
      {"reference_mask", field(&JointConfig::reference_mask)},
      {"observed_image", field(&JointConfig::observed_image)},
      {"ground_truth_image", field(&JointConfig::ground_truth_image)},
      {"ground_truth_mask", field(&JointConfig::ground_truth_mask)},
      {"reference_samples", field(&JointConfig::reference_samples)},
      {"observation_noise", field(&JointConfig::observation_noise)},
      {"output_dir", field(&JointConfig::output_dir)},
  };
  return table;
}

void set_key(JointConfig& c, const std::string& key, const json& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("config: unknown key \"" + key + "\"");
  try {
    it->second(c, value);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: bad value for \"" + key + "\": " + e.what());
  }
}

JointConfig preset(const std::string& name) {
  if (name == "denoising") return JointConfig::denoising();
  if (name == "deblurring") return JointConfig::deblurring();
  if (name == "synthetic") return JointConfig::synthetic();
  throw std::invalid_argument("config: unknown preset \"" + name + "\"");
}

}  // namespace

JointConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
  JointConfig c = doc.contains("preset") ? preset(doc["preset"].get<std::string>()) : JointConfig{};
  for (const auto& [key, value] : doc.items()) {
    if (key != "preset") set_key(c, key, value);
  }
  return c;
}

JointConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(JointConfig& config, const std::string& key, const std::string& value) {
  json v = json::parse(value, nullptr, false);
  if (v.is_discarded()) v = value;  // bare strings need no quotes
  set_key(config, key, v);
}

std::string to_json(const JointConfig& c) {
  const char* energy = c.energy == EnergyMode::off ? "off"
                       : c.energy == EnergyMode::dense ? "dense"
                                                       : "auto";
  json doc = {
      {"alpha", c.alpha}, {"beta", c.beta}, {"epsilon", c.epsilon}, {"tau", c.tau},
      {"sigma", c.sigma}, {"eta", c.eta}, {"nu", c.nu}, {"mu", c.mu},
      {"K", c.rank}, {"K1", c.k1}, {"K2", c.k2}, {"k_s", c.k_s}, {"n_b", c.n_b},
      {"delta", c.delta}, {"max_sdie_iters", c.max_sdie_iters}, {"u0", c.u0},
      {"huber_scale", c.huber_scale}, {"huber_threshold", c.huber_threshold},
      {"pd_max_iters", c.pd_max_iters}, {"pd_tolerance", c.pd_tolerance},
      {"pd_patience", c.pd_patience}, {"prox_tolerance", c.prox_tolerance},
      {"prox_max_iters", c.prox_max_iters}, {"init_fidelity", c.init_fidelity},
      {"init_huber_scale", c.init_huber_scale}, {"init_huber_threshold", c.init_huber_threshold},
      {"init_max_iters", c.init_max_iters}, {"model", c.model}, {"blur_length", c.blur_length},
      {"iterations", c.iterations}, {"seed", c.seed}, {"exact_mode", c.exact_mode},
      {"exact_updates", c.exact_updates}, {"exact_inner_iters", c.exact_inner_iters},
      {"energy", energy}, {"reference_image", c.reference_image},
      {"reference_mask", c.reference_mask}, {"observed_image", c.observed_image},
      {"ground_truth_image", c.ground_truth_image}, {"ground_truth_mask", c.ground_truth_mask},
      {"reference_samples", c.reference_samples}, {"observation_noise", c.observation_noise},
      {"output_dir", c.output_dir},
  };
  return doc.dump(2);
}

}  // namespace jrs
