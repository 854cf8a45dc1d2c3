#include "smcbf/app/config.hpp"

#include "smcbf/perturb.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace smcbf::app {

namespace {

using sim::FilterMode;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + message);
}

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

const Json& object(const Json& v, const std::string& path,
                   std::initializer_list<std::string_view> allowed) {
  if (!v.is_object()) fail(path, "must be an object");
  for (const auto& [key, value] : v.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(child(path, key), "unknown field");
  }
  return v;
}

const Json* member(const Json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const Json& required(const Json& obj, std::string_view key, const std::string& path) {
  const Json* v = member(obj, key);
  if (v == nullptr) fail(child(path, key), "missing required field");
  return *v;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], child(path, i)));
  return out;
}

Eigen::VectorXd vector(const Json& v, const std::string& path, Eigen::Index size = -1) {
  const std::vector<double> values = numbers(v, path);
  if (size >= 0 && static_cast<Eigen::Index>(values.size()) != size)
    fail(path, "must have " + std::to_string(size) + " entries");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void read(const Json& obj, std::string_view key, const std::string& path, double& out) {
  if (const Json* v = member(obj, key)) out = number(*v, child(path, key));
}

void read(const Json& obj, std::string_view key, const std::string& path, int& out) {
  if (const Json* v = member(obj, key)) {
    if (!v->is_number_integer()) fail(child(path, key), "must be an integer");
    out = v->get<int>();
  }
}

void read(const Json& obj, std::string_view key, const std::string& path, bool& out) {
  if (const Json* v = member(obj, key)) {
    if (!v->is_boolean()) fail(child(path, key), "must be true or false");
    out = v->get<bool>();
  }
}

void read(const Json& obj, std::string_view key, const std::string& path, std::string& out) {
  if (const Json* v = member(obj, key)) {
    if (!v->is_string()) fail(child(path, key), "must be a string");
    out = v->get<std::string>();
  }
}

template <int N>
void read(const Json& obj, std::string_view key, const std::string& path,
          Eigen::Matrix<double, N, 1>& out) {
  if (const Json* v = member(obj, key)) out = vector(*v, child(path, key), N);
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// References ---------------------------------------------------------------

Json to_json(const sim::ReferenceSignal& signal) {
  Json out = Json::array();
  for (const auto& c : signal.components) {
    if (const auto* s = std::get_if<sim::SquareWave>(&c)) {
      out.push_back({{"type", "square"}, {"amplitude", s->amplitude}, {"period", s->period}});
    } else if (const auto* p = std::get_if<sim::PulseTrain>(&c)) {
      out.push_back({{"type", "pulse"}, {"amplitude", p->amplitude}, {"width", p->width},
                     {"times", p->times}});
    } else {
      const auto& st = std::get<sim::StepSchedule>(c);
      out.push_back({{"type", "step"}, {"times", st.times}, {"values", st.values}});
    }
  }
  return out;
}

sim::ReferenceSignal reference_from(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "must be an array of reference components");
  sim::ReferenceSignal signal;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = child(path, i);
    if (!v[i].is_object()) fail(p, "must be an object");
    std::string type;
    read(v[i], "type", p, type);
    if (type == "square") {
      object(v[i], p, {"type", "amplitude", "period"});
      sim::SquareWave s;
      read(v[i], "amplitude", p, s.amplitude);
      read(v[i], "period", p, s.period);
      signal.components.emplace_back(s);
    } else if (type == "pulse") {
      object(v[i], p, {"type", "amplitude", "width", "times"});
      sim::PulseTrain s;
      read(v[i], "amplitude", p, s.amplitude);
      read(v[i], "width", p, s.width);
      if (const Json* t = member(v[i], "times")) s.times = numbers(*t, child(p, "times"));
      signal.components.emplace_back(s);
    } else if (type == "step") {
      object(v[i], p, {"type", "times", "values"});
      sim::StepSchedule s;
      if (const Json* t = member(v[i], "times")) s.times = numbers(*t, child(p, "times"));
      if (const Json* t = member(v[i], "values")) s.values = numbers(*t, child(p, "values"));
      signal.components.emplace_back(s);
    } else {
      fail(child(p, "type"), "must be one of square, pulse, step");
    }
  }
  return signal;
}

template <std::size_t N>
void read_references(const Json& obj, const std::string& path,
                     std::array<sim::ReferenceSignal, N>& out) {
  const Json* v = member(obj, "references");
  if (v == nullptr) return;
  const std::string p = child(path, "references");
  if (!v->is_array() || v->size() != N)
    fail(p, "must be an array with " + std::to_string(N) + " channels");
  for (std::size_t i = 0; i < N; ++i) out[i] = reference_from((*v)[i], child(p, i));
}

template <std::size_t N>
Json references_to_json(const std::array<sim::ReferenceSignal, N>& refs) {
  Json out = Json::array();
  for (const auto& r : refs) out.push_back(to_json(r));
  return out;
}

// Physical parameters --------------------------------------------------------

template <class Params>
Json params_to_json(const Params& p, std::span<const plants::ParamField<Params>> fields) {
  Json out = Json::object();
  for (const auto& f : fields) out[std::string(f.name)] = p.*(f.member);
  return out;
}

template <class Params>
Params params_from(const Json& v, const std::string& path,
                   std::span<const plants::ParamField<Params>> fields) {
  if (!v.is_object()) fail(path, "must be an object");
  Params p;
  for (const auto& [key, value] : v.items()) {
    bool found = false;
    for (const auto& f : fields) {
      if (f.name != key) continue;
      p.*(f.member) = number(value, child(path, key));
      found = true;
    }
    if (!found) fail(child(path, key), "unknown parameter");
  }
  return p;
}

// Plants -------------------------------------------------------------------

Json plant_to_json(const sim::FurutaSetup& s) {
  return {{"type", "furuta"},
          {"params", params_to_json(s.nominal, plants::furuta_param_fields())},
          {"theta1_max", s.theta1_max},
          {"lqr", {{"q_diagonal", to_json(s.lqr.q_diagonal)}, {"r", s.lqr.r}}},
          {"references", references_to_json(s.references)}};
}

Json plant_to_json(const sim::MaglevSetup& s) {
  Json smc = {{"lambda", to_json(s.smc.lambda)},
              {"eta", to_json(s.smc.eta)},
              {"boundary_layer", to_json(s.smc.boundary_layer)},
              {"design_mass_scale", s.smc.design_mass_scale}};
  if (s.smc.gain) smc["gain"] = to_json(*s.smc.gain);
  return {{"type", "maglev"},
          {"params", params_to_json(s.nominal, plants::maglev_param_fields())},
          {"smc", smc},
          {"r_max", to_json(s.r_max)},
          {"r_center", to_json(s.r_center)},
          {"clamp_nonnegative_forces", s.clamp_nonnegative_forces},
          {"references", references_to_json(s.references)}};
}

sim::FurutaSetup furuta_from(const Json& v, const std::string& path) {
  object(v, path, {"type", "params", "theta1_max", "lqr", "references"});
  sim::FurutaSetup s;
  if (const Json* p = member(v, "params"))
    s.nominal = params_from<plants::FurutaParams>(*p, child(path, "params"),
                                                  plants::furuta_param_fields());
  read(v, "theta1_max", path, s.theta1_max);
  if (const Json* l = member(v, "lqr")) {
    const std::string p = child(path, "lqr");
    object(*l, p, {"q_diagonal", "r"});
    read(*l, "q_diagonal", p, s.lqr.q_diagonal);
    read(*l, "r", p, s.lqr.r);
  }
  read_references(v, path, s.references);
  return s;
}

sim::MaglevSetup maglev_from(const Json& v, const std::string& path) {
  object(v, path,
         {"type", "params", "smc", "r_max", "r_center", "clamp_nonnegative_forces", "references"});
  sim::MaglevSetup s;
  if (const Json* p = member(v, "params"))
    s.nominal = params_from<plants::MaglevParams>(*p, child(path, "params"),
                                                  plants::maglev_param_fields());
  if (const Json* c = member(v, "smc")) {
    const std::string p = child(path, "smc");
    object(*c, p, {"lambda", "eta", "boundary_layer", "design_mass_scale", "gain"});
    read(*c, "lambda", p, s.smc.lambda);
    read(*c, "eta", p, s.smc.eta);
    read(*c, "boundary_layer", p, s.smc.boundary_layer);
    read(*c, "design_mass_scale", p, s.smc.design_mass_scale);
    if (const Json* g = member(*c, "gain"))
      s.smc.gain = Eigen::Vector3d(vector(*g, child(p, "gain"), 3));
  }
  read(v, "r_max", path, s.r_max);
  read(v, "r_center", path, s.r_center);
  read(v, "clamp_nonnegative_forces", path, s.clamp_nonnegative_forces);
  read_references(v, path, s.references);
  return s;
}

// Filter -------------------------------------------------------------------

Json filter_to_json(const sim::FilterConfig& f) {
  Json gains = Json::array();
  for (const auto& g : f.ecbf_gains) gains.push_back(to_json(g.transpose()));
  Json smcbf = Json::array();
  for (const auto& c : f.smcbf) {
    Json e = {{"lambda", c.lambda},
              {"eta", c.eta},
              {"boundary_layer", c.boundary_layer},
              {"h_desired", c.h_desired},
              {"delta_max", c.delta_max}};
    if (c.switching_gain) e["switching_gain"] = *c.switching_gain;
    smcbf.push_back(e);
  }
  return {{"mode", std::string(sim::to_string(f.mode))}, {"ecbf_gains", gains}, {"smcbf", smcbf}};
}

sim::FilterConfig filter_from(const Json& v, const std::string& path) {
  object(v, path, {"mode", "ecbf_gains", "smcbf"});
  sim::FilterConfig f;
  std::string mode = "none";
  read(v, "mode", path, mode);
  try {
    f.mode = sim::filter_mode_from_string(mode);
  } catch (const std::invalid_argument&) {
    fail(child(path, "mode"), "must be one of none, ecbf, smcbf");
  }
  if (const Json* g = member(v, "ecbf_gains")) {
    const std::string p = child(path, "ecbf_gains");
    if (!g->is_array()) fail(p, "must be an array");
    for (std::size_t i = 0; i < g->size(); ++i)
      f.ecbf_gains.push_back(vector((*g)[i], child(p, i)).transpose());
  }
  if (const Json* c = member(v, "smcbf")) {
    const std::string p = child(path, "smcbf");
    if (!c->is_array()) fail(p, "must be an array");
    for (std::size_t i = 0; i < c->size(); ++i) {
      const std::string q = child(p, i);
      const Json& e = object((*c)[i], q,
                             {"lambda", "eta", "boundary_layer", "h_desired", "delta_max",
                              "switching_gain"});
      sim::SmcbfConfig cfg;
      read(e, "lambda", q, cfg.lambda);
      read(e, "eta", q, cfg.eta);
      read(e, "boundary_layer", q, cfg.boundary_layer);
      read(e, "h_desired", q, cfg.h_desired);
      read(e, "delta_max", q, cfg.delta_max);
      if (const Json* k = member(e, "switching_gain"))
        cfg.switching_gain = number(*k, child(q, "switching_gain"));
      f.smcbf.push_back(cfg);
    }
  }
  return f;
}

}  // namespace

Json scenario_to_json(const sim::Scenario& s) {
  Json perturbation = Json::object();
  for (const auto& [name, scale] : s.perturbation) perturbation[name] = scale;
  return {{"name", s.name},
          {"plant", std::visit([](const auto& p) { return plant_to_json(p); }, s.plant)},
          {"perturbation", perturbation},
          {"filter", filter_to_json(s.filter)},
          {"initial_state", to_json(s.initial_state)},
          {"dt", s.dt},
          {"duration", s.duration},
          {"barrier_enable_time", s.barrier_enable_time},
          {"qp",
           {{"tolerance", s.qp.tolerance},
            {"max_iterations", s.qp.max_iterations},
            {"divergence_threshold", s.qp.divergence_threshold}}},
          {"promises_safety", s.promises_safety}};
}

sim::Scenario scenario_from_json(const Json& doc) {
  const std::string root;
  object(doc, root,
         {"name", "plant", "perturbation", "filter", "initial_state", "dt", "duration",
          "barrier_enable_time", "qp", "promises_safety"});
  sim::Scenario s;
  read(doc, "name", root, s.name);

  const Json& plant = required(doc, "plant", root);
  if (!plant.is_object()) fail("/plant", "must be an object");
  std::string type;
  read(plant, "type", "/plant", type);
  if (type == "furuta") {
    s.plant = furuta_from(plant, "/plant");
  } else if (type == "maglev") {
    s.plant = maglev_from(plant, "/plant");
  } else {
    fail("/plant/type", "must be furuta or maglev");
  }

  if (const Json* p = member(doc, "perturbation")) {
    if (!p->is_object()) fail("/perturbation", "must be an object");
    for (const auto& [name, scale] : p->items())
      s.perturbation[name] = number(scale, child("/perturbation", name));
  }
  if (const Json* f = member(doc, "filter")) s.filter = filter_from(*f, "/filter");
  s.initial_state = vector(required(doc, "initial_state", root), "/initial_state");
  read(doc, "dt", root, s.dt);
  read(doc, "duration", root, s.duration);
  read(doc, "barrier_enable_time", root, s.barrier_enable_time);
  if (const Json* q = member(doc, "qp")) {
    object(*q, "/qp", {"tolerance", "max_iterations", "divergence_threshold"});
    read(*q, "tolerance", "/qp", s.qp.tolerance);
    read(*q, "max_iterations", "/qp", s.qp.max_iterations);
    read(*q, "divergence_threshold", "/qp", s.qp.divergence_threshold);
  }
  read(doc, "promises_safety", root, s.promises_safety);

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return s;
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                      ": JSON syntax error");
  }
  try {
    if (doc.is_object() && doc.contains("scenario") && doc.contains("artifacts"))
      return scenario_from_json(doc["scenario"]);
    return scenario_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace smcbf::app
