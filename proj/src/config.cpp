#include "phasecon/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace phasecon {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Setter {
  std::function<void(ExperimentConfig&, const std::string&)> apply;
};

[[noreturn]] void value_error(const std::string& where, const std::string& key,
                              const std::string& value, const char* expected) {
  throw ConfigError(where + ": key '" + key + "': cannot parse '" + value + "' as " +
                    expected);
}

double parse_double(const std::string& where, const std::string& key,
                    const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) value_error(where, key, value, "a number");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    value_error(where, key, value, "a number");
  }
}

int parse_int(const std::string& where, const std::string& key,
              const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) value_error(where, key, value, "an integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    value_error(where, key, value, "an integer");
  }
}

bool parse_bool(const std::string& where, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  value_error(where, key, value, "a boolean (true/false)");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto str = [&t](const char* key, std::string ExperimentConfig::* field) {
      t[key] = {[field](ExperimentConfig& c, const std::string& v) { c.*field = v; }};
    };
    auto dbl = [&t](const char* key, double ExperimentConfig::* field) {
      t[key] = {[key = std::string(key), field](ExperimentConfig& c, const std::string& v) {
        c.*field = parse_double("", key, v);
      }};
    };
    auto integer = [&t](const char* key, int ExperimentConfig::* field) {
      t[key] = {[key = std::string(key), field](ExperimentConfig& c, const std::string& v) {
        c.*field = parse_int("", key, v);
      }};
    };
    auto boolean = [&t](const char* key, bool ExperimentConfig::* field) {
      t[key] = {[key = std::string(key), field](ExperimentConfig& c, const std::string& v) {
        c.*field = parse_bool("", key, v);
      }};
    };
    str("kind", &ExperimentConfig::kind);
    integer("n", &ExperimentConfig::n);
    dbl("domain_side", &ExperimentConfig::domain_side);
    dbl("domain_origin_x", &ExperimentConfig::domain_origin_x);
    dbl("domain_origin_y", &ExperimentConfig::domain_origin_y);
    dbl("epsilon", &ExperimentConfig::epsilon);
    dbl("lambda", &ExperimentConfig::lambda);
    dbl("h0", &ExperimentConfig::h0);
    dbl("eta", &ExperimentConfig::eta);
    str("well", &ExperimentConfig::well);
    dbl("sigma", &ExperimentConfig::sigma);
    dbl("alpha", &ExperimentConfig::alpha);
    dbl("beta", &ExperimentConfig::beta);
    dbl("a", &ExperimentConfig::a);
    integer("p", &ExperimentConfig::p);
    boolean("band_minus", &ExperimentConfig::band_minus);
    dbl("alpha_minus", &ExperimentConfig::alpha_minus);
    dbl("beta_minus", &ExperimentConfig::beta_minus);
    dbl("tau", &ExperimentConfig::tau);
    dbl("tau_init", &ExperimentConfig::tau_init);
    integer("warmup_steps", &ExperimentConfig::warmup_steps);
    integer("max_steps", &ExperimentConfig::max_steps);
    dbl("theta_stop", &ExperimentConfig::theta_stop);
    dbl("solver_tol", &ExperimentConfig::solver_tol);
    integer("solver_max_iter", &ExperimentConfig::solver_max_iter);
    integer("log_every", &ExperimentConfig::log_every);
    integer("snapshot_every", &ExperimentConfig::snapshot_every);
    str("image", &ExperimentConfig::image);
    dbl("disk_radius", &ExperimentConfig::disk_radius);
    dbl("disk_center_distance", &ExperimentConfig::disk_center_distance);
    dbl("image_smooth_width", &ExperimentConfig::image_smooth_width);
    str("image_file", &ExperimentConfig::image_file);
    str("initial", &ExperimentConfig::initial);
    dbl("flower_base_radius", &ExperimentConfig::flower_base_radius);
    dbl("flower_petal_amplitude", &ExperimentConfig::flower_petal_amplitude);
    integer("flower_petal_count", &ExperimentConfig::flower_petal_count);
    dbl("initial_smooth_width", &ExperimentConfig::initial_smooth_width);
    dbl("dumbbell_bulb_radius", &ExperimentConfig::dumbbell_bulb_radius);
    dbl("dumbbell_center_distance", &ExperimentConfig::dumbbell_center_distance);
    dbl("dumbbell_neck_half_width", &ExperimentConfig::dumbbell_neck_half_width);
    str("initial_file", &ExperimentConfig::initial_file);
    str("field_file", &ExperimentConfig::field_file);
    str("out_dir", &ExperimentConfig::out_dir);
    t["seed"] = {[](ExperimentConfig& c, const std::string& v) {
      c.seed = static_cast<unsigned>(parse_int("", "seed", v));
    }};
    return t;
  }();
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& message) { throw ConfigError("config: " + message); };
  if (kind != "segmentation" && kind != "curvature-flow" && kind != "penalty-probe" &&
      kind != "mesh-info") {
    fail("unknown kind '" + kind + "'");
  }
  if (n < 1) fail("n must be >= 1");
  if (!(domain_side > 0.0)) fail("domain_side must be positive");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (lambda < 0.0) fail("lambda must be >= 0");
  if (eta < 0.0) fail("eta must be >= 0");
  if (well != "shifted" && well != "symmetric") fail("well must be shifted or symmetric");
  if (sigma != 1.0 && sigma != -1.0) fail("sigma must be +1 or -1");
  if (!(alpha < beta)) fail("alpha must be < beta");
  if (band_minus && !(alpha_minus < beta_minus)) fail("alpha_minus must be < beta_minus");
  if (a < 0.0) fail("a must be >= 0");
  if (p != 0 && p != 1) fail("p must be 0 or 1");
  if (!(tau > 0.0)) fail("tau must be positive");
  if (warmup_steps < 0) fail("warmup_steps must be >= 0");
  if (max_steps < 1) fail("max_steps must be >= 1");
  if (!(theta_stop > 0.0)) fail("theta_stop must be positive");
  if (!(solver_tol > 0.0)) fail("solver_tol must be positive");
  if (solver_max_iter < 1) fail("solver_max_iter must be >= 1");
  if (log_every < 1) fail("log_every must be >= 1");
  if (kind == "curvature-flow" && well != "symmetric") {
    fail("curvature-flow requires well = symmetric");
  }
  if (kind == "segmentation") {
    if (image != "disks" && image != "file") fail("image must be disks or file");
    if (image == "file" && image_file.empty()) fail("image = file requires image_file");
    if (initial != "flower" && initial != "dumbbell" && initial != "image" &&
        initial != "file") {
      fail("initial must be flower, dumbbell, image, or file");
    }
    if (initial == "file" && initial_file.empty()) fail("initial = file requires initial_file");
  }
  if (kind == "penalty-probe" && field_file.empty()) {
    fail("penalty-probe requires field_file");
  }
}

ExperimentConfig parse_config_text(std::string_view text, const std::string& name,
                                   ExperimentConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::map<std::string, int> key_lines;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError(where + ": empty value for key '" + key + "'");
    try {
      it->second.apply(base, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
    key_lines[key] = line_no;
  }
  try {
    base.validate();
  } catch (const ConfigError& e) {
    // Point at the line that assigned the offending key when possible.
    std::string message = e.what();
    std::string key = message;
    const auto prefix = key.find("config: ");
    if (prefix != std::string::npos) key = key.substr(prefix + 8);
    key = key.substr(0, key.find(' '));
    const auto line_it = key_lines.find(key);
    if (line_it != key_lines.end()) {
      message += " (" + key + " set at line " + std::to_string(line_it->second) + ")";
    }
    throw ConfigError(name + ": " + message);
  }
  return base;
}

ExperimentConfig parse_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path, std::move(base));
}

void apply_preset(ExperimentConfig& cfg, const std::string& preset) {
  if (preset == "table1-large" || preset == "table1-small") {
    cfg.kind = "segmentation";
    cfg.n = 128;
    cfg.epsilon = 1e-2;
    cfg.eta = 10.5;
    cfg.lambda = 0.0;
    cfg.h0 = 0.0;
    cfg.well = "shifted";
    cfg.alpha = 0.9;
    cfg.beta = 1.2;
    cfg.a = 0.4;
    cfg.p = 0;
    cfg.band_minus = false;
    cfg.image = "disks";
    cfg.disk_radius = preset == "table1-large" ? 0.16 : 0.11;
    cfg.disk_center_distance = 0.6;
    cfg.image_smooth_width = 0.0;
    cfg.initial = "flower";
    cfg.flower_base_radius = 0.25;
    cfg.flower_petal_amplitude = 0.15;
    cfg.flower_petal_count = 5;
    cfg.initial_smooth_width = 0.0;
    cfg.tau = 5e-7;
    cfg.tau_init = 0.0;
    cfg.warmup_steps = 500;
    cfg.max_steps = 60000;
    cfg.theta_stop = 1e-4;
    cfg.snapshot_every = 5000;
  } else if (preset == "dumbbell2d") {
    cfg.kind = "curvature-flow";
    cfg.n = 128;
    cfg.epsilon = 0.03;
    cfg.lambda = 0.1;
    cfg.h0 = 6.0;
    cfg.eta = 0.0;
    cfg.well = "symmetric";
    cfg.alpha = 0.85;
    cfg.beta = 0.95;
    cfg.a = 60.0;
    cfg.p = 1;
    cfg.band_minus = true;
    cfg.alpha_minus = -0.95;
    cfg.beta_minus = -0.85;
    cfg.initial = "dumbbell";
    cfg.dumbbell_bulb_radius = 0.17;
    cfg.dumbbell_center_distance = 0.42;
    cfg.dumbbell_neck_half_width = 0.06;
    cfg.tau = 2e-7;
    cfg.tau_init = 0.0;
    cfg.warmup_steps = 500;
    cfg.max_steps = 8000;
    cfg.theta_stop = 1e-4;
    cfg.snapshot_every = 100;
  } else {
    throw ConfigError("unknown preset '" + preset +
                      "' (expected table1-large, table1-small, or dumbbell2d)");
  }
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "kind = " << c.kind << '\n';
  out << "n = " << c.n << '\n';
  out << "domain_side = " << format_double(c.domain_side) << '\n';
  out << "domain_origin_x = " << format_double(c.domain_origin_x) << '\n';
  out << "domain_origin_y = " << format_double(c.domain_origin_y) << '\n';
  out << "epsilon = " << format_double(c.epsilon) << '\n';
  out << "lambda = " << format_double(c.lambda) << '\n';
  out << "h0 = " << format_double(c.h0) << '\n';
  out << "eta = " << format_double(c.eta) << '\n';
  out << "well = " << c.well << '\n';
  out << "sigma = " << format_double(c.sigma) << '\n';
  out << "alpha = " << format_double(c.alpha) << '\n';
  out << "beta = " << format_double(c.beta) << '\n';
  out << "a = " << format_double(c.a) << '\n';
  out << "p = " << c.p << '\n';
  out << "band_minus = " << (c.band_minus ? "true" : "false") << '\n';
  out << "alpha_minus = " << format_double(c.alpha_minus) << '\n';
  out << "beta_minus = " << format_double(c.beta_minus) << '\n';
  out << "tau = " << format_double(c.tau) << '\n';
  out << "tau_init = " << format_double(c.tau_init) << '\n';
  out << "warmup_steps = " << c.warmup_steps << '\n';
  out << "max_steps = " << c.max_steps << '\n';
  out << "theta_stop = " << format_double(c.theta_stop) << '\n';
  out << "solver_tol = " << format_double(c.solver_tol) << '\n';
  out << "solver_max_iter = " << c.solver_max_iter << '\n';
  out << "log_every = " << c.log_every << '\n';
  out << "snapshot_every = " << c.snapshot_every << '\n';
  out << "image = " << c.image << '\n';
  out << "disk_radius = " << format_double(c.disk_radius) << '\n';
  out << "disk_center_distance = " << format_double(c.disk_center_distance) << '\n';
  out << "image_smooth_width = " << format_double(c.image_smooth_width) << '\n';
  if (!c.image_file.empty()) out << "image_file = " << c.image_file << '\n';
  out << "initial = " << c.initial << '\n';
  out << "flower_base_radius = " << format_double(c.flower_base_radius) << '\n';
  out << "flower_petal_amplitude = " << format_double(c.flower_petal_amplitude) << '\n';
  out << "flower_petal_count = " << c.flower_petal_count << '\n';
  out << "initial_smooth_width = " << format_double(c.initial_smooth_width) << '\n';
  out << "dumbbell_bulb_radius = " << format_double(c.dumbbell_bulb_radius) << '\n';
  out << "dumbbell_center_distance = " << format_double(c.dumbbell_center_distance) << '\n';
  out << "dumbbell_neck_half_width = " << format_double(c.dumbbell_neck_half_width) << '\n';
  if (!c.initial_file.empty()) out << "initial_file = " << c.initial_file << '\n';
  if (!c.field_file.empty()) out << "field_file = " << c.field_file << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "seed = " << c.seed << '\n';
  return out.str();
}

}  // namespace phasecon
