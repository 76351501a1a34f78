#include "hapris/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "hapris/errors.hpp"
#include "json.hpp"

namespace hapris::cli {

using nlohmann::json;

namespace {

struct Source {
  std::string_view text;
  std::string_view name;
};

// Best-effort line of a field: follow the path's keys through the raw text.
std::size_t line_of(const Source& src, const std::string& path) {
  std::size_t pos = 0;
  std::size_t start = 1;
  while (start <= path.size()) {
    const std::size_t end = std::min(path.find('/', start), path.size());
    const std::string key = path.substr(start, end - start);
    start = end + 1;
    if (key.empty() || std::all_of(key.begin(), key.end(), ::isdigit)) continue;
    const std::size_t hit = src.text.find("\"" + key + "\"", pos);
    if (hit == std::string_view::npos) break;
    pos = hit;
  }
  return static_cast<std::size_t>(std::count(src.text.begin(), src.text.begin() + pos, '\n')) + 1;
}

[[noreturn]] void fail(const Source& src, const std::string& path, const std::string& msg) {
  throw ConfigError(std::string(src.name) + ":" + std::to_string(line_of(src, path)) + ": field " +
                    path + ": " + msg);
}

void require(bool ok, const Source& src, const std::string& path, const std::string& msg) {
  if (!ok) fail(src, path, msg);
}

void check_keys(const json& obj, const Source& src, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  require(obj.is_object(), src, path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(src, path + "/" + key, "unknown field");
    }
  }
}

void read_number(const json& obj, std::string_view key, const Source& src, const std::string& path,
                 double& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string p = path + "/" + std::string(key);
  require(it->is_number(), src, p, "expected a number");
  out = it->get<double>();
  require(std::isfinite(out), src, p, "must be finite");
}

void read_positive(const json& obj, std::string_view key, const Source& src, const std::string& path,
                   double& out) {
  read_number(obj, key, src, path, out);
  require(out > 0.0, src, path + "/" + std::string(key), "must be > 0");
}

void read_bool(const json& obj, std::string_view key, const Source& src, const std::string& path,
               bool& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  require(it->is_boolean(), src, path + "/" + std::string(key), "expected true or false");
  out = it->get<bool>();
}

std::uint64_t read_unsigned(const json& v, const Source& src, const std::string& path) {
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), src, path,
          "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string read_string(const json& v, const Source& src, const std::string& path) {
  require(v.is_string(), src, path, "expected a string");
  return v.get<std::string>();
}

fading::KappaMuParams read_kappa_mu(const json& obj, const Source& src, const std::string& path,
                                    fading::KappaMuParams current) {
  check_keys(obj, src, path, {"kappa", "mu"});
  double kappa = current.kappa();
  double mu = current.mu();
  read_number(obj, "kappa", src, path, kappa);
  read_number(obj, "mu", src, path, mu);
  require(kappa >= 0.0, src, path + "/kappa", "must be >= 0");
  require(mu > 0.0, src, path + "/mu", "must be > 0");
  return fading::KappaMuParams(kappa, mu);
}

geometry::SizeDistribution read_size_law(const json& obj, const Source& src, const std::string& path,
                                         geometry::SizeDistribution current) {
  check_keys(obj, src, path, {"law", "spread"});
  if (const auto it = obj.find("law"); it != obj.end()) {
    const std::string law = read_string(*it, src, path + "/law");
    if (law == "point") {
      current.law = geometry::SizeLaw::point;
    } else if (law == "uniform") {
      current.law = geometry::SizeLaw::uniform;
    } else if (law == "exponential") {
      current.law = geometry::SizeLaw::exponential;
    } else {
      fail(src, path + "/law", "expected point, uniform or exponential");
    }
  }
  read_number(obj, "spread", src, path, current.spread);
  require(current.spread >= 0.0 && current.spread < 1.0, src, path + "/spread", "must be in [0, 1)");
  return current;
}

SweepSpec read_sweep(const json& obj, const Source& src) {
  const std::string path = "/sweep";
  check_keys(obj, src, path, {"parameter", "grid", "start", "stop", "step"});
  const auto param = obj.find("parameter");
  require(param != obj.end(), src, path, "missing field 'parameter'");
  SweepSpec spec;
  const auto p = parse_sweep_param(read_string(*param, src, path + "/parameter"));
  require(p.has_value(), src, path + "/parameter", "expected rho_th_db, rho0_db, mu_ris or h_ris");
  spec.parameter = *p;

  const bool has_grid = obj.contains("grid");
  const bool has_range = obj.contains("start") || obj.contains("stop") || obj.contains("step");
  require(has_grid != has_range, src, path, "give either 'grid' or 'start'/'stop'/'step'");
  if (has_grid) {
    const json& g = obj.at("grid");
    require(g.is_array(), src, path + "/grid", "expected an array of numbers");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string ip = path + "/grid/" + std::to_string(i);
      require(g[i].is_number(), src, ip, "expected a number");
      spec.grid.push_back(g[i].get<double>());
    }
  } else {
    for (const char* k : {"start", "stop", "step"}) {
      require(obj.contains(k), src, path, std::string("missing field '") + k + "'");
    }
    double start = 0, stop = 0, step = 0;
    read_number(obj, "start", src, path, start);
    read_number(obj, "stop", src, path, stop);
    read_positive(obj, "step", src, path, step);
    require(stop >= start, src, path + "/stop", "must be >= start");
    spec.grid = linear_grid(start, stop, step);
  }
  require(!spec.grid.empty(), src, path + "/grid", "grid is empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    require(spec.grid[i] > spec.grid[i - 1], src, path + "/grid/" + std::to_string(i),
            "grid must be strictly ascending");
  }
  if (spec.parameter == SweepParam::mu_ris || spec.parameter == SweepParam::h_ris) {
    require(spec.grid.front() > 0.0, src, path + "/grid/0", "must be > 0");
  }
  return spec;
}

}  // namespace

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::rho_th_db: return "rho_th_db";
    case SweepParam::rho0_db: return "rho0_db";
    case SweepParam::mu_ris: return "mu_ris";
    case SweepParam::h_ris: return "h_ris";
  }
  return "";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::mc: return "mc";
    case Mode::both: return "both";
  }
  return "";
}

std::string_view to_string(geometry::Visibility v) {
  return v == geometry::Visibility::independent ? "independent" : "explicit";
}

std::optional<SweepParam> parse_sweep_param(std::string_view s) {
  for (SweepParam p : {SweepParam::rho_th_db, SweepParam::rho0_db, SweepParam::mu_ris, SweepParam::h_ris}) {
    if (s == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::analytic, Mode::mc, Mode::both}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<geometry::Visibility> parse_visibility(std::string_view s) {
  if (s == "independent") return geometry::Visibility::independent;
  if (s == "explicit") return geometry::Visibility::explicit_scene;
  return std::nullopt;
}

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.system = analytic::urban_defaults(100);
  return cfg;
}

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
  const Source src{text, source};
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto before = text.substr(0, byte > 0 ? byte - 1 : 0);
    const std::size_t line = static_cast<std::size_t>(std::count(before.begin(), before.end(), '\n')) + 1;
    const std::size_t nl = before.rfind('\n');
    const std::size_t col = nl == std::string_view::npos ? before.size() + 1 : before.size() - nl;
    throw ConfigError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error");
  }

  ScenarioConfig cfg = default_config();
  auto& sys = cfg.system;
  check_keys(root, src, "",
             {"deployment", "buildings", "fading", "direct_link", "num_elements", "pathloss",
              "link_budget", "sweep", "rho_th_db", "monte_carlo", "mode", "output"});

  if (const auto it = root.find("deployment"); it != root.end()) {
    const std::string p = "/deployment";
    check_keys(*it, src, p, {"lambda_hap", "mu_ris", "h_hap", "h_ris", "h_min"});
    auto& d = sys.deployment;
    read_positive(*it, "lambda_hap", src, p, d.lambda_hap);
    read_positive(*it, "mu_ris", src, p, d.mu_ris);
    read_positive(*it, "h_hap", src, p, d.h_hap);
    read_positive(*it, "h_ris", src, p, d.h_ris);
    require(d.h_hap > d.h_ris, src, p + "/h_hap", "must exceed h_ris");
    if (const auto hm = it->find("h_min"); hm != it->end() && !hm->is_null()) {
      double h = 0.0;
      read_number(*it, "h_min", src, p, h);
      require(h >= 0.0, src, p + "/h_min", "must be >= 0");
      d.h_min = h;
    }
  }

  if (const auto it = root.find("buildings"); it != root.end()) {
    const std::string p = "/buildings";
    check_keys(*it, src, p, {"lambda_b", "mean_length", "mean_width", "length_law", "width_law"});
    auto b = sys.buildings.blockage;
    read_number(*it, "lambda_b", src, p, b.lambda_b);
    require(b.lambda_b >= 0.0, src, p + "/lambda_b", "must be >= 0");
    read_positive(*it, "mean_length", src, p, b.mean_length);
    read_positive(*it, "mean_width", src, p, b.mean_width);
    sys.buildings.blockage = geometry::BlockageParams::from_buildings(b.lambda_b, b.mean_length, b.mean_width);
    if (const auto l = it->find("length_law"); l != it->end()) {
      sys.buildings.length_law = read_size_law(*l, src, p + "/length_law", sys.buildings.length_law);
    }
    if (const auto w = it->find("width_law"); w != it->end()) {
      sys.buildings.width_law = read_size_law(*w, src, p + "/width_law", sys.buildings.width_law);
    }
  }

  if (const auto it = root.find("fading"); it != root.end()) {
    const std::string p = "/fading";
    check_keys(*it, src, p, {"hap_ris", "ris_user", "direct"});
    if (const auto f = it->find("hap_ris"); f != it->end()) {
      sys.cascade.hap_ris = read_kappa_mu(*f, src, p + "/hap_ris", sys.cascade.hap_ris);
    }
    if (const auto f = it->find("ris_user"); f != it->end()) {
      sys.cascade.ris_user = read_kappa_mu(*f, src, p + "/ris_user", sys.cascade.ris_user);
    }
    if (const auto f = it->find("direct"); f != it->end()) {
      sys.direct = read_kappa_mu(*f, src, p + "/direct", sys.direct);
    }
  }

  read_bool(root, "direct_link", src, "", sys.direct_link);

  if (const auto it = root.find("num_elements"); it != root.end()) {
    const std::string p = "/num_elements";
    require(it->is_array() && !it->empty(), src, p, "expected a nonempty array of integers");
    cfg.num_elements.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::uint64_t v = read_unsigned((*it)[i], src, p + "/" + std::to_string(i));
      require(v <= 1000000, src, p + "/" + std::to_string(i), "must be <= 1000000");
      cfg.num_elements.push_back(static_cast<int>(v));
    }
  }

  if (const auto it = root.find("pathloss"); it != root.end()) {
    const std::string p = "/pathloss";
    check_keys(*it, src, p, {"hap_ris", "ris_user", "hap_user"});
    read_number(*it, "hap_ris", src, p, sys.pathloss.hap_ris);
    read_number(*it, "ris_user", src, p, sys.pathloss.ris_user);
    read_number(*it, "hap_user", src, p, sys.pathloss.hap_user);
    for (const char* k : {"hap_ris", "ris_user", "hap_user"}) {
      const double v = k == std::string_view("hap_ris")    ? sys.pathloss.hap_ris
                       : k == std::string_view("ris_user") ? sys.pathloss.ris_user
                                                           : sys.pathloss.hap_user;
      require(v >= 2.0, src, p + "/" + k, "must be >= 2");
    }
  }

  if (const auto it = root.find("link_budget"); it != root.end()) {
    const std::string p = "/link_budget";
    check_keys(*it, src, p, {"tx_power_w", "noise_power_dbm"});
    read_positive(*it, "tx_power_w", src, p, sys.tx_power_w);
    double dbm = analytic::linear_to_db(sys.noise_power_w) + 30.0;
    if (it->contains("noise_power_dbm")) {
      read_number(*it, "noise_power_dbm", src, p, dbm);
      sys.noise_power_w = analytic::dbm_to_watts(dbm);
    }
  }

  if (const auto it = root.find("sweep"); it != root.end() && !it->is_null()) cfg.sweep = read_sweep(*it, src);
  read_number(root, "rho_th_db", src, "", cfg.rho_th_db);

  if (const auto it = root.find("monte_carlo"); it != root.end()) {
    const std::string p = "/monte_carlo";
    check_keys(*it, src, p, {"trials", "seed", "visibility", "window_radius", "threads"});
    if (const auto t = it->find("trials"); t != it->end()) {
      cfg.mc.num_trials = read_unsigned(*t, src, p + "/trials");
      require(cfg.mc.num_trials >= 1, src, p + "/trials", "must be >= 1");
    }
    if (const auto s = it->find("seed"); s != it->end()) cfg.mc.seed = read_unsigned(*s, src, p + "/seed");
    if (const auto v = it->find("visibility"); v != it->end()) {
      const auto vis = parse_visibility(read_string(*v, src, p + "/visibility"));
      require(vis.has_value(), src, p + "/visibility", "expected independent or explicit");
      cfg.mc.visibility = *vis;
    }
    if (const auto w = it->find("window_radius"); w != it->end() && !w->is_null()) {
      double r = 0.0;
      read_positive(*it, "window_radius", src, p, r);
      cfg.mc.window_radius = r;
    }
    if (const auto t = it->find("threads"); t != it->end()) {
      const std::uint64_t n = read_unsigned(*t, src, p + "/threads");
      require(n <= 4096, src, p + "/threads", "must be <= 4096");
      cfg.mc.threads = static_cast<unsigned>(n);
    }
  }

  if (const auto it = root.find("mode"); it != root.end()) {
    const auto m = parse_mode(read_string(*it, src, "/mode"));
    require(m.has_value(), src, "/mode", "expected analytic, mc or both");
    cfg.mode = *m;
  }

  if (const auto it = root.find("output"); it != root.end()) {
    const std::string p = "/output";
    check_keys(*it, src, p, {"path", "format"});
    if (const auto o = it->find("path"); o != it->end() && !o->is_null()) {
      cfg.out_path = read_string(*o, src, p + "/path");
    }
    if (const auto f = it->find("format"); f != it->end()) {
      const auto fmt = parse_format(read_string(*f, src, p + "/format"));
      require(fmt.has_value(), src, p + "/format", "expected csv or json");
      cfg.format = *fmt;
    }
  }

  try {
    sys.validate();
    cfg.mc.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string canonical_json(const ScenarioConfig& cfg) {
  const auto& s = cfg.system;
  const auto& d = s.deployment;
  const auto& b = s.buildings;
  auto km = [](const fading::KappaMuParams& p) { return json{{"kappa", p.kappa()}, {"mu", p.mu()}}; };
  auto law = [](const geometry::SizeDistribution& l) {
    const char* name = l.law == geometry::SizeLaw::point     ? "point"
                       : l.law == geometry::SizeLaw::uniform ? "uniform"
                                                             : "exponential";
    return json{{"law", name}, {"spread", l.spread}};
  };
  json j;
  j["deployment"] = {{"lambda_hap", d.lambda_hap}, {"mu_ris", d.mu_ris}, {"h_hap", d.h_hap},
                     {"h_ris", d.h_ris}, {"h_min", d.h_min ? json(*d.h_min) : json(nullptr)}};
  j["buildings"] = {{"lambda_b", b.blockage.lambda_b}, {"mean_length", b.blockage.mean_length},
                    {"mean_width", b.blockage.mean_width}, {"length_law", law(b.length_law)},
                    {"width_law", law(b.width_law)}};
  j["fading"] = {{"hap_ris", km(s.cascade.hap_ris)}, {"ris_user", km(s.cascade.ris_user)},
                 {"direct", km(s.direct)}};
  j["direct_link"] = s.direct_link;
  j["num_elements"] = cfg.num_elements;
  j["pathloss"] = {{"hap_ris", s.pathloss.hap_ris}, {"ris_user", s.pathloss.ris_user},
                   {"hap_user", s.pathloss.hap_user}};
  j["link_budget"] = {{"tx_power_w", s.tx_power_w}, {"noise_power_w", s.noise_power_w}};
  j["sweep"] = cfg.sweep ? json{{"parameter", to_string(cfg.sweep->parameter)}, {"grid", cfg.sweep->grid}}
                         : json(nullptr);
  j["rho_th_db"] = cfg.rho_th_db;
  j["monte_carlo"] = {{"trials", cfg.mc.num_trials}, {"seed", cfg.mc.seed},
                      {"visibility", to_string(cfg.mc.visibility)},
                      {"window_radius", cfg.mc.window_radius ? json(*cfg.mc.window_radius) : json(nullptr)}};
  j["mode"] = to_string(cfg.mode);
  return j.dump();
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> linear_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) throw DomainError("linear_grid needs step > 0 and stop >= start");
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = start + static_cast<double>(i) * step;
  return g;
}

}  // namespace hapris::cli
