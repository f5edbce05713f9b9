#include "parityscope/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "parityscope/errors.hpp"

namespace parityscope {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError(join(path, key), "unknown key");
  }
}

template <class T>
T read(const json& obj, const std::string& path, const char* key, T fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) throw ValidationError(join(path, key), "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ValidationError(join(path, key), "expected an integer");
    }
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(join(path, key), e.what());
  }
}

template <class T>
T require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ValidationError(join(path, key), "required key missing");
  return read<T>(obj, path, key, T{});
}

StateKind parse_kind(const std::string& text, const std::string& path) {
  if (text == "vacuum") return StateKind::Vacuum;
  if (text == "coherent") return StateKind::Coherent;
  if (text == "fock") return StateKind::Fock;
  if (text == "phase_diffused") return StateKind::PhaseDiffused;
  if (text == "mixture") return StateKind::Mixture;
  throw ValidationError(path, "unknown state kind '" + text + "'");
}

const char* kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::Vacuum: return "vacuum";
    case StateKind::Coherent: return "coherent";
    case StateKind::Fock: return "fock";
    case StateKind::PhaseDiffused: return "phase_diffused";
    case StateKind::Mixture: return "mixture";
  }
  return "vacuum";
}

StateSpec parse_state(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  StateSpec s;
  s.kind = parse_kind(require<std::string>(j, path, "kind"), join(path, "kind"));
  switch (s.kind) {
    case StateKind::Vacuum:
      reject_unknown(j, path, {"kind"});
      break;
    case StateKind::Coherent:
      reject_unknown(j, path, {"kind", "re", "im"});
      s.alpha = {read<double>(j, path, "re", 0.0), read<double>(j, path, "im", 0.0)};
      if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag()))
        throw ValidationError(join(path, "re"), "amplitude must be finite");
      break;
    case StateKind::Fock:
      reject_unknown(j, path, {"kind", "n"});
      s.photons = require<int>(j, path, "n");
      if (s.photons < 0) throw ValidationError(join(path, "n"), "must be >= 0");
      break;
    case StateKind::PhaseDiffused: {
      reject_unknown(j, path, {"kind", "magnitude", "center_phase", "modulation_amplitude", "nodes"});
      s.magnitude = require<double>(j, path, "magnitude");
      if (!(s.magnitude >= 0.0)) throw ValidationError(join(path, "magnitude"), "must be >= 0");
      s.diffusion.center_phase = read<double>(j, path, "center_phase", 0.0);
      s.diffusion.modulation_amplitude = read<double>(j, path, "modulation_amplitude", 0.8);
      s.diffusion.nodes = read<int>(j, path, "nodes", 64);
      if (!(s.diffusion.modulation_amplitude > 0.0 &&
            s.diffusion.modulation_amplitude <= std::numbers::pi))
        throw ValidationError(join(path, "modulation_amplitude"), "must lie in (0, pi]");
      if (s.diffusion.nodes < 3) throw ValidationError(join(path, "nodes"), "must be >= 3");
      break;
    }
    case StateKind::Mixture: {
      reject_unknown(j, path, {"kind", "components"});
      const auto it = j.find("components");
      const std::string cpath = join(path, "components");
      if (it == j.end() || !it->is_array() || it->empty())
        throw ValidationError(cpath, "expected a non-empty array");
      double total = 0.0;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string ipath = cpath + "[" + std::to_string(i) + "]";
        const json& c = (*it)[i];
        reject_unknown(c, ipath, {"weight", "state"});
        MixtureComponent mc;
        mc.weight = require<double>(c, ipath, "weight");
        if (!(mc.weight >= 0.0)) throw ValidationError(join(ipath, "weight"), "must be >= 0");
        if (!c.contains("state")) throw ValidationError(join(ipath, "state"), "required key missing");
        mc.state = std::make_shared<const StateSpec>(parse_state(c.at("state"), join(ipath, "state")));
        total += mc.weight;
        s.components.push_back(std::move(mc));
      }
      if (std::abs(total - 1.0) > 1e-12) throw ValidationError(cpath, "weights must sum to 1");
      break;
    }
  }
  return s;
}

json state_to_json(const StateSpec& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  switch (s.kind) {
    case StateKind::Vacuum: break;
    case StateKind::Coherent:
      j["re"] = s.alpha.real();
      j["im"] = s.alpha.imag();
      break;
    case StateKind::Fock: j["n"] = s.photons; break;
    case StateKind::PhaseDiffused:
      j["magnitude"] = s.magnitude;
      j["center_phase"] = s.diffusion.center_phase;
      j["modulation_amplitude"] = s.diffusion.modulation_amplitude;
      j["nodes"] = s.diffusion.nodes;
      break;
    case StateKind::Mixture: {
      json arr = json::array();
      for (const auto& c : s.components) arr.push_back({{"weight", c.weight}, {"state", state_to_json(*c.state)}});
      j["components"] = std::move(arr);
      break;
    }
  }
  return j;
}

void check_unit(double v, const std::string& field) {
  if (!(v > 0.0 && v <= 1.0)) throw ValidationError(field, "must lie in (0, 1], got " + std::to_string(v));
}

}  // namespace

DensityMatrix build_state(const StateSpec& spec, const TruncationPolicy& policy) {
  switch (spec.kind) {
    case StateKind::Vacuum: return vacuum(policy);
    case StateKind::Coherent: return coherent(spec.alpha, policy);
    case StateKind::Fock: return fock(spec.photons, policy);
    case StateKind::PhaseDiffused: return phase_diffused_coherent(spec.magnitude, spec.diffusion, policy);
    case StateKind::Mixture: {
      std::vector<std::pair<double, DensityMatrix>> parts;
      for (const auto& c : spec.components) parts.emplace_back(c.weight, build_state(*c.state, policy));
      return mixture(parts);
    }
  }
  throw DomainError("unknown state kind");
}

ScanGrid GridSpec::grid() const {
  if (!radial_levels.empty() || !phases.empty()) return ScanGrid{radial_levels, phases};
  return ScanGrid::uniform_amplitude(n_radial, n_phase, max_n_vac);
}

std::string_view to_string(SurfaceFormat f) {
  switch (f) {
    case SurfaceFormat::Csv: return "csv";
    case SurfaceFormat::Json: return "json";
    case SurfaceFormat::Matrix: return "matrix";
  }
  return "csv";
}

SurfaceFormat parse_surface_format(std::string_view text) {
  if (text == "csv") return SurfaceFormat::Csv;
  if (text == "json") return SurfaceFormat::Json;
  if (text == "matrix") return SurfaceFormat::Matrix;
  throw DomainError("unknown output format '" + std::string(text) + "'");
}

ScanOptions RunConfig::scan_options() const {
  ScanOptions o;
  o.n_intervals = n_intervals;
  o.seed = SeedSpec(seed);
  o.mode = mode;
  o.threads = threads;
  return o;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed configuration: ") + e.what());
  }
  reject_unknown(root, "", {"schema_version", "state", "detector", "truncation", "grid", "n_intervals",
                            "seed", "mode", "threads", "output"});
  RunConfig c;
  c.schema_version = require<int>(root, "", "schema_version");
  if (c.schema_version != kConfigSchemaVersion)
    throw ValidationError("schema_version", "unsupported version " + std::to_string(c.schema_version));

  if (!root.contains("state")) throw ValidationError("state", "required key missing");
  c.state = parse_state(root.at("state"), "state");

  if (const auto it = root.find("detector"); it != root.end()) {
    reject_unknown(*it, "detector", {"eta", "transmission", "visibility", "dark_mean"});
    c.detector.eta = read<double>(*it, "detector", "eta", c.detector.eta);
    c.detector.transmission = read<double>(*it, "detector", "transmission", c.detector.transmission);
    c.detector.visibility = read<double>(*it, "detector", "visibility", c.detector.visibility);
    c.detector.dark_mean = read<double>(*it, "detector", "dark_mean", c.detector.dark_mean);
  }
  check_unit(c.detector.eta, "detector.eta");
  check_unit(c.detector.transmission, "detector.transmission");
  check_unit(c.detector.visibility, "detector.visibility");
  if (!(c.detector.dark_mean >= 0.0) || !std::isfinite(c.detector.dark_mean))
    throw ValidationError("detector.dark_mean", "must be finite and >= 0");

  if (const auto it = root.find("truncation"); it != root.end()) {
    reject_unknown(*it, "truncation", {"cutoff", "tail_tol"});
    c.truncation.cutoff = read<int>(*it, "truncation", "cutoff", c.truncation.cutoff);
    c.truncation.tail_tol = read<double>(*it, "truncation", "tail_tol", c.truncation.tail_tol);
  }
  if (c.truncation.cutoff < 1) throw ValidationError("truncation.cutoff", "must be >= 1");
  if (!(c.truncation.tail_tol > 0.0 && c.truncation.tail_tol < 1.0))
    throw ValidationError("truncation.tail_tol", "must lie in (0, 1)");

  if (const auto it = root.find("grid"); it != root.end()) {
    reject_unknown(*it, "grid", {"n_radial", "n_phase", "max_n_vac", "radial_levels", "phases"});
    c.grid.n_radial = read<int>(*it, "grid", "n_radial", c.grid.n_radial);
    c.grid.n_phase = read<int>(*it, "grid", "n_phase", c.grid.n_phase);
    c.grid.max_n_vac = read<double>(*it, "grid", "max_n_vac", c.grid.max_n_vac);
    c.grid.radial_levels = read<std::vector<double>>(*it, "grid", "radial_levels", {});
    c.grid.phases = read<std::vector<double>>(*it, "grid", "phases", {});
    if (c.grid.radial_levels.empty() != c.grid.phases.empty())
      throw ValidationError("grid", "radial_levels and phases must be given together");
  }
  if (c.grid.n_radial < 1) throw ValidationError("grid.n_radial", "must be >= 1");
  if (c.grid.n_phase < 1) throw ValidationError("grid.n_phase", "must be >= 1");
  if (!(c.grid.max_n_vac > 0.0)) throw ValidationError("grid.max_n_vac", "must be > 0");
  try {
    c.grid.grid().validate();
  } catch (const DomainError& e) {
    throw ValidationError("grid", e.what());
  }

  c.n_intervals = read<long long>(root, "", "n_intervals", c.n_intervals);
  if (c.n_intervals < 1) throw ValidationError("n_intervals", "must be >= 1");
  if (const auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned()) throw ValidationError("seed", "expected an unsigned 64-bit integer");
    c.seed = it->get<std::uint64_t>();
  }
  if (const auto it = root.find("mode"); it != root.end()) {
    if (!it->is_string()) throw ValidationError("mode", "expected a string");
    try {
      c.mode = parse_scan_mode(it->get<std::string>());
    } catch (const DomainError& e) {
      throw ValidationError("mode", e.what());
    }
  }
  const long long threads = read<long long>(root, "", "threads", 0);
  if (threads < 0) throw ValidationError("threads", "must be >= 0");
  c.threads = static_cast<unsigned>(threads);

  if (const auto it = root.find("output"); it != root.end()) {
    reject_unknown(*it, "output", {"directory", "stem", "formats"});
    c.output.directory = read<std::string>(*it, "output", "directory", c.output.directory);
    c.output.stem = read<std::string>(*it, "output", "stem", c.output.stem);
    if (it->contains("formats")) {
      const auto names = read<std::vector<std::string>>(*it, "output", "formats", {});
      if (names.empty()) throw ValidationError("output.formats", "must not be empty");
      c.output.formats.clear();
      for (const auto& n : names) {
        try {
          c.output.formats.push_back(parse_surface_format(n));
        } catch (const DomainError& e) {
          throw ValidationError("output.formats", e.what());
        }
      }
    }
  }

  // Constructing the state checks the remaining cross-field constraints (headroom, Fock index).
  try {
    (void)build_state(c.state, c.truncation);
  } catch (const Error& e) {
    throw ValidationError("state", e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["state"] = state_to_json(c.state);
  j["detector"] = {{"eta", c.detector.eta},
                   {"transmission", c.detector.transmission},
                   {"visibility", c.detector.visibility},
                   {"dark_mean", c.detector.dark_mean}};
  j["truncation"] = {{"cutoff", c.truncation.cutoff}, {"tail_tol", c.truncation.tail_tol}};
  if (!c.grid.radial_levels.empty()) {
    j["grid"] = {{"radial_levels", c.grid.radial_levels}, {"phases", c.grid.phases}};
  } else {
    j["grid"] = {{"n_radial", c.grid.n_radial}, {"n_phase", c.grid.n_phase}, {"max_n_vac", c.grid.max_n_vac}};
  }
  j["n_intervals"] = c.n_intervals;
  j["seed"] = c.seed;
  j["mode"] = std::string(to_string(c.mode));
  j["threads"] = c.threads;
  json formats = json::array();
  for (auto f : c.output.formats) formats.push_back(std::string(to_string(f)));
  j["output"] = {{"directory", c.output.directory}, {"stem", c.output.stem}, {"formats", formats}};
  return j.dump(2);
}

WignerSurface run(const RunConfig& config) {
  const DensityMatrix rho = build_state(config.state, config.truncation);
  WignerSurface surface = scan(rho, config.detector.model(), config.grid.grid(), config.scan_options());
  surface.metadata.config_echo = config_to_json(config);
  return surface;
}

}  // namespace parityscope
