#include "parityscope/surface_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parityscope/errors.hpp"

namespace parityscope {

using nlohmann::json;

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_to_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_null()) return kNaN;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("unexpected string '" + s + "' in numeric field");
  }
  return j.get<double>();
}

}  // namespace

std::string file_extension(SurfaceFormat format) {
  switch (format) {
    case SurfaceFormat::Csv: return ".csv";
    case SurfaceFormat::Json: return ".json";
    case SurfaceFormat::Matrix: return ".dat";
  }
  return ".txt";
}

std::string surface_to_csv(const WignerSurface& surface) {
  std::string out = kSurfaceCsvHeader;
  out += '\n';
  for (const SurfacePoint& p : surface.points) {
    out += std::to_string(p.radial_index) + ',' + std::to_string(p.phase_index) + ',' +
           format_number(p.re_beta) + ',' + format_number(p.im_beta) + ',' + format_number(p.pi_hat) +
           ',' + format_number(p.sigma) + ',' + format_number(p.exact_pi) + ',' + format_number(p.z) +
           ',' + std::to_string(p.even_count) + ',' + std::to_string(p.odd_count) + ',' +
           (p.valid ? "1" : "0") + '\n';
  }
  return out;
}

std::string surface_to_json(const WignerSurface& surface) {
  json j;
  j["format"] = "parityscope-surface";
  json meta;
  meta["config"] = surface.metadata.config_echo.empty() ? json(nullptr) : json::parse(surface.metadata.config_echo);
  meta["version"] = surface.metadata.version;
  meta["timestamp"] = surface.metadata.timestamp;
  meta["counting_interval_us"] = surface.metadata.counting_interval_us;
  meta["max_truncation_deficit"] = surface.metadata.max_truncation_deficit;
  meta["invalid_points"] = surface.metadata.invalid_points;
  j["metadata"] = std::move(meta);
  j["grid"] = {{"radial_levels", surface.grid.radial_levels}, {"phases", surface.grid.phases}};
  j["mode"] = std::string(to_string(surface.mode));
  j["n_intervals"] = surface.n_intervals;
  j["master_seed"] = surface.master_seed;
  json records = json::array();
  for (const SurfacePoint& p : surface.points) {
    records.push_back({{"radial_index", p.radial_index},
                       {"phase_index", p.phase_index},
                       {"re_beta", number_to_json(p.re_beta)},
                       {"im_beta", number_to_json(p.im_beta)},
                       {"pi_hat", number_to_json(p.pi_hat)},
                       {"sigma", number_to_json(p.sigma)},
                       {"exact_pi", number_to_json(p.exact_pi)},
                       {"z", number_to_json(p.z)},
                       {"even_count", p.even_count},
                       {"odd_count", p.odd_count},
                       {"valid", p.valid},
                       {"truncation_deficit", number_to_json(p.truncation_deficit)}});
  }
  j["records"] = std::move(records);
  return j.dump(1);
}

std::string surface_to_matrix(const WignerSurface& surface) {
  std::string out;
  const bool mc = surface.has_monte_carlo();
  for (std::size_t r = 0; r < surface.grid.radial_levels.size(); ++r) {
    for (std::size_t k = 0; k < surface.grid.phases.size(); ++k) {
      const SurfacePoint& p = surface.at(r, k);
      if (k > 0) out += ' ';
      out += format_number(mc ? p.pi_hat : p.exact_pi);
    }
    out += '\n';
  }
  return out;
}

WignerSurface surface_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed surface JSON: ") + e.what());
  }
  try {
    WignerSurface s;
    const json& meta = j.at("metadata");
    if (!meta.at("config").is_null()) s.metadata.config_echo = meta.at("config").dump(2);
    s.metadata.version = meta.at("version").get<std::string>();
    s.metadata.timestamp = meta.at("timestamp").get<std::string>();
    s.metadata.counting_interval_us = meta.at("counting_interval_us").get<double>();
    s.metadata.max_truncation_deficit = meta.at("max_truncation_deficit").get<double>();
    s.metadata.invalid_points = meta.at("invalid_points").get<long long>();
    s.grid.radial_levels = j.at("grid").at("radial_levels").get<std::vector<double>>();
    s.grid.phases = j.at("grid").at("phases").get<std::vector<double>>();
    s.mode = parse_scan_mode(j.at("mode").get<std::string>());
    s.n_intervals = j.at("n_intervals").get<long long>();
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const json& r : j.at("records")) {
      SurfacePoint p;
      p.radial_index = r.at("radial_index").get<int>();
      p.phase_index = r.at("phase_index").get<int>();
      p.re_beta = number_from_json(r.at("re_beta"));
      p.im_beta = number_from_json(r.at("im_beta"));
      p.pi_hat = number_from_json(r.at("pi_hat"));
      p.sigma = number_from_json(r.at("sigma"));
      p.exact_pi = number_from_json(r.at("exact_pi"));
      p.z = number_from_json(r.at("z"));
      p.even_count = r.at("even_count").get<long long>();
      p.odd_count = r.at("odd_count").get<long long>();
      p.valid = r.at("valid").get<bool>();
      p.truncation_deficit = number_from_json(r.at("truncation_deficit"));
      s.points.push_back(p);
    }
    if (s.points.size() != s.grid.size()) throw ParseError("record count does not match grid size");
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("surface JSON does not match schema: ") + e.what());
  }
}

WignerSurface read_surface_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return surface_from_json(ss.str());
}

void write_surface(const WignerSurface& surface, SurfaceFormat format, const std::filesystem::path& path) {
  std::string text;
  switch (format) {
    case SurfaceFormat::Csv: text = surface_to_csv(surface); break;
    case SurfaceFormat::Json: text = surface_to_json(surface); break;
    case SurfaceFormat::Matrix: text = surface_to_matrix(surface); break;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_surfaces(const WignerSurface& surface, const OutputSpec& output) {
  std::error_code ec;
  std::filesystem::create_directories(output.directory, ec);
  if (ec) throw IoError("cannot create directory " + output.directory + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (SurfaceFormat f : output.formats) {
    auto path = std::filesystem::path(output.directory) / (output.stem + file_extension(f));
    write_surface(surface, f, path);
    written.push_back(std::move(path));
  }
  return written;
}

}  // namespace parityscope
