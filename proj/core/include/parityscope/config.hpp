#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parityscope/detection.hpp"
#include "parityscope/estimator.hpp"
#include "parityscope/states.hpp"

namespace parityscope {

inline constexpr int kConfigSchemaVersion = 1;

enum class StateKind { Vacuum, Coherent, Fock, PhaseDiffused, Mixture };

struct StateSpec;

struct MixtureComponent {
  double weight = 0.0;
  std::shared_ptr<const StateSpec> state;
};

struct StateSpec {
  StateKind kind = StateKind::Vacuum;
  Amplitude alpha{};        ///< coherent
  int photons = 0;          ///< fock
  double magnitude = 0.0;   ///< phase_diffused
  PhaseDiffusionSpec diffusion;
  std::vector<MixtureComponent> components;
};

DensityMatrix build_state(const StateSpec& spec, const TruncationPolicy& policy);

struct DetectorParams {
  double eta = 0.70;
  double transmission = 0.986;
  double visibility = 0.985;
  double dark_mean = 0.0;

  DetectorModel model() const { return DetectorModel(eta, transmission, visibility, dark_mean); }
};

/// Either a uniform-amplitude grid (n_radial x n_phase up to max_n_vac) or explicit lists.
struct GridSpec {
  int n_radial = 20;
  int n_phase = 40;
  double max_n_vac = 4.0;
  std::vector<double> radial_levels;
  std::vector<double> phases;

  ScanGrid grid() const;
};

enum class SurfaceFormat { Csv, Json, Matrix };
std::string_view to_string(SurfaceFormat f);
SurfaceFormat parse_surface_format(std::string_view text);

struct OutputSpec {
  std::string directory = ".";
  std::string stem = "surface";
  std::vector<SurfaceFormat> formats{SurfaceFormat::Csv};
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  StateSpec state;
  DetectorParams detector;
  TruncationPolicy truncation;
  GridSpec grid;
  long long n_intervals = 8000;
  std::uint64_t seed = 1;
  ScanMode mode = ScanMode::Both;
  unsigned threads = 0;
  OutputSpec output;

  ScanOptions scan_options() const;
};

/// Parses and validates configuration text. ParseError on malformed text, ValidationError
/// naming the field on unknown keys or violated constraints.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON text of a configuration; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const RunConfig& config);

/// Builds the state, detector and grid and runs the scan; the surface carries the
/// configuration echo in its metadata.
WignerSurface run(const RunConfig& config);

}  // namespace parityscope
