#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "parityscope/config.hpp"
#include "parityscope/surface.hpp"

namespace parityscope {

/// Column order of the CSV encoding.
inline constexpr const char* kSurfaceCsvHeader =
    "radial_index,phase_index,re_beta,im_beta,pi_hat,sigma,exact_pi,z,even_count,odd_count,valid";

std::string surface_to_csv(const WignerSurface& surface);
std::string surface_to_json(const WignerSurface& surface);
/// One line per radial level, one space-separated value per phase: pi_hat when the surface
/// carries Monte Carlo estimates, exact_pi otherwise.
std::string surface_to_matrix(const WignerSurface& surface);

WignerSurface surface_from_json(const std::string& text);
WignerSurface read_surface_json(const std::filesystem::path& path);

void write_surface(const WignerSurface& surface, SurfaceFormat format, const std::filesystem::path& path);

/// Writes `<directory>/<stem>.<ext>` for every requested format; returns the written paths.
std::vector<std::filesystem::path> write_surfaces(const WignerSurface& surface, const OutputSpec& output);

std::string file_extension(SurfaceFormat format);

}  // namespace parityscope
