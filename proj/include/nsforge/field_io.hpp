#pragma once

#include <json.hpp>

#include <string>

#include "nsforge/trajectory.hpp"

namespace nsforge {

/// Flat binary field container (format documented in docs/FORMATS.md):
/// header (magic "NSFF", version, dim, N, L, component count, representation
/// tag), then row-major component arrays of 64-bit floats (complex stored as
/// interleaved re/im for spectral fields). A JSON sidecar `<path>.json`
/// carries the metadata.
void save_field(const VectorField& u, const std::string& path,
                const std::string& description = "");
VectorField load_field(const std::string& path);

/// Scalar-slice stack (used for force profiles): same container with one
/// component per time slice; slice times go in the sidecar.
void save_slices(const GridSpec& g, const std::vector<double>& times,
                 const std::vector<std::vector<double>>& slices, double half_width,
                 double time_extent, const std::string& path);
struct SliceStack {
    GridSpec grid;
    std::vector<double> times;
    std::vector<std::vector<double>> slices;
    double half_width = 1.0;
    double time_extent = 0.25;
};
SliceStack load_slices(const std::string& path);

/// Generic component stack in the same container (tensor exports).
void save_components(const GridSpec& g, const std::vector<std::vector<double>>& comps,
                     const std::string& path, const nlohmann::json& sidecar_extra);

/// Trajectory checkpoints: field containers snapshot_%04d.nsf plus
/// index.json (node times, norm series). Directory is created.
void save_trajectory(const Trajectory& tr, const std::string& dir);
Trajectory load_trajectory(const std::string& dir);

/// FNV-1a 64-bit content hash (manifest integrity checks).
std::uint64_t fnv1a64_file(const std::string& path);
std::uint64_t fnv1a64_bytes(const void* data, std::size_t len);

}  // namespace nsforge
