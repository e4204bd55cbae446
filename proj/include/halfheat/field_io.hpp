#pragma once

#include <filesystem>
#include <iosfwd>

#include "halfheat/grid.hpp"

namespace halfheat {

/// Flat binary field layout: 8-byte magic "HHFIELD1", then kind (u32,
/// 0 sampled / 1 spectral), d (u32), n_x (u32), n_t (u32), box_x (f64),
/// box_t (f64), then size() little-endian (re, im) f64 pairs in row-major
/// order. Host is assumed little-endian.
void write_field(const std::filesystem::path& path, const SampledField& u);
void write_field(const std::filesystem::path& path, const SpectralField& f);

SampledField read_sampled(const std::filesystem::path& path);
SpectralField read_spectral(const std::filesystem::path& path);

/// CSV export: one comment header line with the grid shape, then
/// "index,re,im" rows formatted with %.17g (lossless double round trip).
void write_field_csv(std::ostream& os, const SampledField& u);
void write_field_csv(std::ostream& os, const SpectralField& f);
void write_field_csv(const std::filesystem::path& path, const SampledField& u);

}  // namespace halfheat
