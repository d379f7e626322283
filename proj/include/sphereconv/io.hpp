// Text formats: knot CSV, ScalarField and SpectralField files.
#pragma once

#include "sphereconv/spectral.hpp"

#include <filesystem>

namespace sphereconv {

/// Header "x,y,z,r,c"; values written with 17 significant digits so a
/// round trip is bit-identical.
void write_knots_csv(const std::filesystem::path& path, const KnotSet4& k);
void write_knots_csv(const std::filesystem::path& path, const KnotSet3& k);
std::string knots_csv(const KnotSet4& k);

/// Any knot CSV as nonequiradius knots with the given trim height.
KnotSet4 read_knots_csv(const std::filesystem::path& path, double trim_height);
/// Knot CSV whose rows share one radius.
KnotSet3 read_knots3_csv(const std::filesystem::path& path);

/// "D NX NY NZ [NR] L" then one value per line, x fastest.
void write_scalar_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_scalar_field(const std::filesystem::path& path);

/// Same header, then "re im" per line.
void write_spectral_field(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_spectral_field(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sphereconv
