#pragma once

#include <string>

#include "catlab/field.hpp"
#include "catlab/grid.hpp"
#include "catlab/spectral.hpp"

namespace catlab {

/// Shape of one Cauchy component in the weighted representation.
///   zero      0
///   gd        amplitude * g_d
///   gaussian  amplitude * exp(-y^2 / width^2)
///   collar    amplitude * (1 - (y/width)^2)^4 on |y| < width, 0 outside
///   file      samples from a two-column (y, value) table, linearly interpolated
struct ProfileSpec {
    std::string preset = "zero";
    double amplitude = 0.0;
    double width = 2.0;
    bool project = false;  ///< apply P_c
    std::string file;
};

/// Weighted Cauchy data (phi~_1 + a g_d, phi~_2).
struct DataSpec {
    ProfileSpec position;
    ProfileSpec velocity;
    double a = 0.0;
};

std::vector<double> profile_samples(const ProfileSpec& spec, const Grid& grid,
                                    const spectral::SpectralBasis* basis);

/// Throws DomainError for unknown presets or a missing basis where one is
/// needed, RegularityViolation if the physical field leaves the chart margin.
FieldState initial_data(const DataSpec& spec, const Grid& grid,
                        const spectral::SpectralBasis* basis, double margin = 0.05);

/// Two- or three-column table (y, phi~[, pi~]) with optional header line.
struct Table {
    std::vector<double> y;
    std::vector<double> first;
    std::vector<double> second;  ///< empty if only two columns
};

Table read_table(const std::string& path);
double interpolate(const std::vector<double>& x, const std::vector<double>& v, double at);

}  // namespace catlab
