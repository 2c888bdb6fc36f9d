// SPDX-License-Identifier: Apache-2.0
//
// moveant: movable-antenna wideband multi-user MIMO simulation
// Copyright (C) 2026 The moveant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace moveant
{

using Position3 = Eigen::Vector3d;
using cdouble = std::complex<double>;

/// Slack applied to every geometric feasibility comparison [m].
inline constexpr double kGeometryTolerance = 1e-12;

/*!MD
# ArrayLayout
Ordered set of M antenna positions together with the carrier wavelength.

- Positions are stored column-wise in a 3 x M matrix (x, y, z in meters).
- The base-station aperture lies in the yz-plane, so the array normal is +x.
- Antenna m of a layout is bound to movement region m of a `RegionGrid`.
MD!*/
class ArrayLayout
{
  public:
    ArrayLayout() = default;

    ArrayLayout(Eigen::Matrix3Xd positions, double wavelength)
        : positions_(std::move(positions)), wavelength_(wavelength)
    {
        if (positions_.cols() < 1)
            throw std::invalid_argument("ArrayLayout: at least one antenna is required");
        if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_))
            throw std::invalid_argument("ArrayLayout: wavelength must be positive");
        if (!positions_.allFinite())
            throw std::invalid_argument("ArrayLayout: positions must be finite");
    }

    ArrayLayout(const std::vector<Position3> &positions, double wavelength)
        : ArrayLayout(stack(positions), wavelength)
    {
    }

    [[nodiscard]] Eigen::Index size() const { return positions_.cols(); }
    [[nodiscard]] double wavelength() const { return wavelength_; }
    [[nodiscard]] const Eigen::Matrix3Xd &positions() const { return positions_; }
    [[nodiscard]] Position3 position(Eigen::Index m) const { return positions_.col(m); }

    /// Smallest pairwise antenna distance; +inf for a single antenna.
    [[nodiscard]] double min_spacing() const
    {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < size(); ++m)
            for (Eigen::Index j = m + 1; j < size(); ++j)
                best = std::min(best, (positions_.col(m) - positions_.col(j)).norm());
        return best;
    }

  private:
    static Eigen::Matrix3Xd stack(const std::vector<Position3> &positions)
    {
        Eigen::Matrix3Xd out(3, static_cast<Eigen::Index>(positions.size()));
        for (std::size_t m = 0; m < positions.size(); ++m)
            out.col(static_cast<Eigen::Index>(m)) = positions[m];
        return out;
    }

    Eigen::Matrix3Xd positions_;
    double wavelength_ = 0.0;
};

/// Square movement region of side L centered at (0, y0, z0) in the yz-plane.
struct MovementRegion
{
    double center_y = 0.0;
    double center_z = 0.0;
    double side = 0.0;

    [[nodiscard]] double y_min() const { return center_y - 0.5 * side; }
    [[nodiscard]] double y_max() const { return center_y + 0.5 * side; }
    [[nodiscard]] double z_min() const { return center_z - 0.5 * side; }
    [[nodiscard]] double z_max() const { return center_z + 0.5 * side; }

    /// Largest violation of the containment constraint; 0 when inside.
    [[nodiscard]] double containment_excess(const Position3 &p) const
    {
        const double half = 0.5 * side;
        return std::max({std::abs(p.x()), std::abs(p.y() - center_y) - half,
                         std::abs(p.z() - center_z) - half, 0.0});
    }

    [[nodiscard]] bool contains(const Position3 &p, double tol = kGeometryTolerance) const
    {
        return containment_excess(p) <= tol;
    }
};

/// Thrown when two movement regions would share interior points.
class RegionOverlapError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// List of M movement regions with pairwise disjoint interiors.
class RegionGrid
{
  public:
    RegionGrid() = default;

    explicit RegionGrid(std::vector<MovementRegion> regions) : regions_(std::move(regions))
    {
        for (std::size_t m = 0; m < regions_.size(); ++m)
        {
            if (!(regions_[m].side > 0.0))
                throw std::invalid_argument("RegionGrid: region side must be positive");
            for (std::size_t j = 0; j < m; ++j)
            {
                const auto &a = regions_[m];
                const auto &b = regions_[j];
                const double reach = 0.5 * (a.side + b.side) - kGeometryTolerance;
                if (std::abs(a.center_y - b.center_y) < reach && std::abs(a.center_z - b.center_z) < reach)
                    throw RegionOverlapError("RegionGrid: regions " + std::to_string(j) + " and " +
                                             std::to_string(m) + " overlap");
            }
        }
    }

    [[nodiscard]] std::size_t size() const { return regions_.size(); }
    [[nodiscard]] const MovementRegion &operator[](std::size_t m) const { return regions_[m]; }
    [[nodiscard]] const std::vector<MovementRegion> &regions() const { return regions_; }
    [[nodiscard]] auto begin() const { return regions_.begin(); }
    [[nodiscard]] auto end() const { return regions_.end(); }

    /// Bounding box of the union of all regions: (y_min, y_max, z_min, z_max).
    [[nodiscard]] Eigen::Vector4d bounding_box() const
    {
        Eigen::Vector4d box(std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity());
        for (const auto &r : regions_)
        {
            box[0] = std::min(box[0], r.y_min());
            box[1] = std::max(box[1], r.y_max());
            box[2] = std::min(box[2], r.z_min());
            box[3] = std::max(box[3], r.z_max());
        }
        return box;
    }

  private:
    std::vector<MovementRegion> regions_;
};

/// Plane-wave wave vector (2 pi / lambda) * (cos az cos el, sin az cos el, sin el) [rad/m].
inline Eigen::Vector3d wave_vector(double azimuth, double elevation, double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("wave_vector: wavelength must be positive");
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double ce = std::cos(elevation);
    return {k * std::cos(azimuth) * ce, k * std::sin(azimuth) * ce, k * std::sin(elevation)};
}

/// Array response exp(j p_m^T k) for a wave vector that is already known.
inline Eigen::VectorXcd array_response(const ArrayLayout &layout, const Eigen::Vector3d &k)
{
    const Eigen::VectorXd phase = layout.positions().transpose() * k;
    Eigen::VectorXcd a(phase.size());
    for (Eigen::Index m = 0; m < phase.size(); ++m)
        a[m] = cdouble(std::cos(phase[m]), std::sin(phase[m]));
    return a;
}

/// Array response for a plane wave arriving from (azimuth, elevation).
inline Eigen::VectorXcd array_response(const ArrayLayout &layout, double azimuth, double elevation)
{
    return array_response(layout, wave_vector(azimuth, elevation, layout.wavelength()));
}

namespace detail
{
inline int exact_sqrt(Eigen::Index count, const char *who)
{
    if (count < 1)
        throw std::invalid_argument(std::string(who) + ": antenna count must be positive");
    const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    if (static_cast<Eigen::Index>(side) * side != count)
        throw std::invalid_argument(std::string(who) + ": antenna count must be a perfect square");
    return side;
}

/// n points spanning [-width/2, width/2] edge to edge, or {0} when n == 1.
inline double span_point(int index, int n, double width)
{
    if (n == 1)
        return 0.0;
    return -0.5 * width + width * static_cast<double>(index) / static_cast<double>(n - 1);
}

// Row index r runs along z, column index c along y; antenna m = r * cols + c.
inline ArrayLayout planar_grid(int rows, int cols, double width, double height, double wavelength)
{
    Eigen::Matrix3Xd p(3, rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            p.col(r * cols + c) = Position3(0.0, span_point(c, cols, width), span_point(r, rows, height));
    return ArrayLayout(std::move(p), wavelength);
}
} // namespace detail

/// Uniform planar array with lambda/2 spacing, centered at the origin.
inline ArrayLayout make_compact_upa(Eigen::Index antennas, double wavelength)
{
    const int n = detail::exact_sqrt(antennas, "make_compact_upa");
    const double extent = 0.5 * wavelength * (n - 1);
    return detail::planar_grid(n, n, extent, extent, wavelength);
}

/// Uniform planar array whose outer elements sit on the aperture edges.
inline ArrayLayout make_sparse_upa(Eigen::Index antennas, double aperture_width, double aperture_height,
                                   double wavelength)
{
    const int n = detail::exact_sqrt(antennas, "make_sparse_upa");
    if (!(aperture_width > 0.0) || !(aperture_height > 0.0))
        throw std::invalid_argument("make_sparse_upa: aperture dimensions must be positive");
    return detail::planar_grid(n, n, aperture_width, aperture_height, wavelength);
}

/// Horizontal uniform linear array along y at z = 0 spanning the aperture width.
inline ArrayLayout make_sparse_ula(Eigen::Index antennas, double aperture_width, double wavelength)
{
    if (antennas < 2)
        throw std::invalid_argument("make_sparse_ula: at least two antennas are required");
    if (!(aperture_width > 0.0))
        throw std::invalid_argument("make_sparse_ula: aperture width must be positive");
    const int n = static_cast<int>(antennas);
    Eigen::Matrix3Xd p = Eigen::Matrix3Xd::Zero(3, n);
    for (int m = 0; m < n; ++m)
        p(1, m) = detail::span_point(m, n, aperture_width);
    return ArrayLayout(std::move(p), wavelength);
}

/// rows x cols square regions of side L on a grid with the given pitch, centered at the origin.
inline RegionGrid make_region_grid(int rows, int cols, double side, double pitch)
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("make_region_grid: rows and cols must be positive");
    if (!(side > 0.0))
        throw std::invalid_argument("make_region_grid: region side must be positive");
    if (pitch < side)
        throw RegionOverlapError("make_region_grid: pitch smaller than region side");
    std::vector<MovementRegion> regions;
    regions.reserve(static_cast<std::size_t>(rows * cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            regions.push_back({(c - 0.5 * (cols - 1)) * pitch, (r - 0.5 * (rows - 1)) * pitch, side});
    return RegionGrid(std::move(regions));
}

struct Violation
{
    enum class Kind
    {
        containment,
        spacing
    };
    Kind kind;
    Eigen::Index first;  // antenna index
    Eigen::Index second; // partner antenna for spacing violations, else == first
    double amount;       // excess distance [m]
};

struct FeasibilityReport
{
    bool feasible = true;
    std::vector<Violation> violations;

    explicit operator bool() const { return feasible; }
};

/// Checks region containment for every antenna and the lambda/2 spacing for every pair.
inline FeasibilityReport check_feasible(const ArrayLayout &layout, const RegionGrid &grid)
{
    if (static_cast<std::size_t>(layout.size()) != grid.size())
        throw std::invalid_argument("check_feasible: layout and grid sizes differ");
    FeasibilityReport report;
    for (Eigen::Index m = 0; m < layout.size(); ++m)
    {
        const double excess = grid[static_cast<std::size_t>(m)].containment_excess(layout.position(m));
        if (excess > kGeometryTolerance)
            report.violations.push_back({Violation::Kind::containment, m, m, excess});
    }
    const double min_distance = 0.5 * layout.wavelength();
    for (Eigen::Index m = 0; m < layout.size(); ++m)
        for (Eigen::Index j = m + 1; j < layout.size(); ++j)
        {
            const double d = (layout.position(m) - layout.position(j)).norm();
            if (d + kGeometryTolerance < min_distance)
                report.violations.push_back({Violation::Kind::spacing, m, j, min_distance - d});
        }
    report.feasible = report.violations.empty();
    return report;
}

/// Checks only the lambda/2 spacing constraint.
inline bool satisfies_spacing(const ArrayLayout &layout)
{
    return layout.min_spacing() + kGeometryTolerance >= 0.5 * layout.wavelength();
}

} // namespace moveant
