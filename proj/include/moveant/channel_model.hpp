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

#include "moveant/array_geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace moveant
{

inline constexpr double kSpeedOfLight = 299792458.0; // [m/s]

/// Triangle pulse 1 - |t| on [-1, 1], zero elsewhere.
inline double pulse_triangle(double t)
{
    const double a = std::abs(t);
    return a < 1.0 ? 1.0 - a : 0.0;
}

/// Raised-cosine pulse with the given roll-off, time-windowed to [-1, 1].
///
/// sinc(t) cos(pi b t) / (1 - (2 b t)^2); the removable singularity at
/// |t| = 1/(2b) takes its limit (pi/4) sinc(1/(2b)).
inline double pulse_raised_cosine(double t, double rolloff)
{
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("pulse_raised_cosine: roll-off must lie in [0, 1]");
    const double a = std::abs(t);
    if (a >= 1.0)
        return 0.0;
    const auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x); };
    const double d = 1.0 - 4.0 * rolloff * rolloff * a * a;
    if (std::abs(d) < 1e-12)
        return 0.25 * std::numbers::pi * sinc(a);
    return sinc(a) * std::cos(std::numbers::pi * rolloff * a) / d;
}

/// Pulse-shaping filter f(t) with support [-1, 1].
struct Pulse
{
    enum class Kind
    {
        triangle,
        raised_cosine
    };
    Kind kind = Kind::triangle;
    double rolloff = 0.25;

    double operator()(double t) const
    {
        return kind == Kind::triangle ? pulse_triangle(t) : pulse_raised_cosine(t, rolloff);
    }
};

/// Carrier phase applied to a path delayed by tau relative to the receiver sync.
enum class PhaseConvention
{
    carrier,          // exp(-j 2 pi f_c (tau - eta))
    wavelength_scaled // exp(-j 2 pi lambda (tau - eta) / c)
};

struct OfdmConfig
{
    int subcarriers = 1;              // S
    double subcarrier_spacing = 15e3; // Delta [Hz]
    double carrier_frequency = 3e9;   // f_c [Hz]
    PhaseConvention phase = PhaseConvention::carrier;
    Pulse pulse{};

    [[nodiscard]] double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    [[nodiscard]] double bandwidth() const { return subcarriers * subcarrier_spacing; }

    void validate() const
    {
        if (subcarriers < 1)
            throw std::invalid_argument("OfdmConfig: at least one subcarrier is required");
        if (!(subcarrier_spacing > 0.0))
            throw std::invalid_argument("OfdmConfig: subcarrier spacing must be positive");
        if (!(carrier_frequency > 0.0))
            throw std::invalid_argument("OfdmConfig: carrier frequency must be positive");
    }
};

/// One far-field propagation path of a user.
///
/// `amplitude` is the nonnegative path magnitude; `phase` is the scatterer
/// phase folded into the complex gain alongside the deterministic delay phase.
struct PathComponent
{
    double amplitude = 0.0; // alpha >= 0
    double delay = 0.0;     // tau >= 0 [s]
    double azimuth = 0.0;   // [rad], [-pi, pi]
    double elevation = 0.0; // [rad], [-pi/2, pi/2]
    double phase = 0.0;     // [rad]
};

using UserPaths = std::vector<PathComponent>;

inline void validate_paths(const UserPaths &user)
{
    if (user.empty())
        throw std::invalid_argument("UserPaths: at least one path is required");
    for (const auto &p : user)
    {
        if (!(p.amplitude >= 0.0) || !(p.delay >= 0.0))
            throw std::invalid_argument("PathComponent: amplitude and delay must be nonnegative");
        if (std::abs(p.azimuth) > std::numbers::pi + 1e-12 || std::abs(p.elevation) > 0.5 * std::numbers::pi + 1e-12)
            throw std::invalid_argument("PathComponent: angle of arrival out of range");
    }
}

/// Receiver time synchronization and FIR length shared by all users.
struct TapSync
{
    double eta = 0.0; // delay of the fastest path [s]
    int taps = 0;     // T; the FIR has T + 1 taps
};

namespace detail
{
// ceil() that ignores rounding noise, so e.g. 3e6 * (2e-6 - 1e-6) gives 3.
inline int snapped_ceil(double x)
{
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)))
        return static_cast<int>(r);
    return static_cast<int>(std::ceil(x));
}

inline double delay_phase(double excess_delay, const OfdmConfig &cfg)
{
    const double cycles = cfg.phase == PhaseConvention::carrier
                              ? cfg.carrier_frequency * excess_delay
                              : cfg.wavelength() * excess_delay / kSpeedOfLight;
    return -2.0 * std::numbers::pi * cycles;
}

/// Complex path gain alpha exp(j psi) exp(-j 2 pi f_c (tau - eta)).
inline cdouble path_gain(const PathComponent &p, double eta, const OfdmConfig &cfg)
{
    return std::polar(p.amplitude, p.phase + delay_phase(p.delay - eta, cfg));
}
} // namespace detail

/// eta = min tau over every user and path; T = ceil(S Delta (max tau - eta)).
inline TapSync sync_and_tap_count(const std::vector<UserPaths> &users, const OfdmConfig &cfg)
{
    cfg.validate();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &user : users)
        for (const auto &p : user)
        {
            lo = std::min(lo, p.delay);
            hi = std::max(hi, p.delay);
        }
    if (!std::isfinite(lo))
        throw std::invalid_argument("sync_and_tap_count: empty path set");
    return {lo, detail::snapped_ceil(cfg.bandwidth() * (hi - lo))};
}

/// Delay-domain channel of one user: taps h[0..T], each a complex M-vector.
struct FirChannel
{
    std::vector<Eigen::VectorXcd> taps;
    double eta = 0.0;
    int tap_count = 0; // T

    [[nodiscard]] Eigen::Index antennas() const { return taps.empty() ? 0 : taps.front().size(); }
};

/// Scalar tap coefficient b[l] of one path.
inline cdouble tap_coefficient(const PathComponent &p, int l, const TapSync &sync, const OfdmConfig &cfg)
{
    const double t = l + cfg.bandwidth() * (sync.eta - p.delay);
    const double f = cfg.pulse(t);
    if (f == 0.0)
        return {0.0, 0.0};
    return detail::path_gain(p, sync.eta, cfg) * f;
}

/// h[l] = sum_n b_n[l] a_P(az_n, el_n) for l = 0..T.
inline FirChannel fir_taps(const UserPaths &user, const ArrayLayout &layout, const OfdmConfig &cfg,
                           const TapSync &sync)
{
    validate_paths(user);
    FirChannel fir;
    fir.eta = sync.eta;
    fir.tap_count = sync.taps;
    fir.taps.assign(static_cast<std::size_t>(sync.taps) + 1, Eigen::VectorXcd::Zero(layout.size()));
    for (const auto &p : user)
    {
        const Eigen::VectorXcd a = array_response(layout, wave_vector(p.azimuth, p.elevation, cfg.wavelength()));
        for (int l = 0; l <= sync.taps; ++l)
        {
            const cdouble b = tap_coefficient(p, l, sync, cfg);
            if (b != cdouble(0.0, 0.0))
                fir.taps[static_cast<std::size_t>(l)] += b * a;
        }
    }
    return fir;
}

/// Length-S DFT of a tap sequence: hbar[nu] = sum_l h[l] exp(-j 2 pi l nu / S).
inline std::vector<Eigen::VectorXcd> freq_response(const FirChannel &fir, int subcarriers)
{
    if (subcarriers < 1)
        throw std::invalid_argument("freq_response: at least one subcarrier is required");
    std::vector<Eigen::VectorXcd> out(static_cast<std::size_t>(subcarriers), Eigen::VectorXcd::Zero(fir.antennas()));
    for (int nu = 0; nu < subcarriers; ++nu)
        for (std::size_t l = 0; l < fir.taps.size(); ++l)
        {
            // Reduce l * nu mod S first to keep the twiddle argument small.
            const auto r = static_cast<double>((static_cast<long long>(l) * nu) % subcarriers);
            out[static_cast<std::size_t>(nu)] += std::polar(1.0, -2.0 * std::numbers::pi * r / subcarriers) * fir.taps[l];
        }
    return out;
}

/// Per-subcarrier channel matrices Hbar[nu] in C^{M x K}, nu = 0..S-1.
struct FrequencyChannel
{
    std::vector<Eigen::MatrixXcd> matrices;

    [[nodiscard]] int subcarriers() const { return static_cast<int>(matrices.size()); }
    [[nodiscard]] Eigen::Index antennas() const { return matrices.empty() ? 0 : matrices.front().rows(); }
    [[nodiscard]] Eigen::Index users() const { return matrices.empty() ? 0 : matrices.front().cols(); }
    [[nodiscard]] const Eigen::MatrixXcd &operator[](int nu) const { return matrices[static_cast<std::size_t>(nu)]; }
};

/*!MD
# PathSpectrum
Layout-independent part of the frequency-domain channel.

For every path the inner sum of the frequency response,
`sum_l b_n[l] exp(-j 2 pi l nu / S)`, factors into the complex path gain and a
delay-only spectrum `G_tau[nu] = sum_l f(l + S Delta (eta - tau)) exp(-j 2 pi l nu / S)`.
Only the (at most two for the triangle pulse) taps inside the pulse support
contribute. Paths sharing a delay share one spectrum row, so a user's channel
for any layout is `Hbar_i = (A_i diag(g_i) grouped by delay) * G_i`, which
is what `synthesize` evaluates for every candidate layout during optimization.
MD!*/
class PathSpectrum
{
  public:
    struct User
    {
        Eigen::Matrix3Xd wave_vectors;  // 3 x N
        Eigen::VectorXcd gains;         // N
        std::vector<Eigen::Index> group; // delay group of each path
        Eigen::MatrixXcd spectra;       // groups x S
    };

    PathSpectrum(const std::vector<UserPaths> &users, const OfdmConfig &cfg)
        : PathSpectrum(users, cfg, sync_and_tap_count(users, cfg))
    {
    }

    PathSpectrum(const std::vector<UserPaths> &users, const OfdmConfig &cfg, const TapSync &sync)
        : subcarriers_(cfg.subcarriers), wavelength_(cfg.wavelength()), sync_(sync)
    {
        cfg.validate();
        const int S = cfg.subcarriers;
        Eigen::VectorXcd twiddle(S);
        for (int nu = 0; nu < S; ++nu)
            twiddle[nu] = std::polar(1.0, -2.0 * std::numbers::pi * nu / S);

        users_.reserve(users.size());
        for (const auto &paths : users)
        {
            validate_paths(paths);
            User u;
            const auto n = static_cast<Eigen::Index>(paths.size());
            u.wave_vectors.resize(3, n);
            u.gains.resize(n);
            u.group.resize(paths.size());
            std::vector<double> group_delays;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const auto &p = paths[static_cast<std::size_t>(i)];
                u.wave_vectors.col(i) = wave_vector(p.azimuth, p.elevation, wavelength_);
                u.gains[i] = detail::path_gain(p, sync.eta, cfg);
                const auto it = std::find(group_delays.begin(), group_delays.end(), p.delay);
                u.group[static_cast<std::size_t>(i)] = it - group_delays.begin();
                if (it == group_delays.end())
                    group_delays.push_back(p.delay);
            }
            u.spectra = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(group_delays.size()), S);
            for (std::size_t g = 0; g < group_delays.size(); ++g)
            {
                const double shift = cfg.bandwidth() * (group_delays[g] - sync.eta);
                const int first = std::max(0, static_cast<int>(std::ceil(shift - 1.0)));
                const int last = std::min(sync.taps, static_cast<int>(std::floor(shift + 1.0)));
                for (int l = first; l <= last; ++l)
                {
                    const double f = cfg.pulse(l - shift);
                    if (f == 0.0)
                        continue;
                    for (int nu = 0; nu < S; ++nu)
                        u.spectra(static_cast<Eigen::Index>(g), nu) +=
                            f * twiddle[static_cast<Eigen::Index>((static_cast<long long>(l) * nu) % S)];
                }
            }
            users_.push_back(std::move(u));
        }
    }

    [[nodiscard]] int subcarriers() const { return subcarriers_; }
    [[nodiscard]] Eigen::Index users() const { return static_cast<Eigen::Index>(users_.size()); }
    [[nodiscard]] double wavelength() const { return wavelength_; }
    [[nodiscard]] const TapSync &sync() const { return sync_; }
    [[nodiscard]] const User &user(Eigen::Index i) const { return users_[static_cast<std::size_t>(i)]; }

    /// Frequency responses of every user for the given antenna layout.
    [[nodiscard]] FrequencyChannel synthesize(const ArrayLayout &layout) const
    {
        const Eigen::Index M = layout.size();
        const auto K = users();
        FrequencyChannel out;
        out.matrices.assign(static_cast<std::size_t>(subcarriers_), Eigen::MatrixXcd(M, K));
        Eigen::MatrixXd phase;
        Eigen::MatrixXcd weighted;
        Eigen::MatrixXcd response;
        for (Eigen::Index i = 0; i < K; ++i)
        {
            const User &u = users_[static_cast<std::size_t>(i)];
            phase.noalias() = layout.positions().transpose() * u.wave_vectors; // M x N
            weighted.setZero(M, u.spectra.rows());
            for (Eigen::Index n = 0; n < phase.cols(); ++n)
            {
                const cdouble g = u.gains[n];
                auto dst = weighted.col(u.group[static_cast<std::size_t>(n)]);
                for (Eigen::Index m = 0; m < M; ++m)
                    dst[m] += g * cdouble(std::cos(phase(m, n)), std::sin(phase(m, n)));
            }
            response.noalias() = weighted * u.spectra; // M x S
            for (int nu = 0; nu < subcarriers_; ++nu)
                out.matrices[static_cast<std::size_t>(nu)].col(i) = response.col(nu);
        }
        return out;
    }

  private:
    int subcarriers_ = 0;
    double wavelength_ = 0.0;
    TapSync sync_;
    std::vector<User> users_;
};

/// Per-subcarrier responses of one user computed from its raw paths.
inline std::vector<Eigen::VectorXcd> freq_response(const UserPaths &user, const ArrayLayout &layout,
                                                   const OfdmConfig &cfg, const TapSync &sync)
{
    const PathSpectrum spectrum({user}, cfg, sync);
    const FrequencyChannel h = spectrum.synthesize(layout);
    std::vector<Eigen::VectorXcd> out;
    out.reserve(h.matrices.size());
    for (const auto &m : h.matrices)
        out.emplace_back(m.col(0));
    return out;
}

/// Frequency-domain channel of all users for one layout.
inline FrequencyChannel frequency_channel(const std::vector<UserPaths> &users, const ArrayLayout &layout,
                                          const OfdmConfig &cfg)
{
    return PathSpectrum(users, cfg).synthesize(layout);
}

} // namespace moveant
