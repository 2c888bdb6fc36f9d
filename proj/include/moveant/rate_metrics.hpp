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

#include "moveant/channel_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace moveant
{

/// Per-subcarrier transmit power, noise variance and transmitter EVM.
struct RateParams
{
    double power = 1.0;          // rho [W per subcarrier]
    double noise_variance = 1.0; // sigma^2 [W per subcarrier]
    double evm = 0.0;            // [0, 1]

    void validate() const
    {
        if (!(power >= 0.0) || !std::isfinite(power))
            throw std::invalid_argument("RateParams: power must be finite and nonnegative");
        if (!(noise_variance > 0.0))
            throw std::invalid_argument("RateParams: noise variance must be positive");
        if (!(evm >= 0.0 && evm <= 1.0))
            throw std::invalid_argument("RateParams: EVM must lie in [0, 1]");
    }

    [[nodiscard]] double snr() const { return power / noise_variance; }
    [[nodiscard]] double distortion_snr() const { return power * evm * evm / noise_variance; }
};

struct RateResult
{
    double average = 0.0;                // R_sum [bit/s/Hz]
    std::vector<double> per_subcarrier;  // R[nu]
};

/// log2 det(A) of a Hermitian positive semidefinite matrix.
///
/// Uses a pivoted LDL^H factorization. Returns -inf for singular input and
/// throws std::domain_error for non-Hermitian or indefinite input.
inline double log2det_hermitian_psd(const Eigen::MatrixXcd &a)
{
    if (a.rows() != a.cols())
        throw std::invalid_argument("log2det_hermitian_psd: matrix must be square");
    if (a.size() == 0)
        return 0.0;
    const double scale = a.norm();
    if ((a - a.adjoint()).norm() > 1e-8 * scale)
        throw std::domain_error("log2det_hermitian_psd: matrix is not Hermitian");
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw std::domain_error("log2det_hermitian_psd: factorization failed");
    const double floor = 1e-10 * scale;
    double sum = 0.0;
    bool singular = false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        const double d = ldlt.vectorD()[i].real();
        if (d < -floor)
            throw std::domain_error("log2det_hermitian_psd: matrix is indefinite");
        if (d <= 0.0)
            singular = true;
        else
            sum += std::log2(d);
    }
    return singular ? -std::numeric_limits<double>::infinity() : sum;
}

namespace detail
{
/// log2 det(I + c G) for Hermitian PSD G and c >= 0, via Cholesky.
inline double log2det_identity_plus(const Eigen::MatrixXcd &gram, double c)
{
    Eigen::MatrixXcd a = c * gram;
    a.diagonal().array() += 1.0;
    const Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("sum_rate: I + c H^H H is not positive definite");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        sum += std::log2(llt.matrixLLT()(i, i).real());
    return 2.0 * sum;
}

/// Smaller of H^H H and H H^H; both share the nonzero eigenvalues.
inline Eigen::MatrixXcd small_gram(const Eigen::MatrixXcd &h)
{
    if (h.cols() <= h.rows())
        return h.adjoint() * h;
    return h * h.adjoint();
}

inline double subcarrier_rate(const Eigen::MatrixXcd &h, const RateParams &params)
{
    if (params.evm == 1.0 || params.power == 0.0)
        return 0.0;
    const Eigen::MatrixXcd gram = small_gram(h);
    const double ideal = log2det_identity_plus(gram, params.snr());
    if (params.evm == 0.0)
        return ideal;
    return ideal - log2det_identity_plus(gram, params.distortion_snr());
}
} // namespace detail

/*!MD
# sum_rate
Average sum rate over the subcarriers with transmitter distortion:

    R = 1/S sum_nu [ log2 det(I + rho/s2 H H^H) - log2 det(I + rho EVM^2/s2 H H^H) ]

Determinants are evaluated on the K x K Gram matrix when K <= M. EVM = 1
yields exactly zero; EVM = 0 skips the distortion term.
MD!*/
inline RateResult sum_rate(const FrequencyChannel &channel, const RateParams &params)
{
    params.validate();
    if (channel.subcarriers() < 1)
        throw std::invalid_argument("sum_rate: channel has no subcarriers");
    RateResult result;
    result.per_subcarrier.reserve(static_cast<std::size_t>(channel.subcarriers()));
    for (const auto &h : channel.matrices)
    {
        if (h.rows() != channel.antennas() || h.cols() != channel.users())
            throw std::invalid_argument("sum_rate: inconsistent channel matrix shapes");
        result.per_subcarrier.push_back(detail::subcarrier_rate(h, params));
    }
    result.average = std::accumulate(result.per_subcarrier.begin(), result.per_subcarrier.end(), 0.0) /
                     static_cast<double>(channel.subcarriers());
    return result;
}

/// High-SNR limit K log2(1 / EVM^2); +inf for ideal hardware (EVM = 0).
inline double asymptotic_limit(Eigen::Index users, double evm)
{
    if (users < 0)
        throw std::invalid_argument("asymptotic_limit: negative user count");
    if (!(evm >= 0.0 && evm <= 1.0))
        throw std::invalid_argument("asymptotic_limit: EVM must lie in [0, 1]");
    if (evm == 0.0)
        return std::numeric_limits<double>::infinity();
    return static_cast<double>(users) * std::log2(1.0 / (evm * evm));
}

/// Sum over users of the single-user rates, i.e. the rate without inter-user interference.
inline double interference_free_bound(const FrequencyChannel &channel, const RateParams &params)
{
    params.validate();
    if (channel.subcarriers() < 1)
        throw std::invalid_argument("interference_free_bound: channel has no subcarriers");
    if (params.evm == 1.0 || params.power == 0.0)
        return 0.0;
    double total = 0.0;
    for (const auto &h : channel.matrices)
    {
        if (h.rows() != channel.antennas() || h.cols() != channel.users())
            throw std::invalid_argument("interference_free_bound: inconsistent channel matrix shapes");
        for (Eigen::Index k = 0; k < h.cols(); ++k)
        {
            const double g = h.col(k).squaredNorm();
            total += std::log2(1.0 + params.snr() * g);
            if (params.evm > 0.0)
                total -= std::log2(1.0 + params.distortion_snr() * g);
        }
    }
    return total / static_cast<double>(channel.subcarriers());
}

} // namespace moveant
