// Copyright 2026 The lindtopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include <Eigen/Dense>

#include "lindtopo/error.hpp"

namespace lindtopo {

using real = double;
using complex = std::complex<double>;

using MatrixXc = Eigen::MatrixXcd;
using MatrixXr = Eigen::MatrixXd;
using VectorXc = Eigen::VectorXcd;
using VectorXr = Eigen::VectorXd;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr real pi = std::numbers::pi;

enum class Boundary { Periodic, Open };

inline std::string_view to_string(Boundary b) { return b == Boundary::Periodic ? "pbc" : "obc"; }

/// Kitaev chain  H = sum_n [-J c+_n c_{n+1} + delta c_n c_{n+1} + h.c.] - mu sum_n c+_n c_n.
struct HamiltonianSpec {
    real J = 0.0;
    real delta = 0.0;
    real mu = 0.0;
    int N = 2;
    Boundary boundary = Boundary::Periodic;

    void validate() const {
        detail::require(N >= 2, "HamiltonianSpec: N must be >= 2");
        detail::require(std::isfinite(J) && std::isfinite(delta) && std::isfinite(mu),
                        "HamiltonianSpec: amplitudes must be finite");
    }
};

/// Nearest-neighbour jump operators L_n = u1 c_n + u2 c_{n+1} + v1 c+_n + v2 c+_{n+1}.
struct DissipatorSpec {
    complex u1{0.0};
    complex u2{0.0};
    complex v1{0.0};
    complex v2{0.0};
    int N = 2;
    Boundary boundary = Boundary::Periodic;

    void validate() const {
        detail::require(N >= 2, "DissipatorSpec: N must be >= 2");
        for (auto a : {u1, u2, v1, v2})
            detail::require(std::isfinite(a.real()) && std::isfinite(a.imag()),
                            "DissipatorSpec: amplitudes must be finite");
        if (u1 == 0.0 && u2 == 0.0 && v1 == 0.0 && v2 == 0.0)
            detail::throw_physics("no dissipation: all dissipator amplitudes vanish");
    }
};

/// 2x2 Bloch block at quasimomentum k (flavour indices s, s' = 0, 1).
struct BlochBlock {
    real k = 0.0;
    Matrix2c data = Matrix2c::Zero();

    bool high_symmetry(real tol = 1e-12) const {
        const real r = std::remainder(k, 2.0 * pi);
        return std::abs(r) < tol || std::abs(std::abs(r) - pi) < tol;
    }
};

/// Decomposition H_eff(k_s) = hy sigma_y + i (h0 I + hx sigma_x + hz sigma_z).
struct HVector {
    real h0 = 0.0;
    real hx = 0.0;
    real hy = 0.0;
    real hz = 0.0;

    /// hy^2 - hx^2 - hz^2; its sign separates the PT-preserved and PT-broken regimes.
    real discriminant() const { return hy * hy - hx * hx - hz * hz; }
    /// Principal square root of the discriminant.
    complex E() const { return std::sqrt(complex(discriminant(), 0.0)); }
    complex lambda_plus() const { return complex(0.0, h0) + E(); }
    complex lambda_minus() const { return complex(0.0, h0) - E(); }
};

/// Real-space correlation matrix Delta_{pq} = Tr{rho [w_p, w_q]} (2N x 2N).
/// Hermitian and antisymmetric, so purely imaginary: Delta = i A with A real
/// antisymmetric.
struct CorrelationMatrix {
    MatrixXc data;
    Boundary boundary = Boundary::Periodic;

    int sites() const { return static_cast<int>(data.rows() / 2); }

    static CorrelationMatrix from_real_form(const MatrixXr& A, Boundary b) {
        return {MatrixXc(complex(0.0, 1.0) * A.cast<complex>()), b};
    }
    /// A with Delta = i A.
    MatrixXr real_form() const { return data.imag(); }
};

namespace pauli {
inline Matrix2c identity() { return Matrix2c::Identity(); }
inline Matrix2c x() {
    Matrix2c m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
inline Matrix2c y() {
    Matrix2c m;
    m << 0.0, complex(0.0, -1.0), complex(0.0, 1.0), 0.0;
    return m;
}
inline Matrix2c z() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
}  // namespace pauli

/// Majorana index of flavour s (0 or 1) on site m.
inline Eigen::Index majorana_index(Eigen::Index m, int s) { return 2 * m + s; }

}  // namespace lindtopo
