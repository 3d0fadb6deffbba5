#pragma once

#include <complex>
#include <vector>

#include "fracgs/grid.hpp"

namespace fracgs {

/// Fractional power of -Laplacian: symbol |xi| (half) or |xi|^{1/2} (quarter).
enum class FracOrder { half, quarter };

/// (-Delta)^{order} u.
///
/// Periodic grids apply the multiplier |xi_k|^{2 order} to the DFT of the
/// samples. Whole-line grids apply the exact symbol to the band-limited
/// interpolant of the samples (zero outside the box) and restrict back to
/// the grid: a symmetric Toeplitz operator, evaluated through a 2N-point
/// circulant embedding.
Field frac_laplacian(const Field& u, FracOrder order = FracOrder::half);

/// Pointwise (-Delta)^{1/2} u(x) from the second-difference singular
/// integral. The zone |y| < cutoff uses the three-point second derivative;
/// the cutoff is snapped to a whole number (>= 1) of grid steps.
double frac_laplacian_singular(const Field& u, double x, double cutoff);

enum class SeminormMethod { spectral, double_integral };

/// ||(-Delta)^{1/4} u||^2 = (1/2pi) int int (u(x)-u(y))^2/|x-y|^2.
double gagliardo_seminorm_sq(const Field& u, SeminormMethod method = SeminormMethod::spectral);

struct Norms {
  double l2_sq = 0.0;
  double seminorm_sq = 0.0;
  double h_half_sq = 0.0;  // l2_sq + seminorm_sq
};

Norms norms(const Field& u);

/// (h sum |u_j|^p)^{1/p}; p >= 1.
double lp_norm(const Field& u, double p);

/// Unitary transform u_hat_k = sqrt(h/N) sum_j u_j e^{-2 pi i jk/N}, FFT
/// order, so that sum |u_hat_k|^2 = h sum u_j^2.
std::vector<std::complex<double>> unitary_transform(const Field& u);

double l2_inner(const Field& u, const Field& v);

/// <u, v>_{H^{1/2}} = int u v + int (-Delta)^{1/4}u (-Delta)^{1/4}v.
double h_half_inner(const Field& u, const Field& v);

/// u + (-Delta)^{1/2} u.
Field apply_h_half(const Field& u);

/// Solves (I + (-Delta)^{1/2}) g = r, the Riesz map of the H^{1/2} inner
/// product. Diagonal in Fourier space on periodic grids; preconditioned CG
/// with the circulant embedding on whole-line grids.
Field h_half_riesz(const Field& r);

/// max(|u_0|, |u_{N-1}|); fields used as stand-ins for functions on R
/// should keep this below ~1e-8.
double boundary_amplitude(const Field& u);

namespace detail {
/// int_0^1 t^mu cos(pi n t) dt. Closed form for mu = 1.
double toeplitz_moment(double mu, long n);
/// Same integral by quadrature (small n) or the asymptotic expansion.
double toeplitz_moment_numeric(double mu, long n);
}  // namespace detail

}  // namespace fracgs
