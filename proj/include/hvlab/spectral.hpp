#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hvlab {

using cplx = std::complex<double>;

namespace spectral {

inline constexpr int kForward = -1;   ///< e^{-2 pi i p n / M}
inline constexpr int kBackward = +1;  ///< e^{+2 pi i p n / M}, unnormalized

/// In-place unnormalized DFT along `axis` of a row-major array of the given
/// shape (last index fastest). Plans are cached and shared between threads.
void dft_axis(cplx* data, std::span<const int> shape, int axis, int sign);

/// In-place DFT of every column (axis 0) / every row (axis 1) of a
/// column-major matrix.
void dft_columns(Eigen::MatrixXcd& a, int sign);
void dft_rows(Eigen::MatrixXcd& a, int sign);

Eigen::VectorXcd fft(const Eigen::VectorXcd& f);
/// Inverse of fft (includes the 1/n factor).
Eigen::VectorXcd ifft(const Eigen::VectorXcd& f);

/// Derivative along `axis` through the Fourier multiplier i k, for data
/// sampled on a periodic row-major grid; `periods` gives the period of each
/// axis. The Nyquist coefficient is dropped so real input stays real.
std::vector<double> spectral_derivative(std::span<const double> f, std::span<const int> shape,
                                        std::span<const double> periods, int axis);

Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& f, double period);

/// Matrix version; axis 0 differentiates down columns, axis 1 along rows.
Eigen::MatrixXd spectral_derivative(const Eigen::MatrixXd& f, int axis, double period);

/// inverse_transform(transform(f) .* kernel_hat). `kernel_hat` is in FFT
/// storage order. Throws GridMismatchError on a length mismatch.
Eigen::VectorXd periodic_convolve(const Eigen::VectorXd& f, const Eigen::VectorXcd& kernel_hat);

/// Band-limited translate: returns g(x) = f(x - shift) on the same periodic grid.
Eigen::VectorXd fourier_shift(const Eigen::VectorXd& f, double shift, double period);

}  // namespace spectral
}  // namespace hvlab
