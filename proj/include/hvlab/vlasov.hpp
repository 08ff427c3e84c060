#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hvlab/mean_field.hpp"

namespace hvlab {

enum class VInterpolation { fourier, cubic_spline };

VInterpolation parse_v_interpolation(const std::string& name);
std::string to_string(VInterpolation v);

struct VlasovConfig {
  double dt = 0.01;
  double t_final = 1.0;
  RadialPotential potential;
  VInterpolation v_interpolation = VInterpolation::fourier;
  /// +1: vdot = -dU/dx (canonical); -1: vdot = +dU/dx.
  int force_sign = 1;
};

void validate(const VlasovConfig& cfg);

struct VlasovSample {
  double t;
  const WignerFunction& W;
  const SpatialDensity& rho;
  const Eigen::VectorXd& E;
  double energy;
};

using VlasovObserver = std::function<void(const VlasovSample&)>;

struct VlasovTrajectory {
  std::vector<double> times;
  std::vector<WignerFunction> states;
};

/// d_t W + 2 v d_x W - s dU/dx d_v W = 0, s = force_sign, Strang split
/// (half x-advection, kick, half x-advection). x-advection is an exact
/// Fourier shift per velocity column.
class VlasovPropagator {
public:
  VlasovPropagator(const PhaseSpaceGrid& grid, const VlasovConfig& cfg,
                   std::optional<ExternalField> field = std::nullopt);

  WignerFunction step(const WignerFunction& w, double t) const;

  /// W(x, v) <- W(x - 2 v tau, v)
  void advect_x(Eigen::MatrixXd& values, double tau) const;
  /// W(x, v) <- W(x, v + s E(x) tau); StabilityError when max |E| tau exceeds v_max.
  void advect_v(Eigen::MatrixXd& values, const Eigen::VectorXd& E, double tau) const;

  /// dU/dx on the grid for the density of `w` (or the external field).
  Eigen::VectorXd force(const WignerFunction& w, double t) const;
  double energy(const WignerFunction& w, double t) const;

  const VlasovConfig& config() const { return cfg_; }
  const std::optional<MeanField>& mean_field() const { return mean_field_; }

private:
  PhaseSpaceGrid grid_;
  VlasovConfig cfg_;
  std::optional<ExternalField> external_;
  std::optional<MeanField> mean_field_;
};

WignerFunction vlasov_step(const WignerFunction& w, const VlasovConfig& cfg);

/// States at t = 0 and each sample time (default: t_final).
VlasovTrajectory evolve_vlasov(const WignerFunction& w0, const VlasovConfig& cfg,
                               std::vector<double> sample_times = {},
                               const std::vector<VlasovObserver>& observers = {},
                               std::optional<ExternalField> field = std::nullopt);

}  // namespace hvlab
