#pragma once

#include <functional>
#include <vector>

#include "hvlab/vlasov.hpp"

namespace hvlab {

struct CharacteristicsState {
  double x = 0.0;
  double v = 0.0;
  double t = 0.0;
};

/// Field E(t, x) = dU/dx available on [t_min, t_max].
struct FrozenField {
  std::function<double(double t, double x)> E;
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Field snapshots on the grid, interpolated linearly in time and by the
/// trigonometric interpolant in x. `times` must be increasing.
FrozenField snapshot_field(const PhaseSpaceGrid& grid, std::vector<double> times,
                           std::vector<Eigen::VectorXd> snapshots);

/// RK4 for xdot = 2 v, vdot = -s E(t, x) from (x0, v0) at field.t_min to time t,
/// with step at most cfg.dt and s = cfg.force_sign. DomainError if t lies
/// outside the field's time range.
CharacteristicsState flow_map(double x0, double v0, double t, const VlasovConfig& cfg, const FrozenField& field);

}  // namespace hvlab
