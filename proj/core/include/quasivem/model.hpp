#pragma once

#include <functional>
#include <optional>
#include <string>

#include "quasivem/geometry.hpp"

namespace quasivem {

/// Data of  -div( mu(x, |grad u|) grad u ) = f  in the domain,  u = g  on its boundary.
///
/// `mu_min`/`mu_max` are the bounds m_mu <= mu(x, t) <= M_mu. The derivative
/// `dmu_dt` is only needed by the oscillation part of the estimator; `dmu_dx`
/// may be left empty when mu does not depend on x explicitly.
struct NonlinearModel {
  std::string name;
  std::function<double(const Point&, double)> mu;
  std::function<double(const Point&, double)> dmu_dt;
  std::function<Point(const Point&, double)> dmu_dx;
  double mu_min = 1.0;
  double mu_max = 1.0;
  std::function<double(const Point&)> f;
  std::function<double(const Point&)> g;
  std::function<double(const Point&)> exact;
  std::function<Point(const Point&)> exact_gradient;

  [[nodiscard]] bool has_exact_gradient() const { return static_cast<bool>(exact_gradient); }
};

/// Sample checks of the model assumptions on [xmin,xmax]x[ymin,ymax] and
/// t in [0, t_max]: bounds m_mu <= mu <= M_mu and monotonicity
/// m_mu (t - s) <= mu(t) t - mu(s) s <= M_mu (t - s) for t > s >= 0.
/// Throws ModelError naming the first violated condition.
void validate(const NonlinearModel& model, double xmin, double ymin, double xmax, double ymax,
              double t_max = 50.0);

/// Constant coefficient mu (the linear problem).
NonlinearModel linear_model(double mu, std::function<double(const Point&)> f,
                            std::function<double(const Point&)> g);

}  // namespace quasivem
