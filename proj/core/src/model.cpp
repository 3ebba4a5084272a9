#include "quasivem/model.hpp"

#include <random>

#include "quasivem/error.hpp"

namespace quasivem {

void validate(const NonlinearModel& model, double xmin, double ymin, double xmax, double ymax,
              double t_max) {
  if (!model.mu) throw ModelError("model has no coefficient mu");
  if (!model.f) throw ModelError("model has no right-hand side f");
  if (!model.g) throw ModelError("model has no Dirichlet datum g");
  if (!(model.mu_min > 0.0) || model.mu_max < model.mu_min) {
    throw ModelError("model bounds must satisfy 0 < m_mu <= M_mu");
  }
  constexpr int grid = 8;
  constexpr double slack = 1e-12;
  std::mt19937_64 engine(12345);
  auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const Point x(xmin + (xmax - xmin) * i / grid, ymin + (ymax - ymin) * j / grid);
      for (int k = 0; k <= 4 * grid; ++k) {
        const double t = t_max * k / (4 * grid);
        const double m = model.mu(x, t);
        if (m < model.mu_min * (1 - slack) || m > model.mu_max * (1 + slack)) {
          throw ModelError("mu(x, t) leaves [m_mu, M_mu] at t = " + std::to_string(t));
        }
      }
      for (int k = 0; k < 16; ++k) {
        double s = t_max * uniform();
        double t = t_max * uniform();
        if (s > t) std::swap(s, t);
        if (t - s < 1e-8) continue;
        const double flux = model.mu(x, t) * t - model.mu(x, s) * s;
        if (flux < model.mu_min * (t - s) * (1 - 1e-9) ||
            flux > model.mu_max * (t - s) * (1 + 1e-9)) {
          throw ModelError("mu(x, t) t is not strongly monotone and Lipschitz between s = " +
                           std::to_string(s) + " and t = " + std::to_string(t));
        }
      }
    }
  }
}

NonlinearModel linear_model(double mu, std::function<double(const Point&)> f,
                            std::function<double(const Point&)> g) {
  NonlinearModel model;
  model.name = "linear";
  model.mu = [mu](const Point&, double) { return mu; };
  model.dmu_dt = [](const Point&, double) { return 0.0; };
  model.mu_min = mu;
  model.mu_max = mu;
  model.f = std::move(f);
  model.g = std::move(g);
  return model;
}

}  // namespace quasivem
