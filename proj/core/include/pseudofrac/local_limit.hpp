#pragma once

#include <memory>
#include <string_view>

#include "pseudofrac/eigensolver.hpp"
#include "pseudofrac/energy.hpp"

namespace pseudofrac {

enum class BBMProvenance { analytic_1d, numeric_limit };

std::string_view to_string(BBMProvenance provenance) noexcept;

/// Smooth 1-D profiles on (-1, 1), extended by zero.
enum class BumpProfile {
  cosine,   // cos(pi t / 2)
  quartic,  // (1 - t^2)^2
};

struct BBMConstant {
  int n_block = 1;
  double p = 2.0;
  double value = 0.0;
  BBMProvenance provenance = BBMProvenance::numeric_limit;
  double numeric_value = 0.0;   // extrapolated limit
  double analytic_value = 0.0;  // candidate 2/p
  bool analytic_validated = false;
};

/// (1-s) * [phi]^p_{s,p} / ||phi'||_p^p on the real line, by quadrature.
double bbm_ratio(BumpProfile profile, double s, double p);

/// Linear fit in (1-s) through s = 0.99, 0.995, 0.999, evaluated at s = 1.
double bbm_numeric_limit(BumpProfile profile, double p);

/// K_{1,p}. The candidate 2/p is used only when it matches the numeric limit
/// within 1%; otherwise the numeric value is returned. Throws
/// UnsupportedBlock for n_block != 1 and InvalidArgument outside (1, 64].
BBMConstant bbm_constant(int n_block, double p);

/// Kx h^{-p} sum |forward difference_x|^p + Ky likewise, times the cell area,
/// with zero ghost values past the ends of every run of adjacent nodes.
class LocalEnergy {
 public:
  LocalEnergy(std::shared_ptr<const Grid> grid, double p, double kx, double ky);

  double p() const { return form_.p(); }
  double kx() const { return kx_; }
  double ky() const { return ky_; }
  const DifferenceForm& form() const { return form_; }

  double energy(const GridFunction& u) const;
  EnergyBreakdown breakdown(const GridFunction& u) const;

 private:
  double kx_;
  double ky_;
  DifferenceForm form_;
};

double local_energy(const GridFunction& u, double p, double kx, double ky);

struct LocalEigenResult {
  double lambda_local = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  double log_lambda_over_p = 0.0;
};

LocalEigenResult minimize_local_rayleigh(std::shared_ptr<const Grid> grid, double p, double kx,
                                         double ky, const SolverConfig& config);

}  // namespace pseudofrac
