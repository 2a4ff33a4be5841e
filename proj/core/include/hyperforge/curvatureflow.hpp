#pragma once

#include "hyperforge/spaceform.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperforge::curvatureflow {

using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

/// State of the defining ODE: the simple principal curvature alpha, the
/// multiplicity-two principal curvature beta, and the Hopf angle phi in
/// (0, pi/2).  a = cos(phi), b = sin(phi) are derived, never stored.
struct CurvatureState {
  double alpha;
  double beta;
  double phi;

  double a() const { return std::cos(phi); }
  double b() const { return std::sin(phi); }
};

/// Which of the two initial orbit curvatures takes multiplicity two.
/// AlphaDouble is the role-swapped branch: the labels alpha0/beta0 are
/// interchanged at initialization and the same ODE is integrated.
enum class Branch { BetaDouble, AlphaDouble };

enum class HaltReason { None, GapCollapse, AngleCollapse, StepUnderflow };

std::string to_string(Branch b);
std::string to_string(HaltReason r);
Branch branch_from_string(const std::string& s);
HaltReason halt_from_string(const std::string& s);

/// Singularity guards of the ODE right-hand side.
struct OdeLimits {
  double gap_eps = 1e-8;       // minimum |alpha - beta|
  double angle_margin = 1e-8;  // phi must stay in (margin, pi/2 - margin)
};

/// Raised by ode_rhs when a guard is violated; names the failing condition.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(HaltReason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  HaltReason reason() const { return reason_; }

 private:
  HaltReason reason_;
};

/// Right-hand side:
///   alpha' = (1/4) (c (2 - 3 sin^2 phi) + 4 alpha (alpha - beta)) tan(phi)
///   beta'  = -(3c/8) sin(2 phi)
///   phi'   = beta + c (1 - 3 sin^2 phi) / (4 (alpha - beta))
std::array<double, 3> ode_rhs(const CurvatureState& st, double c,
                              const OdeLimits& lim = {});

struct Trajectory {
  double c = 0.0;
  Branch branch = Branch::BetaDouble;
  std::vector<double> t;               // monotone grid
  std::vector<CurvatureState> states;  // one per node
  HaltReason halt = HaltReason::None;

  std::size_t size() const { return t.size(); }
};

struct IntegrateOptions {
  double initial_step = 1e-3;
  double min_step = 1e-9;
  double max_step = 1e-2;
  double fixed_step = 0.0;  // > 0 disables step control
  OdeLimits limits{};
  Branch branch = Branch::BetaDouble;
};

/// Classic RK4 with Richardson step-halving control: each step is taken as
/// one full step and two half steps; the step is halved while the Richardson
/// error estimate exceeds tol, and may double afterwards.  On a singularity
/// (gap or angle guard) the trajectory is truncated at the last good node
/// with the halt reason recorded.
Trajectory integrate(const CurvatureState& init, double c,
                     std::pair<double, double> t_span, double tol,
                     const IntegrateOptions& opts = {});

/// Data produced from an orbit point for the two-branch construction.
struct InitialData {
  CurvatureState state;  // (alpha0, beta0, phi0)
  V3 xi;                 // in-section unit normal, sign fixed by <Jw, U_p> > 0
  V3 w;                  // echo of the unit direction
};

struct InitialConditionOptions {
  double fd_step = 1e-4;        // orbit-geometry differencing step
  double hopf_margin = 1e-8;    // reject phi0 within this of {0, pi/2}
};

/// Principal curvatures of the orbit through p w.r.t. the in-section normal
/// xi_p orthogonal to w, the Hopf angle of J xi_p against the branch's
/// alpha0-eigenspace, and the orientation fix <Jw, U_p> > 0 (flipping xi_p
/// negates both curvatures).
InitialData initial_conditions_from_orbit(const SpaceFormParams& p,
                                          const SectionPoint& pt, const V3& w,
                                          Branch branch,
                                          const InitialConditionOptions& opts = {});

}  // namespace hyperforge::curvatureflow
