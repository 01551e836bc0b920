#pragma once

#include <Eigen/Core>
#include <array>
#include <memory>
#include <string>

#include "fsc/rng.hpp"

namespace fsc {

struct EnvSpec {
  std::string name;
  int state_dim = 0;
  int action_count = 0;
  Eigen::VectorXd low, high;  // per-dimension bounds
  int step_cap = 2000;

  bool in_bounds(const Eigen::VectorXd& s) const {
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) < low(i) || s(i) > high(i)) return false;
    return true;
  }
  Eigen::VectorXd clip(Eigen::VectorXd s) const {
    return s.cwiseMax(low).cwiseMin(high);
  }
};

struct Transition {
  Eigen::VectorXd s;
  int a = 0;
  Eigen::VectorXd s_next;
  double r = 0.0;
  bool terminal = false;
};

/// Benchmark environment interface. step() may be called from arbitrary
/// in-bounds states, which is what makes the same dynamics usable as the
/// planning "true model".
class Environment {
public:
  virtual ~Environment() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) const = 0;
  virtual Transition step(const Eigen::VectorXd& s, int a, Rng& rng) const = 0;
  virtual bool is_goal(const Eigen::VectorXd& s) const = 0;
};

// --- MountainCar --------------------------------------------------------

/// Classic mountain car: position in [-1.2, 0.6], velocity in [-0.07, 0.07],
/// actions {0: push left, 1: coast, 2: push right}. -1 reward per step with
/// optional Gaussian reward noise; terminal at position >= 0.5.
class MountainCar : public Environment {
public:
  explicit MountainCar(double reward_sigma = 0.0);
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) const override;
  Transition step(const Eigen::VectorXd& s, int a, Rng& rng) const override;
  bool is_goal(const Eigen::VectorXd& s) const override { return s(0) >= 0.5; }
  double reward_sigma() const { return reward_sigma_; }

private:
  EnvSpec spec_;
  double reward_sigma_;
};

Transition mc_step(const Eigen::VectorXd& s, int a, double noise_sigma, Rng& rng);

// --- MazeGridWorld ------------------------------------------------------

/// Fixed maze geometry: three vertical walls of width 0.1 whose holes (height
/// 0.1) sit at staggered heights; goal box in the top-right corner.
struct MazeGeometry {
  struct Wall {
    double x_lo, x_hi;   // wall slab extent
    double hole_lo, hole_hi;  // passable y-range inside the slab
  };
  static constexpr int kWallCount = 3;
  Wall walls[kWallCount] = {
      {0.2, 0.3, 0.4, 0.5},
      {0.4, 0.5, 0.9, 1.0},
      {0.7, 0.8, 0.1, 0.2},
  };
  double goal_lo = 0.9;  // goal box [goal_lo,1]^2
  Eigen::Vector2d start{0.05, 0.05};

  bool inside_wall(const Eigen::Vector2d& p) const {
    for (const Wall& w : walls) {
      if (p.x() >= w.x_lo && p.x() <= w.x_hi && !(p.y() >= w.hole_lo && p.y() <= w.hole_hi))
        return true;
    }
    return false;
  }
  bool in_goal(const Eigen::Vector2d& p) const {
    return p.x() >= goal_lo && p.y() >= goal_lo;
  }
  /// Centers of the three hole squares, used by queue statistics.
  std::array<Eigen::Vector2d, 3> hole_centers() const {
    return {Eigen::Vector2d{0.25, 0.45}, Eigen::Vector2d{0.45, 0.95}, Eigen::Vector2d{0.75, 0.15}};
  }
};

/// Continuous maze on [0,1]^2 with actions {0: up, 1: down, 2: left,
/// 3: right}; each action moves 0.05 plus N(0, 0.01^2) noise per coordinate.
/// Moves into wall material are rejected (the agent stays put).
class MazeGridWorld : public Environment {
public:
  MazeGridWorld();
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng&) const override;
  Transition step(const Eigen::VectorXd& s, int a, Rng& rng) const override;
  bool is_goal(const Eigen::VectorXd& s) const override {
    return geometry_.in_goal(Eigen::Vector2d(s(0), s(1)));
  }
  const MazeGeometry& geometry() const { return geometry_; }

private:
  EnvSpec spec_;
  MazeGeometry geometry_;
};

Transition maze_step(const Eigen::VectorXd& s, int a, Rng& rng);

std::unique_ptr<Environment> make_environment(const std::string& name, double reward_sigma);

/// Hand-coded policies that reach each goal within the step cap; used to
/// guard against broken dynamics.
int scripted_mountain_car_action(const Eigen::VectorXd& s);
int scripted_maze_action(const Eigen::VectorXd& s, const MazeGeometry& geo);

}  // namespace fsc
