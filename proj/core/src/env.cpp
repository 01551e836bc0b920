#include "fsc/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsc {

// --- MountainCar --------------------------------------------------------

MountainCar::MountainCar(double reward_sigma) : reward_sigma_(reward_sigma) {
  spec_.name = "mountain_car";
  spec_.state_dim = 2;
  spec_.action_count = 3;
  spec_.low = Eigen::Vector2d(-1.2, -0.07);
  spec_.high = Eigen::Vector2d(0.6, 0.07);
  spec_.step_cap = 2000;
}

Eigen::VectorXd MountainCar::reset(Rng& rng) const {
  return Eigen::Vector2d(rng.uniform(-0.6, -0.4), 0.0);
}

Transition mc_step(const Eigen::VectorXd& s, int a, double noise_sigma, Rng& rng) {
  if (a < 0 || a > 2) throw std::invalid_argument("mc_step: action out of range");
  if (s.size() != 2) throw std::invalid_argument("mc_step: state must be 2-d");
  const double pos = s(0), vel = s(1);
  double vel2 = vel + 0.001 * (a - 1) - 0.0025 * std::cos(3.0 * pos);
  vel2 = std::clamp(vel2, -0.07, 0.07);
  double pos2 = std::clamp(pos + vel2, -1.2, 0.6);
  Transition t;
  t.s = s;
  t.a = a;
  t.s_next = Eigen::Vector2d(pos2, vel2);
  t.r = noise_sigma > 0.0 ? rng.normal(-1.0, noise_sigma) : -1.0;
  t.terminal = pos2 >= 0.5;
  return t;
}

Transition MountainCar::step(const Eigen::VectorXd& s, int a, Rng& rng) const {
  return mc_step(s, a, reward_sigma_, rng);
}

// --- MazeGridWorld ------------------------------------------------------

MazeGridWorld::MazeGridWorld() {
  spec_.name = "maze_grid_world";
  spec_.state_dim = 2;
  spec_.action_count = 4;
  spec_.low = Eigen::Vector2d(0.0, 0.0);
  spec_.high = Eigen::Vector2d(1.0, 1.0);
  spec_.step_cap = 2000;
}

Eigen::VectorXd MazeGridWorld::reset(Rng&) const {
  return geometry_.start;
}

namespace {
const MazeGeometry kMazeGeometry{};

Eigen::Vector2d action_dir(int a) {
  switch (a) {
    case 0: return {0.0, 1.0};   // up
    case 1: return {0.0, -1.0};  // down
    case 2: return {-1.0, 0.0};  // left
    case 3: return {1.0, 0.0};   // right
    default: throw std::invalid_argument("maze_step: action out of range");
  }
}
}  // namespace

Transition maze_step(const Eigen::VectorXd& s, int a, Rng& rng) {
  if (s.size() != 2) throw std::invalid_argument("maze_step: state must be 2-d");
  const Eigen::Vector2d dir = action_dir(a);
  Eigen::Vector2d proposed = Eigen::Vector2d(s) + 0.05 * dir;
  proposed.x() += rng.normal(0.0, 0.01);
  proposed.y() += rng.normal(0.0, 0.01);
  proposed = proposed.cwiseMax(0.0).cwiseMin(1.0);

  Transition t;
  t.s = s;
  t.a = a;
  if (kMazeGeometry.inside_wall(proposed)) {
    t.s_next = s;  // reject-and-stay
  } else {
    t.s_next = proposed;
  }
  t.r = -1.0;
  t.terminal = kMazeGeometry.in_goal(Eigen::Vector2d(t.s_next(0), t.s_next(1)));
  return t;
}

Transition MazeGridWorld::step(const Eigen::VectorXd& s, int a, Rng& rng) const {
  return maze_step(s, a, rng);
}

std::unique_ptr<Environment> make_environment(const std::string& name, double reward_sigma) {
  if (name == "mountain_car") return std::make_unique<MountainCar>(reward_sigma);
  if (name == "maze_grid_world") return std::make_unique<MazeGridWorld>();
  throw std::invalid_argument("unknown environment: " + name);
}

int scripted_mountain_car_action(const Eigen::VectorXd& s) {
  // Energy pumping: push along the current velocity.
  return s(1) >= 0.0 ? 2 : 0;
}

int scripted_maze_action(const Eigen::VectorXd& s, const MazeGeometry& geo) {
  // Walk waypoint-to-waypoint through the three holes, then to the goal.
  const auto centers = geo.hole_centers();
  Eigen::Vector2d target(0.95, 0.95);
  for (const auto& c : centers) {
    if (s(0) < c.x() + 0.03) {  // next un-passed hole, left to right
      target = c;
      break;
    }
  }
  const double dx = target.x() - s(0);
  const double dy = target.y() - s(1);
  // Line up with the hole vertically before pushing through the wall.
  if (std::abs(dy) > 0.02 && target != Eigen::Vector2d(0.95, 0.95)) return dy > 0 ? 0 : 1;
  if (std::abs(dx) >= std::abs(dy)) return dx > 0 ? 3 : 2;
  return dy > 0 ? 0 : 1;
}

}  // namespace fsc
