#pragma once

#include <cstdint>
#include <vector>

#include "laakso/ball.hpp"

namespace laakso::kernels {

/// 1 / true degree for every ball vertex.
std::vector<double> inverse_degrees(const BallGraph& g);

/// One walk step restricted to the ball, pull form, parallel over targets:
/// out[y] = sum over in-ball neighbors x of in[x] / deg(x). Mass leaving the
/// ball is dropped. Each row is summed serially in adjacency order.
void step_pull(const BallGraph& g, const std::vector<double>& inv_deg, const std::vector<double>& in,
               std::vector<double>& out, int workers);

/// Serial push-form reference for step_pull.
void step_push_serial(const BallGraph& g, const std::vector<double>& inv_deg,
                      const std::vector<double>& in, std::vector<double>& out);

/// Sum over [0, n) in fixed blocks combined serially; the result does not
/// depend on the worker count.
double blocked_dot(const double* a, const double* b, std::int64_t n, int workers);

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Mean exit times h on the open ball {d < r}: h = 1 + mean of h over
/// neighbors, h = 0 outside. Jacobi-preconditioned conjugate gradients on
/// (D - A) h = deg. Converged when max |h - 1 - avg h| <= tol * max(1, max h).
std::vector<double> solve_exit_cg(const BallGraph& g, int r, double tol, int max_iter, int workers,
                                  SolveStats* stats = nullptr);

/// Serial successive-over-relaxation reference for solve_exit_cg.
std::vector<double> solve_exit_sor(const BallGraph& g, int r, double tol, int max_sweeps,
                                   double omega = 1.0, SolveStats* stats = nullptr);

/// max over the open ball of |h(x) - 1 - mean_{y~x} h(y)|.
double exit_residual(const BallGraph& g, int r, const std::vector<double>& h);

/// Tree walk from the root augmented with the highest hub level visited.
///
/// State (x, s) where s - 1 is the largest k with hub(k) visited (s = 0 when
/// none). levels = number of s values.
struct LumpedWalk {
  BallGraph tree_ball;
  std::vector<double> inv_deg;
  std::vector<std::int32_t> hub_state;  // s assigned on entering x, 0 if x is no hub
  int levels = 1;
};

LumpedWalk make_lumped_walk(const LaaksoGraph& graph, int radius, const BallOptions& opts);

void lumped_step_pull(const LumpedWalk& w, const std::vector<double>& in, std::vector<double>& out,
                      int workers);
void lumped_step_push_serial(const LumpedWalk& w, const std::vector<double>& in,
                             std::vector<double>& out);

}  // namespace laakso::kernels
