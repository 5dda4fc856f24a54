#pragma once
// Time evolution: unitary propagation of time-dependent Hamiltonians, process
// fidelity, Lindblad master-equation integration, and steady states via the
// vectorized Liouvillian.

#include <functional>
#include <utility>
#include <vector>

#include "fluxkit/operators.hpp"

namespace fluxkit {

// U(t1, t0) by midpoint-exponential stepping, with the whole-interval step
// count doubled until max|U_n - U_2n| < tol. Throws if tol is not reached
// within 2^22 steps.
Mat propagate(const TimeDependentOperator& h, double t0, double t1, double tol = 1e-8);

// u^n by binary exponentiation (n >= 0).
Mat matrix_power(const Mat& u, long long n);

// |Tr(u^dag v)| / dim: 1 iff u = v up to a global phase.
double process_fidelity(const Mat& u, const Mat& v);

// Jump operator with its rate (the rate multiplies L rho L^dag etc. directly).
struct Jump {
  Mat op;
  double rate = 0.0;
};

// Fixed-step RK4 integration of
//   drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2)
// up to t_final. No renormalization is applied; trace drift is a diagnostic.
// `observer`, when set, is called at t = 0 and after every `sample_stride`
// steps (and at t_final).
Mat lindblad_evolve(const Mat& h, const std::vector<Jump>& jumps, Mat rho0, double t_final,
                    double dt, const std::function<void(double, const Mat&)>& observer = nullptr,
                    int sample_stride = 1);

// The Lindblad right-hand side at rho (useful as a fixed-point residual).
Mat lindblad_rhs(const Mat& h, const std::vector<Jump>& jumps, const Mat& rho);

// Unique steady state of the Lindbladian via the null space of the vectorized
// Liouvillian (column-major vec, vec(A rho B) = (B^T (x) A) vec(rho)).
// Throws if the null space is degenerate (second singular value < 1e-8) or if
// the result is non-positive beyond -1e-8. Result is Hermitized and
// trace-normalized.
Mat steady_state(const Mat& h, const std::vector<Jump>& jumps);

}  // namespace fluxkit
