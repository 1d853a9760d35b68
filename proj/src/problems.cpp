#include "stfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stfem {

namespace {

constexpr double kPi = std::numbers::pi;

// sin-product manufactured triples share this structure: with d space
// dimensions, S(x) = prod_k sin(pi x_k), lap_x S = -d pi^2 S, and
//   u = d pi^2 S * (c2 t^2 + t),  p = -varrho S * g(t),  z = d pi^2 S * g(t),
// g(t) = a t^2 + b t + 1 with a + b + 1 = 0 so that p(.,T) = 0.
struct SinProduct {
  int d;  // space dimensions
  double a, b, c2, varrho;

  double S(const Point& x) const {
    double s = 1.0;
    for (int k = 0; k < d; ++k) s *= std::sin(kPi * x[k]);
    return s;
  }
  SpatialGrad gradS(const Point& x) const {
    SpatialGrad g{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
      double v = kPi;
      for (int j = 0; j < d; ++j)
        v *= (j == k) ? std::cos(kPi * x[j]) : std::sin(kPi * x[j]);
      g[k] = v;
    }
    return g;
  }
  double g(double t) const { return (a * t + b) * t + 1.0; }
  double dg(double t) const { return 2.0 * a * t + b; }
  double time_u(double t) const { return (c2 * t + 1.0) * t; }
  double dtime_u(double t) const { return 2.0 * c2 * t + 1.0; }
};

ExactScalar make_u(const SinProduct& sp) {
  const double amp = sp.d * kPi * kPi;
  ExactScalar u;
  u.value = [sp, amp](const Point& x) { return amp * sp.S(x) * sp.time_u(x[sp.d]); };
  u.grad_x = [sp, amp](const Point& x) {
    SpatialGrad g = sp.gradS(x);
    const double f = amp * sp.time_u(x[sp.d]);
    for (double& v : g) v *= f;
    return g;
  };
  u.dt = [sp, amp](const Point& x) { return amp * sp.S(x) * sp.dtime_u(x[sp.d]); };
  u.lap_x = [sp, amp](const Point& x) {
    return -sp.d * kPi * kPi * amp * sp.S(x) * sp.time_u(x[sp.d]);
  };
  return u;
}

ExactScalar make_p(const SinProduct& sp) {
  ExactScalar p;
  p.value = [sp](const Point& x) { return -sp.varrho * sp.S(x) * sp.g(x[sp.d]); };
  p.grad_x = [sp](const Point& x) {
    SpatialGrad g = sp.gradS(x);
    const double f = -sp.varrho * sp.g(x[sp.d]);
    for (double& v : g) v *= f;
    return g;
  };
  p.dt = [sp](const Point& x) { return -sp.varrho * sp.S(x) * sp.dg(x[sp.d]); };
  p.lap_x = [sp](const Point& x) {
    return sp.d * kPi * kPi * sp.varrho * sp.S(x) * sp.g(x[sp.d]);
  };
  return p;
}

ExactScalar make_z(const SinProduct& sp) {
  const double amp = sp.d * kPi * kPi;
  ExactScalar z;
  z.value = [sp, amp](const Point& x) { return amp * sp.S(x) * sp.g(x[sp.d]); };
  return z;
}

ProblemSpec sin_product_problem(std::string name, int d) {
  const double pi2 = kPi * kPi;
  const double den = d * pi2 + 2.0;
  SinProduct sp;
  sp.d = d;
  sp.varrho = 0.01;
  sp.a = -(d * d * pi2 * pi2 + d * pi2) / den;
  sp.b = (d * d * pi2 * pi2 - 2.0) / den;
  sp.c2 = -(d * pi2 + 1.0) / den;

  ProblemSpec prob;
  prob.name = std::move(name);
  prob.dim = d + 1;
  prob.varrho = sp.varrho;
  prob.exact_u = make_u(sp);
  prob.exact_p = make_p(sp);
  prob.exact_z = make_z(sp);
  // Target from the adjoint equation: u_d = u + dt p + lap_x p.
  const ExactScalar u = *prob.exact_u;
  const ExactScalar p = *prob.exact_p;
  prob.u_d = [u, p](const Point& x) { return u.value(x) + p.dt(x) + p.lap_x(x); };
  return prob;
}

}  // namespace

std::array<double, 3> ProblemSpec::consistency_residuals(const Point& x) const {
  if (!exact_u || !exact_p || !exact_z)
    throw std::logic_error("consistency_residuals: no exact triple");
  const double primal = exact_u->dt(x) - exact_u->lap_x(x) - exact_z->value(x);
  const double adjoint =
      -exact_p->dt(x) - exact_p->lap_x(x) - (exact_u->value(x) - u_d(x));
  const double gradient = exact_p->lap_x(x) - varrho * exact_z->value(x);
  return {primal, adjoint, gradient};
}

ProblemSpec example1() {
  ProblemSpec prob = sin_product_problem("example1", 2);
  prob.J_exact = 4.53541e-1;
  return prob;
}

ProblemSpec example2() {
  ProblemSpec prob;
  prob.name = "example2";
  prob.dim = 3;
  prob.varrho = 1e-4;
  prob.u_d = [](const Point& x) {
    const double dx = x[0] - 0.5, dy = x[1] - 0.5, dt = x[2] - 0.5;
    return std::sqrt(dx * dx + dy * dy + dt * dt) <= 0.25 ? 1.0 : 0.0;
  };
  return prob;
}

ProblemSpec example3() {
  ProblemSpec prob = sin_product_problem("example3", 3);
  prob.J_exact = 7.818e-1;
  return prob;
}

ProblemSpec forward_heat(int dim) {
  if (dim < 2 || dim > 4) throw std::invalid_argument("forward_heat: dim must be in {2,3,4}");
  const int d = dim - 1;
  ProblemSpec prob;
  prob.name = "forward" + std::to_string(dim);
  prob.dim = dim;
  prob.forward_only = true;

  auto S = [d](const Point& x) {
    double s = 1.0;
    for (int k = 0; k < d; ++k) s *= std::sin(kPi * x[k]);
    return s;
  };
  ExactScalar u;
  u.value = [S, d](const Point& x) { return S(x) * x[d]; };
  u.grad_x = [S, d](const Point& x) {
    SpatialGrad g{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) {
      double v = kPi * x[d];
      for (int j = 0; j < d; ++j)
        v *= (j == k) ? std::cos(kPi * x[j]) : std::sin(kPi * x[j]);
      g[k] = v;
    }
    return g;
  };
  u.dt = [S](const Point& x) { return S(x); };
  u.lap_x = [S, d](const Point& x) { return -d * kPi * kPi * S(x) * x[d]; };

  prob.exact_u = u;
  prob.forward_source = [S, d](const Point& x) {
    return S(x) * (1.0 + d * kPi * kPi * x[d]);  // dt u - lap u
  };
  prob.u_d = [](const Point&) { return 0.0; };
  return prob;
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  if (name == "forward2") return forward_heat(2);
  if (name == "forward3") return forward_heat(3);
  if (name == "forward4") return forward_heat(4);
  throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
  return {"example1", "example2", "example3", "forward2", "forward3", "forward4"};
}

}  // namespace stfem
