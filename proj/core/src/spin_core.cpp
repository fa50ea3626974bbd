#include "gpd/spin_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gpd {

std::string to_string(Level l) { return l == Level::Plus ? "+" : "-"; }

FieldParams FieldParams::make(double B, double theta, double omega0) {
  if (!std::isfinite(B) || !std::isfinite(theta) || !std::isfinite(omega0))
    throw std::invalid_argument("FieldParams: non-finite parameter");
  if (B <= 0.0) throw std::invalid_argument("FieldParams: B must be > 0, got " + std::to_string(B));
  if (theta < 0.0 || theta > pi)
    throw std::invalid_argument("FieldParams: theta must lie in [0, pi], got " +
                                std::to_string(theta));
  return FieldParams{B, theta, omega0};
}

double FieldParams::period() const {
  if (omega0 == 0.0) throw std::domain_error("FieldParams: period undefined for omega0 = 0");
  return two_pi / std::abs(omega0);
}

std::array<double, 3> FieldParams::field_vector(double t) const {
  const double phi = omega0 * t;
  const double s = std::sin(theta);
  return {B * s * std::cos(phi), B * s * std::sin(phi), B * std::cos(theta)};
}

double theta0(const FieldParams& f) {
  return std::atan2(f.omega0 * std::sin(f.theta), f.B + f.omega0 * std::cos(f.theta));
}

double level_gap(const FieldParams& f) {
  const double r2 = f.B * f.B + f.omega0 * f.omega0 + 2.0 * f.B * f.omega0 * std::cos(f.theta);
  return std::sqrt(std::max(r2, 0.0));
}

BasisPair basis_pair(const FieldParams& f, double t) {
  BasisPair p;
  p.vartheta = f.theta - theta0(f);
  p.phi = f.omega0 * t;
  const double c = std::cos(0.5 * p.vartheta);
  const double s = std::sin(0.5 * p.vartheta);
  const cplx rot = std::polar(1.0, -p.phi);
  p.w_plus = {rot * c, cplx(s)};
  p.w_minus = {rot * s, cplx(-c)};
  return p;
}

double sigma_z_element(const FieldParams& f, Level m, Level l) {
  const double vt = f.theta - theta0(f);
  if (m == l) return level_sign(m) * std::cos(vt);
  return std::sin(vt);
}

EffectiveEnergies effective_energies(const FieldParams& f) {
  const double t0 = theta0(f);
  const double cb = std::cos(f.theta - t0);
  const double half_b = 0.5 * f.B * std::cos(t0);
  return {-half_b - 0.5 * f.omega0 * (1.0 + cb), half_b - 0.5 * f.omega0 * (1.0 - cb)};
}

Level upper_level(const FieldParams& f) {
  const auto e = effective_energies(f);
  return e.e_plus > e.e_minus ? Level::Plus : Level::Minus;
}

double geometric_energy_bare(const FieldParams& f, Level level) {
  return 0.5 * f.omega0 * (1.0 + level_sign(level) * std::cos(f.theta - theta0(f)));
}

Spinor exact_amplitude(const FieldParams& f, Level level, double t) {
  const double e = effective_energies(f)[level];
  return std::polar(1.0, -e * t) * basis_pair(f, t)[level];
}

std::vector<Spinor> basis_trajectory(const FieldParams& f, Level level, double t_final,
                                     int nodes) {
  if (nodes < 1) throw std::invalid_argument("basis_trajectory: nodes must be >= 1");
  std::vector<Spinor> path;
  path.reserve(static_cast<std::size_t>(nodes) + 1);
  for (int i = 0; i <= nodes; ++i) {
    const double t = t_final * static_cast<double>(i) / static_cast<double>(nodes);
    path.push_back(basis_pair(f, t)[level]);
  }
  return path;
}

double lattice_geometric_phase(std::span<const Spinor> path) {
  if (path.size() < 2) throw std::invalid_argument("lattice_geometric_phase: need >= 2 samples");
  double connection = 0.0;
  double carry = 0.0;  // compensated summation
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double y = std::arg(inner(path[i], path[i + 1])) - carry;
    const double s = connection + y;
    carry = (s - connection) - y;
    connection = s;
  }
  return wrap_phase(std::arg(inner(path.front(), path.back())) - connection);
}

double geometric_phase(const FieldParams& f, Level level, double t_final) {
  if (!(t_final > 0.0)) throw std::invalid_argument("geometric_phase: t_final must be > 0");
  const cplx overlap = inner(basis_pair(f, 0.0)[level], basis_pair(f, t_final)[level]);
  return wrap_phase(std::arg(overlap) + t_final * geometric_energy_bare(f, level));
}

double geometric_phase_quadrature(const FieldParams& f, Level level, double t_final,
                                  int nodes) {
  if (!(t_final > 0.0))
    throw std::invalid_argument("geometric_phase_quadrature: t_final must be > 0");
  const auto path = basis_trajectory(f, level, t_final, nodes);
  return lattice_geometric_phase(path);
}

double cyclic_geometric_phase(const FieldParams& f, Level level) {
  return wrap_phase(f.rotation_sign() * pi *
                    (1.0 + level_sign(level) * std::cos(f.theta - theta0(f))));
}

}  // namespace gpd
