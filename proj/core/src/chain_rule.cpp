#include "taxis/certify.hpp"

#include "taxis/mesh_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace taxis {

namespace {

// Cell average of a face-squared quantity: (left^2 + right^2)/2 summed
// over axes, second-order at cell centers.
ScalarField cell_average_square(const FaceField& A) {
  const Grid& g = A.grid();
  ScalarField out(g, 0.0);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      const double l = A.comp(0)[A.xface(ix, iy)];
      const double r = A.comp(0)[A.xface(ix + 1, iy)];
      out.at(ix, iy) += 0.5 * (l * l + r * r);
    }
  if (g.dim() == 2)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int ix = 0; ix < g.nx(); ++ix) {
        const double d = A.comp(1)[A.yface(ix, iy)];
        const double u = A.comp(1)[A.yface(ix, iy + 1)];
        out.at(ix, iy) += 0.5 * (d * d + u * u);
      }
  return out;
}

} // namespace

double chain_rule_residual(const ModelSpec& spec, const Sigma& sigma,
                           const Grid& grid, const ManufacturedPair& fields,
                           double t) {
  const double a = spec.a, b = spec.b;
  ScalarField u(grid), v(grid);
  u.fill_from([&](double x, double y) { return fields.u(x, y, t); });
  v.fill_from([&](double x, double y) { return fields.v(x, y, t); });
  if (!(u.min() > 0.0) || !(u.max() < spec.n) || !(v.min() > 0.0) ||
      !(v.max() < spec.l))
    throw std::invalid_argument(
        "chain_rule_residual: fields must stay strictly inside (0,n)x(0,l)");

  const double ms = m_star(spec, sigma);

  // pointwise model quantities
  ScalarField c_cell(grid), prod_half(grid), vb_half(grid), prod_ab(grid),
      vb_b(grid), B1(grid), B4(grid), coef_yy(grid), reaction(grid);
  std::vector<FDerivs> derivs(grid.num_cells());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = u[i], vi = v[i];
    const double ub = cutoff(ui, spec.n);
    const double vb = cutoff(vi, spec.l);
    c_cell[i] = sigma(ui, vi);
    prod_half[i] = std::pow(ub, 0.5 * a) * std::pow(vb, 0.5 * b);
    vb_half[i] = std::pow(vb, 0.5 * b);
    prod_ab[i] = std::pow(ub, a) * std::pow(vb, b);
    vb_b[i] = std::pow(vb, b);
    const CoefficientBundle cb = b_coefficients(spec, sigma, ui, vi, ms);
    B1[i] = cb.B1;
    B4[i] = cb.B4;
    coef_yy[i] = 4.0 * (b - 1.0) / b * (spec.M0 - ms) + cb.B2;
    reaction[i] = cb.Bnew - cb.B5 * ui;
    derivs[i] = f_derivs(spec, ui, vi);
  }

  // left side: dF/dt with the time derivatives substituted from the
  // spatial operators (centered flux, no upwinding: identity check)
  FaceField Fu = gradient_neumann(u);
  const FaceField Gv = gradient_neumann(v);
  const FaceField cf = face_average(c_cell);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    auto& fu = Fu.comp(axis);
    const auto& gv = Gv.comp(axis);
    const auto& cc = cf.comp(axis);
    for (std::size_t f = 0; f < fu.size(); ++f) fu[f] -= cc[f] * gv[f];
  }
  const ScalarField Ru = divergence(Fu);
  const ScalarField lap_v = laplacian_neumann(v);

  // right side blocks
  FaceField XpB1Y = gradient_neumann(prod_half);
  const FaceField Y = gradient_neumann(vb_half);
  const FaceField B1f = face_average(B1);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    auto& z = XpB1Y.comp(axis);
    const auto& y = Y.comp(axis);
    const auto& b1 = B1f.comp(axis);
    for (std::size_t f = 0; f < z.size(); ++f) z[f] += b1[f] * y[f];
  }
  const ScalarField sq1 = cell_average_square(XpB1Y);
  const ScalarField sq2 = cell_average_square(Y);

  FaceField div_arg = gradient_neumann(prod_ab);
  const FaceField Yb = gradient_neumann(vb_b);
  const FaceField B4f = face_average(B4);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    auto& z = div_arg.comp(axis);
    const auto& yb = Yb.comp(axis);
    const auto& b4 = B4f.comp(axis);
    for (std::size_t f = 0; f < z.size(); ++f) z[f] += b4[f] * yb[f];
  }
  const ScalarField div_term = divergence(div_arg);

  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double Rv = lap_v[i] - v[i] + u[i];
    const double lhs = derivs[i].Fu * Ru[i] + derivs[i].Fv * Rv;
    const double rhs = -4.0 * (a - 1.0) / a * sq1[i] - coef_yy[i] * sq2[i] +
                       div_term[i] + reaction[i];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

ConvergenceTable chain_rule_convergence(const ModelSpec& spec,
                                        const Sigma& sigma,
                                        const ManufacturedPair& fields,
                                        double t, int dim,
                                        const std::vector<int>& cell_counts,
                                        double extent) {
  ConvergenceTable table;
  for (int n : cell_counts) {
    Grid g = dim == 1 ? Grid(1, {extent, 1.0}, {n, 1})
                      : Grid(2, {extent, extent}, {n, n});
    table.cells.push_back(n);
    table.residuals.push_back(chain_rule_residual(spec, sigma, g, fields, t));
  }
  for (std::size_t i = 0; i + 1 < table.residuals.size(); ++i)
    table.orders.push_back(
        std::log2(table.residuals[i] / table.residuals[i + 1]));
  return table;
}

} // namespace taxis
