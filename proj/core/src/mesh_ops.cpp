#include "taxis/mesh_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace taxis {

double integrate(const ScalarField& f) {
  const double vol = f.grid().cell_volume();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i];
  return sum * vol;
}

FaceField gradient_neumann(const ScalarField& f) {
  const Grid& g = f.grid();
  FaceField grad(g);
  const int nx = g.nx(), ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i)
      grad.comp(0)[grad.xface(i, iy)] =
          (f.at(i, iy) - f.at(i - 1, iy)) * inv_hx;
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix)
        grad.comp(1)[grad.yface(ix, j)] =
            (f.at(ix, j) - f.at(ix, j - 1)) * inv_hy;
  }
  return grad;
}

ScalarField divergence(const FaceField& F) {
  const Grid& g = F.grid();
  ScalarField div(g);
  const int nx = g.nx(), ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      div.at(ix, iy) =
          (F.comp(0)[F.xface(ix + 1, iy)] - F.comp(0)[F.xface(ix, iy)]) *
          inv_hx;
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        div.at(ix, iy) +=
            (F.comp(1)[F.yface(ix, iy + 1)] - F.comp(1)[F.yface(ix, iy)]) *
            inv_hy;
  }
  return div;
}

ScalarField laplacian_neumann(const ScalarField& f) {
  return divergence(gradient_neumann(f));
}

double gauss_green_residual(const FaceField& F, const ScalarField& divF,
                            const ScalarField& phi) {
  const Grid& g = F.grid();
  const double vol = g.cell_volume();
  const int nx = g.nx(), ny = g.ny();
  const double inv_hx = 1.0 / g.spacing(0);
  double flux_term = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i)
      flux_term += F.comp(0)[F.xface(i, iy)] *
                   (phi.at(i, iy) - phi.at(i - 1, iy)) * inv_hx;
  if (g.dim() == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix)
        flux_term += F.comp(1)[F.yface(ix, j)] *
                     (phi.at(ix, j) - phi.at(ix, j - 1)) * inv_hy;
  }
  double div_term = 0.0;
  for (std::size_t i = 0; i < divF.size(); ++i) div_term += phi[i] * divF[i];
  return flux_term * vol + div_term * vol;
}

double boundary_flux_integral(const FaceField& F, const ScalarField& phi) {
  const Grid& g = F.grid();
  const int nx = g.nx(), ny = g.ny();
  double sum = 0.0;
  // x-walls: face area is hy in 2D, 1 in 1D; outward normal flips sign
  // on the low side.
  const double ax = g.dim() == 2 ? g.spacing(1) : 1.0;
  for (int iy = 0; iy < ny; ++iy) {
    sum += F.comp(0)[F.xface(nx, iy)] * phi.at(nx - 1, iy) * ax;
    sum -= F.comp(0)[F.xface(0, iy)] * phi.at(0, iy) * ax;
  }
  if (g.dim() == 2) {
    const double ay = g.spacing(0);
    for (int ix = 0; ix < nx; ++ix) {
      sum += F.comp(1)[F.yface(ix, ny)] * phi.at(ix, ny - 1) * ay;
      sum -= F.comp(1)[F.yface(ix, 0)] * phi.at(ix, 0) * ay;
    }
  }
  return sum;
}

FaceField face_average(const ScalarField& w) {
  const Grid& g = w.grid();
  FaceField out(g);
  const int nx = g.nx(), ny = g.ny();
  for (int iy = 0; iy < ny; ++iy) {
    out.comp(0)[out.xface(0, iy)] = w.at(0, iy);
    for (int i = 1; i < nx; ++i)
      out.comp(0)[out.xface(i, iy)] =
          0.5 * (w.at(i - 1, iy) + w.at(i, iy));
    out.comp(0)[out.xface(nx, iy)] = w.at(nx - 1, iy);
  }
  if (g.dim() == 2) {
    for (int ix = 0; ix < nx; ++ix) {
      out.comp(1)[out.yface(ix, 0)] = w.at(ix, 0);
      out.comp(1)[out.yface(ix, ny)] = w.at(ix, ny - 1);
    }
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix)
        out.comp(1)[out.yface(ix, j)] =
            0.5 * (w.at(ix, j - 1) + w.at(ix, j));
  }
  return out;
}

namespace {

template <typename PerFaceX, typename PerFaceY>
double interior_face_sum(const Grid& g, const PerFaceX& fx, const PerFaceY& fy) {
  const int nx = g.nx(), ny = g.ny();
  double sum = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int i = 1; i < nx; ++i) sum += fx(i, iy);
  if (g.dim() == 2)
    for (int j = 1; j < ny; ++j)
      for (int ix = 0; ix < nx; ++ix) sum += fy(ix, j);
  return sum * g.cell_volume();
}

} // namespace

double face_inner_product(const FaceField& A, const FaceField& B) {
  const Grid& g = A.grid();
  return interior_face_sum(
      g,
      [&](int i, int iy) {
        const std::size_t f = A.xface(i, iy);
        return A.comp(0)[f] * B.comp(0)[f];
      },
      [&](int ix, int j) {
        const std::size_t f = A.yface(ix, j);
        return A.comp(1)[f] * B.comp(1)[f];
      });
}

double face_inner_product_weighted(const FaceField& A, const FaceField& B,
                                   const ScalarField& weight) {
  const Grid& g = A.grid();
  return interior_face_sum(
      g,
      [&](int i, int iy) {
        const std::size_t f = A.xface(i, iy);
        const double w = 0.5 * (weight.at(i - 1, iy) + weight.at(i, iy));
        return w * A.comp(0)[f] * B.comp(0)[f];
      },
      [&](int ix, int j) {
        const std::size_t f = A.yface(ix, j);
        const double w = 0.5 * (weight.at(ix, j - 1) + weight.at(ix, j));
        return w * A.comp(1)[f] * B.comp(1)[f];
      });
}

double integrate_product(const ScalarField& f, const ScalarField& g) {
  const double vol = f.grid().cell_volume();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return sum * vol;
}

} // namespace taxis
