#include "gainterm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gainterm::grid {

using cplx = std::complex<double>;

VelocityGrid VelocityGrid::make(int n, double half_width) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("VelocityGrid: n must be even and >= 8");
  if (!(half_width > 0.0))
    throw std::invalid_argument("VelocityGrid: half_width must be positive");
  return {n, half_width};
}

// ---- DFT ------------------------------------------------------------------

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// in-place radix-2, sign = -1 forward lattice transform, +1 inverse
void fft_pow2(cplx* a, int n, int sign) {
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * M_PI / len;
    cplx wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        cplx u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// direct transform for non-power-of-two lines (grids are small)
void dft_direct(cplx* a, int n, int sign, const std::vector<cplx>& table) {
  std::vector<cplx> out(n);
  for (int j = 0; j < n; ++j) {
    cplx acc{};
    for (int i = 0; i < n; ++i) {
      int idx = static_cast<int>((static_cast<long long>(i) * j) % n);
      cplx tw = table[idx];
      if (sign > 0) tw = std::conj(tw);
      acc += a[i] * tw;
    }
    out[j] = acc;
  }
  std::copy(out.begin(), out.end(), a);
}

void transform_axes(GridFunction& gf, int sign) {
  const int n = gf.grid.n;
  std::vector<cplx> line(n);
  std::vector<cplx> table;
  if (!is_pow2(n)) {
    table.resize(n);
    for (int i = 0; i < n; ++i)
      table[i] = std::polar(1.0, -2.0 * M_PI * i / n);
  }
  auto run_line = [&](cplx* p) {
    if (is_pow2(n)) fft_pow2(p, n, sign);
    else dft_direct(p, n, sign, table);
  };
  // axis 2 (contiguous)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) run_line(&gf.values[gf.grid.index(i, j, 0)]);
  // axis 1
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) line[j] = gf.at(i, j, k);
      run_line(line.data());
      for (int j = 0; j < n; ++j) gf.at(i, j, k) = line[j];
    }
  // axis 0
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) line[i] = gf.at(i, j, k);
      run_line(line.data());
      for (int i = 0; i < n; ++i) gf.at(i, j, k) = line[i];
    }
}

// (-1)^{i+j+k} checkerboard accounting for the -L grid offset
void checkerboard(GridFunction& gf) {
  const int n = gf.grid.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if ((i + j + k) & 1) gf.at(i, j, k) = -gf.at(i, j, k);
}

}  // namespace

GridFunction dft(const GridFunction& gf, Direction dir) {
  if (gf.values.size() != gf.grid.size())
    throw std::invalid_argument("dft: value count does not match grid");
  GridFunction out = gf;
  const double L = gf.grid.half_width;
  const int n = gf.grid.n;
  if (dir == Direction::Forward) {
    transform_axes(out, -1);
    checkerboard(out);
    const double scale = std::pow(2.0 * L / n, 3);  // h^3
    for (auto& v : out.values) v *= scale;
  } else {
    checkerboard(out);
    transform_axes(out, +1);
    const double scale = 1.0 / (8.0 * L * L * L);  // (dxi)^3 (2pi)^-3
    for (auto& v : out.values) v *= scale;
  }
  return out;
}

namespace {
double l1_lattice(const GridFunction& gf) {
  double acc = 0.0;
  for (const auto& v : gf.values) acc += std::abs(v);
  return acc * std::pow(gf.grid.h(), 3);
}
}  // namespace

GridFunction apply_dpow(const GridFunction& gf, double s) {
  GridFunction hat = dft(gf, Direction::Forward);
  if (s < 0.0) {
    double mean = std::abs(hat.values[0]);
    if (mean > 1e-10 * std::max(l1_lattice(gf), 1e-300))
      throw std::domain_error(
          "apply_dpow: negative order requires mean-zero input (|fhat(0)| = " +
          std::to_string(mean) + ")");
  }
  const int n = hat.grid.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double x2 = norm2(hat.grid.dual_node(i, j, k));
        cplx& v = hat.at(i, j, k);
        if (x2 == 0.0) {
          if (s != 0.0) v = 0.0;
        } else {
          v *= std::pow(x2, 0.5 * s);
        }
      }
  return dft(hat, Direction::Inverse);
}

NormSpec NormSpec::lebesgue(double p, double q) {
  if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p >= 1 required");
  return {Kind::Lebesgue, p, q, 0.0};
}
NormSpec NormSpec::sobolev_hom(double alpha) {
  return {Kind::SobolevHom, 2.0, 0.0, alpha};
}
NormSpec NormSpec::sobolev_inhom(double alpha) {
  return {Kind::SobolevInhom, 2.0, 0.0, alpha};
}

double norm(const GridFunction& gf, const NormSpec& spec) {
  const int n = gf.grid.n;
  if (spec.kind == NormSpec::Kind::Lebesgue) {
    if (std::isinf(spec.p)) {
      double m = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            m = std::max(m, std::abs(gf.at(i, j, k)) *
                                std::pow(jbracket(gf.grid.node(i, j, k)), spec.weight_q));
      return m;
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double w = (spec.weight_q == 0.0)
                         ? 1.0
                         : std::pow(jbracket(gf.grid.node(i, j, k)),
                                    spec.p * spec.weight_q);
          acc += std::pow(std::abs(gf.at(i, j, k)), spec.p) * w;
        }
    return std::pow(acc * std::pow(gf.grid.h(), 3), 1.0 / spec.p);
  }

  // Sobolev norms through the DFT
  GridFunction hat = dft(gf, Direction::Forward);
  const bool hom = spec.kind == NormSpec::Kind::SobolevHom;
  if (hom && spec.alpha < 0.0) {
    double mean = std::abs(hat.values[0]);
    if (mean > 1e-10 * std::max(l1_lattice(gf), 1e-300))
      throw std::domain_error("norm: negative homogeneous order requires mean-zero input");
  }
  const double measure = 1.0 / (8.0 * std::pow(gf.grid.half_width, 3));
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double x2 = norm2(hat.grid.dual_node(i, j, k));
        double w;
        if (hom) {
          if (x2 == 0.0) w = (spec.alpha == 0.0) ? 1.0 : 0.0;
          else w = std::pow(x2, spec.alpha);
        } else {
          w = std::pow(1.0 + x2, spec.alpha);
        }
        acc += w * std::norm(hat.at(i, j, k));
      }
  return std::sqrt(acc * measure);
}

SampleResult sample_on_grid(const AnalyticFn& fn, const VelocityGrid& g,
                            double guard_threshold, GuardPolicy policy) {
  SampleResult res{GridFunction::zeros(g), 0.0, false};
  const int n = g.n;
  const double inner = g.half_width - 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 v = g.node(i, j, k);
        cplx val = fn.eval(v);
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
          throw std::domain_error("sample_on_grid: non-finite sample");
        res.gf.at(i, j, k) = val;
        if (std::fabs(v.x) >= inner || std::fabs(v.y) >= inner || std::fabs(v.z) >= inner)
          res.boundary_max = std::max(res.boundary_max, std::abs(val));
      }
  if (res.boundary_max > guard_threshold) {
    res.guard_violated = true;
    if (policy == GuardPolicy::Throw)
      throw std::runtime_error("sample_on_grid: truncation guard violated (boundary max " +
                               std::to_string(res.boundary_max) + ")");
  }
  return res;
}

void write_gridfunction(std::ostream& os, const GridFunction& gf) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "GFv1 %d %.17g\n", gf.grid.n, gf.grid.half_width);
  os << buf;
  for (const auto& v : gf.values) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
    os << buf;
  }
}

GridFunction read_gridfunction(std::istream& is) {
  std::string tag;
  int n = 0;
  double L = 0.0;
  if (!(is >> tag >> n >> L) || tag != "GFv1")
    throw std::runtime_error("read_gridfunction: bad header (want 'GFv1 n L')");
  GridFunction gf = GridFunction::zeros(VelocityGrid::make(n, L));
  for (auto& v : gf.values) {
    double re, im;
    if (!(is >> re >> im))
      throw std::runtime_error("read_gridfunction: too few samples");
    v = {re, im};
  }
  double extra;
  if (is >> extra) throw std::runtime_error("read_gridfunction: trailing samples");
  return gf;
}

void write_gridfunction_file(const std::string& path, const GridFunction& gf) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for write: " + path);
  write_gridfunction(os, gf);
}

GridFunction read_gridfunction_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for read: " + path);
  return read_gridfunction(is);
}

}  // namespace gainterm::grid
