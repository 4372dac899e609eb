#include "hvp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace hvp {

double unit_ball_volume(double b) { return std::pow(std::numbers::pi, 0.5 * b) / std::tgamma(0.5 * b + 1.0); }

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

BallConstant ball_constant(double a, double b) {
  if (!(b > 0.0) || !(a >= b)) throw Error(ErrorKind::DomainError, "ball_constant needs a >= b > 0");
  // (a-b)^(b-a) -> 1 as a -> b.
  const double gap = a - b;
  const double log_gap = gap > 0.0 ? (b - a) * std::log(gap) : 0.0;
  const double log_value = a * std::log(a) + log_gap - std::log(unit_ball_volume(b)) - b * std::log(b);
  return {a, b, std::exp(log_value)};
}

namespace {

using Buffer = std::shared_ptr<const std::vector<double>>;

// Budgets left after fixing the offsets of the leading axes collapse onto the
// achievable partial sums of squares of the remaining axes.
struct DilationPlan {
  Lattice padded;
  std::vector<int> reach, pad;
  std::vector<std::vector<double>> sums;  // achievable sums for axes a..n-1
  std::vector<std::vector<double>> keys;  // budgets needed at level a
  double budget = 0.0;
  double tol = 0.0;

  double canon(int level, double b) const {
    const auto& s = sums[level];
    auto it = std::upper_bound(s.begin(), s.end(), b + tol);
    return *(it - 1);  // s[0] = 0 <= b always
  }
};

std::vector<double> unique_sorted(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

DilationPlan make_plan(const Lattice& l, double R) {
  DilationPlan p;
  const int n = l.dim();
  const double R2 = R * R;
  p.budget = R2 * (1.0 + kBallSlack);
  const double tol = 1e-3 * kBallSlack * (R2 > 0 ? R2 : 1.0);
  p.tol = tol;
  p.reach.resize(n);
  for (int a = 0; a < n; ++a) {
    int r = static_cast<int>(std::floor(R / l.h[a])) + 1;
    while (r > 0 && (r * l.h[a]) * (r * l.h[a]) > p.budget) --r;
    p.reach[a] = r;
  }
  std::vector<int> nn(n);
  std::vector<double> lo(n), hi(n);
  for (int a = 0; a < n; ++a) {
    nn[a] = l.n[a] + 2 * p.reach[a];
    lo[a] = l.lo[a] - p.reach[a] * l.h[a];
    hi[a] = l.hi[a] + p.reach[a] * l.h[a];
  }
  p.pad = p.reach;
  p.padded = make_lattice(nn, lo, hi);
  p.sums.assign(n + 1, {});
  p.sums[n] = {0.0};
  for (int a = n - 1; a >= 0; --a) {
    std::vector<double> s;
    for (double base : p.sums[a + 1])
      for (int o = 0; o <= p.reach[a]; ++o) {
        const double v = base + (o * l.h[a]) * (o * l.h[a]);
        if (v <= p.budget) s.push_back(v);
      }
    p.sums[a] = unique_sorted(s, tol);
  }
  p.keys.assign(n + 1, {});
  p.keys[0] = {p.canon(0, p.budget)};
  for (int a = 0; a < n; ++a) {
    std::vector<double> next;
    for (double b : p.keys[a])
      for (int o = 0; o <= p.reach[a]; ++o) {
        const double used = (o * l.h[a]) * (o * l.h[a]);
        if (used <= b + tol) next.push_back(p.canon(a + 1, b - used));
      }
    p.keys[a + 1] = unique_sorted(next, tol);
  }
  return p;
}

std::vector<double> embed(const RealField& f, const DilationPlan& p) {
  const Lattice& L = p.padded;
  std::vector<double> out(L.size(), 0.0);
  const int n = f.lattice.dim();
  parallel_for(f.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    f.lattice.unravel(i, idx);
    for (int a = 0; a < n; ++a) idx[a] += p.pad[a];
    out[L.ravel(idx)] = f[i];
  });
  return out;
}

// out = max(out, in shifted by o along axis a): out[z] <- in[z + o e_a].
void shifted_max(std::vector<double>& out, const std::vector<double>& in, const Lattice& L, int a, int o) {
  const std::size_t inner = L.stride[a];
  const std::size_t na = static_cast<std::size_t>(L.n[a]);
  const std::size_t outer = L.size() / (inner * na);
  const int lo = std::max(0, -o), hi = std::min(L.n[a], L.n[a] - o);
  if (lo >= hi) return;
  const std::size_t rows = outer * static_cast<std::size_t>(hi - lo);
  parallel_for(rows, [&](std::size_t r) {
    const std::size_t ob = r / static_cast<std::size_t>(hi - lo);
    const std::size_t i = static_cast<std::size_t>(lo) + r % static_cast<std::size_t>(hi - lo);
    double* dst = out.data() + (ob * na + i) * inner;
    const double* src = in.data() + (ob * na + i + o) * inner;
    for (std::size_t k = 0; k < inner; ++k) dst[k] = std::max(dst[k], src[k]);
  });
}

std::vector<double> dilate(const RealField& f, const DilationPlan& p, double R) {
  const int n = f.lattice.dim();
  const Lattice& L = p.padded;
  auto base = std::make_shared<const std::vector<double>>(embed(f, p));
  if (R <= 0.0) return *base;
  std::map<double, Buffer> below{{0.0, base}};
  for (int a = n - 1; a >= 0; --a) {
    std::map<double, Buffer> level;
    const double h = f.lattice.h[a];
    for (double b : p.keys[a]) {
      int r = 0;
      while (r + 1 <= p.reach[a] && ((r + 1) * h) * ((r + 1) * h) <= b + p.tol) ++r;
      const Buffer centre = below.at(p.canon(a + 1, b));
      if (r == 0) {
        level[b] = centre;
        continue;
      }
      auto out = std::make_shared<std::vector<double>>(*centre);
      for (int o = 1; o <= r; ++o) {
        const Buffer& in = below.at(p.canon(a + 1, b - (o * h) * (o * h)));
        shifted_max(*out, *in, L, a, o);
        shifted_max(*out, *in, L, a, -o);
      }
      level[b] = out;
    }
    below = std::move(level);
  }
  return *below.begin()->second;
}

}  // namespace

RealField local_sup_padded(const RealField& f, double R) {
  if (R < 0.0) throw Error(ErrorKind::DomainError, "radius must be nonnegative");
  const DilationPlan p = make_plan(f.lattice, R);
  std::vector<double> v = dilate(f, p, R);
  RealField out(p.padded);
  out.values = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return out;
}

RealField local_sup(const RealField& f, double R) {
  if (R == 0.0) return f;
  const RealField big = local_sup_padded(f, R);
  RealField out(f.lattice);
  const int n = f.lattice.dim();
  std::vector<int> pad(n);
  for (int a = 0; a < n; ++a) pad[a] = (big.lattice.n[a] - f.lattice.n[a]) / 2;
  parallel_for(f.size(), [&](std::size_t i) {
    int idx[kMaxDim];
    f.lattice.unravel(i, idx);
    for (int a = 0; a < n; ++a) idx[a] += pad[a];
    out[i] = big[big.lattice.ravel(idx)];
  });
  return out;
}

std::vector<double> default_radius_set(const Lattice& l, double max_radius) {
  if (max_radius < 0.0) max_radius = 0.5 * l.box_diagonal();
  std::vector<double> r{0.0};
  const double diag = l.cell_diagonal();
  for (int j = 0;; ++j) {
    const double R = diag * std::pow(2.0, 0.5 * j);
    if (R > max_radius * (1.0 + 1e-12)) break;
    r.push_back(R);
  }
  return r;
}

std::uint64_t dilation_bytes(const Lattice& l, double R) {
  if (R <= 0.0) return 8ull * l.size();
  const DilationPlan p = make_plan(l, R);
  std::size_t widest = 0;
  for (int a = 0; a < l.dim(); ++a) widest = std::max(widest, p.keys[a].size() + p.keys[a + 1].size());
  return 8ull * static_cast<std::uint64_t>(widest + 1) * p.padded.size();
}

std::vector<double> fit_radius_set(const Lattice& l, std::vector<double> radii, std::uint64_t budget) {
  std::vector<double> out;
  for (double R : radii)
    if (R == 0.0 || dilation_bytes(l, R) <= budget) out.push_back(R);
  if (out.empty() || out.front() != 0.0) out.insert(out.begin(), 0.0);
  return out;
}

NormReport a_norm(const RealField& f, double kappa, double p, const std::vector<double>& radius_set) {
  if (!(p >= 1.0)) throw Error(ErrorKind::DomainError, "a_norm needs p >= 1");
  if (!(kappa >= f.lattice.dim())) throw Error(ErrorKind::DomainError, "a_norm needs kappa >= grid dimension");
  NormReport r;
  r.radius_set = radius_set;
  if (std::find(radius_set.begin(), radius_set.end(), 0.0) == radius_set.end())
    throw Error(ErrorKind::DomainError, "radius set must contain 0");
  const double w = f.lattice.cell_volume();
  RealField m = f;
  m.values = m.values.cwiseAbs();
  for (double R : radius_set) {
    const RealField big = local_sup_padded(m, R);
    const double s = pairwise_sum<double>(big.size(), [&](std::size_t i) {
      return p == 1.0 ? big[i] : p == 2.0 ? big[i] * big[i] : std::pow(big[i], p);
    });
    const double v = std::pow(1.0 + R, -kappa / p) * std::pow(s * w, 1.0 / p);
    if (r.radius_profile.empty() || v > r.a_norm) {
      r.a_norm = v;
      r.argmax_radius = R;
    }
    r.radius_profile.push_back(v);
  }
  return r;
}

}  // namespace hvp
