#include "tvcut/energy.hpp"

#include <algorithm>
#include <cmath>

namespace tvcut {

double tv_norm(const Graph& g, const VertexFunction& f) {
  if (static_cast<int>(f.size()) != g.n())
    throw_config("tv_norm: dimension mismatch");
  double tv = 0.0;
  for (const auto& e : g.edges()) tv += e.w * std::abs(f[e.u] - f[e.v]);
  return 2.0 * tv;
}

double median(const VertexFunction& f) {
  if (f.empty()) throw_config("median of empty vector");
  int n = static_cast<int>(f.size());
  // 1-indexed order statistic: n/2 for even n, (n+1)/2 for odd n.
  int rank = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  VertexFunction tmp = f;
  std::nth_element(tmp.begin(), tmp.begin() + (rank - 1), tmp.end());
  return tmp[rank - 1];
}

bool is_constant(const VertexFunction& f) {
  for (double x : f)
    if (x != f[0]) return false;
  return true;
}

double l1_norm(const VertexFunction& f) {
  double s = 0.0;
  for (double x : f) s += std::abs(x);
  return s;
}

double l2_norm(const VertexFunction& f) {
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(s);
}

double dot(const VertexFunction& a, const VertexFunction& b) {
  if (a.size() != b.size()) throw_config("dot: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double balance_energy(const Graph& g, const VertexFunction& f) {
  if (static_cast<int>(f.size()) != g.n())
    throw_config("balance_energy: dimension mismatch");
  if (is_constant(f))
    throw_degenerate("balance_energy of a constant function");
  double med = median(f);
  double denom = 0.0;
  for (double x : f) denom += std::abs(x - med);
  if (denom == 0.0) throw_degenerate("balance_energy: zero l1 denominator");
  return tv_norm(g, f) / denom;
}

Subgradient zero_mean_subgradient(const VertexFunction& f) {
  if (median(f) != 0.0)
    throw_degenerate("zero_mean_subgradient requires median(f) = 0");
  int n_pos = 0, n_neg = 0, n_zero = 0;
  for (double x : f) {
    if (x > 0.0)
      ++n_pos;
    else if (x < 0.0)
      ++n_neg;
    else
      ++n_zero;
  }
  if (n_zero == 0 && n_pos != n_neg)
    throw_degenerate("no zero-sum sign vector exists (n0 = 0, n+ != n-)");
  double zero_fill =
      (n_zero > 0) ? static_cast<double>(n_neg - n_pos) / n_zero : 0.0;
  Subgradient v;
  v.values.resize(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] > 0.0)
      v.values[i] = 1.0;
    else if (f[i] < 0.0)
      v.values[i] = -1.0;
    else
      v.values[i] = zero_fill;
  }
  return v;
}

double energy_inequality_gap(const Graph& g, const VertexFunction& f_k,
                             const VertexFunction& h, double theta) {
  if (theta <= 0.0 || theta >= 1.0)
    throw_config("theta must lie strictly in (0, 1)");
  double e_f = balance_energy(g, f_k);
  double e_h = balance_energy(g, h);  // throws on constant h
  double med_h = median(h);
  double denom = 0.0;
  double diff2 = 0.0;
  for (size_t i = 0; i < h.size(); ++i) {
    denom += std::abs(h[i] - med_h);
    double d = h[i] - f_k[i];
    diff2 += d * d;
  }
  return e_f - (e_h + theta * e_f * diff2 / denom);
}

double median_free_gap(const Graph& g, const VertexFunction& f_k,
                       const Subgradient& v, const VertexFunction& h,
                       double theta) {
  if (f_k.size() != h.size() || v.values.size() != f_k.size())
    throw_config("median_free_gap: dimension mismatch");
  double e_f = balance_energy(g, f_k);
  double diff2 = 0.0;
  double vdot = 0.0;
  for (size_t i = 0; i < h.size(); ++i) {
    double d = h[i] - f_k[i];
    diff2 += d * d;
    vdot += v.values[i] * d;
  }
  return tv_norm(g, f_k) -
         (tv_norm(g, h) + theta * e_f * diff2 - e_f * vdot);
}

}  // namespace tvcut
