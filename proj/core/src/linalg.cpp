#include "solitonflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solitonflow {

void hessenberg_reduce(Matrix& m) {
  const int n = m.n;
  for (int k = 1; k < n - 1; ++k) {
    // Householder vector annihilating column k-1 below row k.
    double scale = 0.0;
    for (int i = k; i < n; ++i) scale += std::abs(m(i, k - 1));
    if (scale == 0.0) continue;

    std::vector<double> v(n, 0.0);
    double sigma = 0.0;
    for (int i = k; i < n; ++i) {
      v[i] = m(i, k - 1) / scale;
      sigma += v[i] * v[i];
    }
    double alpha = std::sqrt(sigma);
    if (v[k] > 0.0) alpha = -alpha;
    v[k] -= alpha;
    const double beta = -alpha * v[k];  // = |v|^2 / 2 after the update
    if (beta == 0.0) continue;

    // A <- (I - v v^T / beta) A
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k; i < n; ++i) s += v[i] * m(i, j);
      s /= beta;
      for (int i = k; i < n; ++i) m(i, j) -= s * v[i];
    }
    // A <- A (I - v v^T / beta)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k; j < n; ++j) s += m(i, j) * v[j];
      s /= beta;
      for (int j = k; j < n; ++j) m(i, j) -= s * v[j];
    }
    m(k, k - 1) = alpha * scale;
    for (int i = k + 1; i < n; ++i) m(i, k - 1) = 0.0;
  }
}

namespace {

// Francis double-shift QR iteration on an upper Hessenberg matrix.
// Classic bulge-chasing scheme with exceptional shifts every 10 sweeps.
std::vector<std::complex<double>> hessenberg_eigenvalues(Matrix& h) {
  const int n = h.n;
  std::vector<std::complex<double>> eig(n);

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
  if (anorm == 0.0) return eig;  // zero matrix

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        const double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        const double cmp = (s == 0.0) ? anorm : s;
        if (std::abs(h(l, l - 1)) <= 1e-300 + 2.3e-16 * cmp) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      double x = h(nn, nn);
      if (l == nn) {
        eig[nn--] = x + t;
      } else {
        double y = h(nn - 1, nn - 1);
        double w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            eig[nn - 1] = eig[nn] = x + z;
            if (z != 0.0) eig[nn] = x - w / z;
          } else {
            eig[nn - 1] = std::complex<double>(x + p, z);
            eig[nn] = std::conj(eig[nn - 1]);
          }
          nn -= 2;
        } else {
          if (its == 60) throw std::runtime_error("eigenvalues: QR iteration failed to converge");
          double p = 0.0, q = 0.0, r = 0.0;
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) h(i, i) -= x;
            const double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
            x = y = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            const double z = h(m, m);
            const double rr = x - z;
            const double ss = y - z;
            p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - rr - ss;
            r = h(m + 2, m + 1);
            const double scale = std::abs(p) + std::abs(q) + std::abs(r);
            p /= scale;
            q /= scale;
            r /= scale;
            if (m == l) break;
            const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                            std::abs(h(m + 1, m + 1)));
            if (u <= 2.3e-16 * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) h(k, k - 1) = -h(k, k - 1);
            } else {
              h(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            double z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {  // row modification
              p = h(k, j) + q * h(k + 1, j);
              if (k != nn - 1) {
                p += r * h(k + 2, j);
                h(k + 2, j) -= p * z;
              }
              h(k + 1, j) -= p * y;
              h(k, j) -= p * x;
            }
            const int mmin = (nn < k + 3) ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {  // column modification
              p = x * h(i, k) + y * h(i, k + 1);
              if (k != nn - 1) {
                p += z * h(i, k + 2);
                h(i, k + 2) -= p * r;
              }
              h(i, k + 1) -= p * q;
              h(i, k) -= p;
            }
          }
        }
      }
    } while (l < nn - 1 && nn >= 0);
  }
  return eig;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(Matrix m) {
  if (m.n == 0) return {};
  if (m.n == 1) return {std::complex<double>(m(0, 0), 0.0)};
  hessenberg_reduce(m);
  return hessenberg_eigenvalues(m);
}

std::vector<double> real_eigenvalues(const Matrix& m, double imag_tol) {
  auto eig = eigenvalues(m);
  std::vector<double> out;
  out.reserve(eig.size());
  for (const auto& e : eig) {
    if (std::abs(e.imag()) > imag_tol)
      throw std::runtime_error("real_eigenvalues: complex eigenvalue encountered");
    out.push_back(e.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace solitonflow
