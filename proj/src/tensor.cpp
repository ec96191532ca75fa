#include "sigmaflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigmaflow/errors.hpp"

namespace sigmaflow {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// Splits a flat offset into per-slot indices.
void decode(std::size_t flat, int dim, int rank, int* digits) {
  for (int s = rank - 1; s >= 0; --s) {
    digits[s] = static_cast<int>(flat % dim);
    flat /= dim;
  }
}

std::size_t encode(const int* digits, int dim, int rank) {
  std::size_t flat = 0;
  for (int s = 0; s < rank; ++s) flat = flat * dim + digits[s];
  return flat;
}

void require_same_shape(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || !(a.valence() == b.valence())) {
    throw InputError("tensor shape mismatch");
  }
}

}  // namespace

TensorValue::TensorValue(int dim, Valence valence)
    : dim_(dim), valence_(valence), data_(ipow(dim, valence.rank()), 0.0) {}

TensorValue TensorValue::scalar(double v) {
  TensorValue t(1, {0, 0});
  t.data_[0] = v;
  return t;
}

TensorValue TensorValue::identity(int dim) {
  TensorValue t(dim, {1, 1});
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

TensorValue TensorValue::from_matrix(const Square<double>& m, Valence valence) {
  TensorValue t(m.size(), valence);
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) t(i, j) = m(i, j);
  }
  return t;
}

std::size_t TensorValue::offset(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw InputError("wrong number of tensor indices");
  std::size_t flat = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw InputError("tensor index out of range");
    flat = flat * dim_ + i;
  }
  return flat;
}

Square<double> TensorValue::matrix() const {
  if (rank() != 2) throw InputError("matrix() needs a rank-2 tensor");
  Square<double> m(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

double TensorValue::value() const {
  if (rank() != 0) throw InputError("value() needs a scalar");
  return data_[0];
}

double TensorValue::sup_norm() const {
  double s = 0.0;
  for (double v : data_) s = std::max(s, std::fabs(v));
  return s;
}

TensorValue& TensorValue::operator+=(const TensorValue& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

TensorValue& TensorValue::operator-=(const TensorValue& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

TensorValue& TensorValue::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

TensorValue tensor_product(const TensorValue& a, const TensorValue& b) {
  if (a.rank() > 0 && b.rank() > 0 && a.dim() != b.dim()) throw InputError("dimension mismatch");
  // Slots: contravariant of a, contravariant of b, covariant of a, covariant of b.
  const int dim = a.rank() > 0 ? a.dim() : b.dim();
  const Valence va = a.valence(), vb = b.valence();
  TensorValue out(dim, {va.contravariant + vb.contravariant, va.covariant + vb.covariant});
  const int ra = va.rank(), rb = vb.rank(), r = out.rank();
  std::vector<int> da(std::max(ra, 1)), db(std::max(rb, 1)), d(std::max(r, 1));
  for (std::size_t fa = 0; fa < a.size(); ++fa) {
    decode(fa, dim, ra, da.data());
    for (std::size_t fb = 0; fb < b.size(); ++fb) {
      decode(fb, dim, rb, db.data());
      int s = 0;
      for (int i = 0; i < va.contravariant; ++i) d[s++] = da[i];
      for (int i = 0; i < vb.contravariant; ++i) d[s++] = db[i];
      for (int i = va.contravariant; i < ra; ++i) d[s++] = da[i];
      for (int i = vb.contravariant; i < rb; ++i) d[s++] = db[i];
      out.data()[encode(d.data(), dim, r)] = a.data()[fa] * b.data()[fb];
    }
  }
  return out;
}

namespace {

TensorValue contract_impl(const TensorValue& t, int slot_a, int slot_b, const TensorValue* inv) {
  const int r = t.rank(), dim = t.dim();
  if (slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r || slot_a == slot_b) {
    throw InputError("contraction slot out of range");
  }
  Valence v = t.valence();
  if (inv) {
    if (slot_a < v.contravariant || slot_b < v.contravariant) {
      throw InputError("metric contraction needs two covariant slots");
    }
    v.covariant -= 2;
  } else {
    if (slot_a >= v.contravariant || slot_b < v.contravariant) {
      throw InputError("contraction needs a contravariant and a covariant slot");
    }
    v.contravariant -= 1;
    v.covariant -= 1;
  }
  TensorValue out(dim, v);
  const int ro = r - 2;
  std::vector<int> d(std::max(ro, 1)), full(r);
  for (std::size_t fo = 0; fo < out.size(); ++fo) {
    decode(fo, dim, ro, d.data());
    double sum = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (!inv && i != j) continue;
        int s = 0;
        for (int k = 0; k < r; ++k) {
          if (k == slot_a) full[k] = i;
          else if (k == slot_b) full[k] = j;
          else full[k] = d[s++];
        }
        const double w = inv ? (*inv)(i, j) : 1.0;
        sum += w * t.data()[encode(full.data(), dim, r)];
      }
    }
    out.data()[fo] = sum;
  }
  return out;
}

TensorValue move_slot(const TensorValue& t, int slot, const TensorValue& m, bool to_covariant) {
  const Valence v = t.valence();
  const int r = t.rank(), dim = t.dim();
  if (slot < 0 || slot >= r) throw InputError("slot out of range");
  const bool is_contra = slot < v.contravariant;
  if (to_covariant != is_contra) throw InputError("slot has the wrong variance");
  // The moved slot is re-placed at the boundary between the two groups,
  // keeping it as close to its original position as the layout allows.
  Valence nv = to_covariant ? Valence{v.contravariant - 1, v.covariant + 1}
                            : Valence{v.contravariant + 1, v.covariant - 1};
  const int new_slot = to_covariant ? nv.contravariant : v.contravariant;
  TensorValue out(dim, nv);
  std::vector<int> d(r), src(r);
  for (std::size_t fo = 0; fo < out.size(); ++fo) {
    decode(fo, dim, r, d.data());
    // Map output slots back to input slot order.
    std::vector<int> others;
    for (int k = 0; k < r; ++k) {
      if (k != new_slot) others.push_back(d[k]);
    }
    double sum = 0.0;
    for (int a = 0; a < dim; ++a) {
      int s = 0;
      for (int k = 0; k < r; ++k) src[k] = (k == slot) ? a : others[s++];
      sum += m(d[new_slot], a) * t.data()[encode(src.data(), dim, r)];
    }
    out.data()[fo] = sum;
  }
  return out;
}

}  // namespace

TensorValue contract(const TensorValue& t, int slot_a, int slot_b) {
  return contract_impl(t, slot_a, slot_b, nullptr);
}

TensorValue contract_with_metric(const TensorValue& t, int slot_a, int slot_b,
                                 const TensorValue& inverse_metric) {
  return contract_impl(t, slot_a, slot_b, &inverse_metric);
}

TensorValue lower(const TensorValue& t, int slot, const TensorValue& metric) {
  return move_slot(t, slot, metric, true);
}

TensorValue raise(const TensorValue& t, int slot, const TensorValue& inverse_metric) {
  return move_slot(t, slot, inverse_metric, false);
}

TensorValue symmetrize(const TensorValue& t) {
  if (t.rank() != 2) throw InputError("symmetrize needs a rank-2 tensor");
  TensorValue out = t;
  for (int i = 0; i < t.dim(); ++i) {
    for (int j = 0; j < t.dim(); ++j) out(i, j) = 0.5 * (t(i, j) + t(j, i));
  }
  return out;
}

std::vector<double> jacobi_eigenvalues(Square<double> a, double off_tolerance) {
  const int n = a.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  }
  const double scale = std::sqrt(total);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (std::sqrt(off) <= off_tolerance * scale || off == 0.0) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

SymmetricSpectrum sym_eigenvalues(const TensorValue& m, const TensorValue& metric) {
  if (!(m.valence() == Valence{1, 1})) throw InputError("sym_eigenvalues needs a (1,1) tensor");
  if (!(metric.valence() == Valence{0, 2}) || metric.dim() != m.dim()) {
    throw InputError("sym_eigenvalues needs a matching (0,2) metric");
  }
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw DomainError("non-finite entry in endomorphism");
  }
  const int n = m.dim();
  const Square<double> l = cholesky(metric.matrix());
  // linv = L^{-1} by forward substitution.
  Square<double> linv(n, 0.0);
  for (int j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s -= l(i, k) * linv(k, j);
      linv(i, j) = s / l(i, i);
    }
  }
  // S = L^T M L^{-T}
  Square<double> tmp(n, 0.0), s(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += m(i, k) * linv(j, k);
      tmp(i, j) = acc;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += l(k, i) * tmp(k, j);
      s(i, j) = acc;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
  }
  return {jacobi_eigenvalues(s)};
}

std::vector<double> elementary_symmetric_all(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  }
  return e;
}

double elementary_symmetric(const SymmetricSpectrum& spectrum, int k) {
  const int n = static_cast<int>(spectrum.eigenvalues.size());
  if (k < 0 || k > n) {
    throw InputError("sigma_k index " + std::to_string(k) + " outside 0.." + std::to_string(n));
  }
  std::vector<double> sorted = spectrum.eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  return elementary_symmetric_all(sorted)[k];
}

TensorValue kulkarni_nomizu(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim()) throw InputError("Kulkarni-Nomizu dimension mismatch");
  if (!(a.valence() == Valence{0, 2}) || !(b.valence() == Valence{0, 2})) {
    throw InputError("Kulkarni-Nomizu needs (0,2) tensors");
  }
  const int n = a.dim();
  TensorValue out(n, {0, 4});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out.at({i, j, k, l}) = a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) -
                                 a(j, k) * b(i, l);
  return out;
}

}  // namespace sigmaflow
