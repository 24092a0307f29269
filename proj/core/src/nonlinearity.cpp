#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "modspec/evolution.hpp"

namespace modspec {

NonlinearitySpec NonlinearitySpec::simple(std::vector<cplx> lambda, std::vector<int> kappa, bool strict) {
  NonlinearitySpec s;
  s.form = NonlinearityForm::Simple;
  s.lambda = std::move(lambda);
  s.kappa = std::move(kappa);
  s.strict = strict;
  return s;
}

NonlinearitySpec NonlinearitySpec::general(std::vector<Monomial> terms, int m, int M, bool strict) {
  NonlinearitySpec s;
  s.form = NonlinearityForm::General;
  s.terms = std::move(terms);
  s.m = m;
  s.M = M;
  s.strict = strict;
  return s;
}

int NonlinearitySpec::max_degree() const {
  int d = 0;
  if (form == NonlinearityForm::Simple) {
    for (std::size_t i = 0; i < kappa.size(); ++i)
      if (i < lambda.size() && lambda[i] != cplx(0)) d = std::max(d, kappa[i] + 1);
  } else {
    for (const auto& t : terms)
      if (t.coeff != cplx(0)) d = std::max(d, static_cast<int>(t.factors.size()));
  }
  return d;
}

bool NonlinearitySpec::is_zero() const { return max_degree() == 0; }

std::vector<std::string> NonlinearitySpec::validate(int dim) const {
  std::vector<std::string> issues;
  std::vector<std::string> notes;
  const double n = dim;
  if (dim < 2) issues.push_back("the well-posedness theorems assume n >= 2");
  if (form == NonlinearityForm::Simple) {
    if (lambda.size() != static_cast<std::size_t>(dim) || kappa.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument("nonlinearity: simple form needs one lambda and one kappa per axis");
    const int floor_k = std::max(2, static_cast<int>(std::ceil(8.0 / n)));
    for (int i = 0; i < dim; ++i) {
      if (kappa[i] < 1) throw std::invalid_argument("nonlinearity: kappa must be a positive integer");
      if (kappa[i] < floor_k)
        issues.push_back("kappa_" + std::to_string(i + 1) + " = " + std::to_string(kappa[i]) +
                         " violates kappa_i >= max(2, 8/n) = " + std::to_string(floor_k));
    }
  } else {
    if (m < 2 || M < m) issues.push_back("general form needs 2 <= m <= M");
    if (!(m > 8.0 / n)) issues.push_back("m = " + std::to_string(m) + " violates m > 8/n");
    if (m > 8.0 / n && m < 2 + 8.0 / n)
      notes.push_back("m = " + std::to_string(m) + " satisfies m > 8/n but not 2 + 8/n <= m; the two stated hypotheses disagree");
    if (M + 1 > 7) issues.push_back("degrees above 7 exceed the supported dealiasing range");
    for (const auto& t : terms) {
      const int deg = static_cast<int>(t.factors.size());
      if (deg < m + 1 || deg > M + 1)
        issues.push_back("term degree " + std::to_string(deg) + " outside [m + 1, M + 1]");
      for (const auto& f : t.factors) {
        if (f.order() > 3) issues.push_back("derivative order above 3 in a factor");
        for (int a = 0; a < kMaxDim; ++a)
          if (f.alpha[a] < 0 || (a >= dim && f.alpha[a] != 0))
            throw std::invalid_argument("nonlinearity: bad derivative multi-index");
      }
    }
  }
  if (strict && !issues.empty()) throw std::invalid_argument("nonlinearity: " + issues.front());
  issues.insert(issues.end(), notes.begin(), notes.end());
  return issues;
}

bool NonlinearitySpec::conjugation_symmetric() const {
  if (form == NonlinearityForm::Simple) return is_zero();
  auto key = [](const Monomial& t, bool flip) {
    std::vector<std::tuple<int, int, int, bool>> k;
    for (const auto& f : t.factors) k.emplace_back(f.alpha[0], f.alpha[1], f.alpha[2], f.conjugate != flip);
    std::sort(k.begin(), k.end());
    return k;
  };
  for (const auto& t : terms) {
    const auto target = key(t, true);
    bool found = false;
    for (const auto& o : terms)
      if (key(o, false) == target && std::abs(o.coeff - std::conj(t.coeff)) <= 1e-15 * std::abs(t.coeff)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

std::string NonlinearitySpec::describe() const {
  std::ostringstream os;
  if (form == NonlinearityForm::Simple) {
    os << "simple:";
    for (std::size_t i = 0; i < lambda.size(); ++i)
      os << " lambda" << i + 1 << "=" << lambda[i] << " kappa" << i + 1 << "=" << (i < kappa.size() ? kappa[i] : 0);
  } else {
    os << "general: m=" << m << " M=" << M << " terms=" << terms.size();
  }
  return os.str();
}

double dealias_cutoff(const GridSpec& g, int axis, int degree) {
  const int d = std::max(degree, 1);
  return ((g.points[axis] - 1) / (d + 1)) * g.dxi(axis);
}

namespace {

// Physical-space workspace for products of band-limited fields.
class Workspace {
 public:
  Workspace(const GridSpec& g, int degree, Dealias mode) : native_(g), work_(g), mode_(mode) {
    if (mode == Dealias::Padding) {
      const int P = (std::max(degree, 1) + 2) / 2;  // ceil((d + 1) / 2)
      for (int a = 0; a < g.dim; ++a) work_.points[a] = g.points[a] * P;
    } else {
      for (int a = 0; a < g.dim; ++a) cut_[a] = (g.points[a] - 1) / (std::max(degree, 1) + 1);
    }
  }

  const GridSpec& work() const { return work_; }
  std::size_t size() const { return work_.size(); }

  bool retained(const std::array<int, kMaxDim>& m) const {
    for (int a = 0; a < native_.dim; ++a) {
      if (mode_ == Dealias::Truncation && std::abs(m[a]) > cut_[a]) return false;
      if (mode_ == Dealias::Padding && m[a] == -native_.points[a] / 2) return false;
    }
    return true;
  }

  // Spectrum on the native grid times (i xi)^alpha, filtered, to physical values on the work grid.
  CVector to_physical(const SpatialField& U, const std::array<int, kMaxDim>& alpha) const {
    CVector w(work_.size(), cplx{});
    const double scale = std::sqrt(double(work_.size()) / double(native_.size()));
    for_native([&](std::size_t ni, std::size_t wi, const std::array<int, kMaxDim>& m) {
      cplx c = U[ni] * scale;
      for (int a = 0; a < native_.dim; ++a)
        if (alpha[a]) c *= derivative_symbol(m[a] * native_.dxi(a), alpha[a]);
      w[wi] = c;
    });
    fft::inverse_unitary(work_.dim, work_.shape(), w.data(), w.data());
    return w;
  }

  // Physical values on the work grid to a filtered native spectrum.
  SpatialField to_spectrum(CVector& w) const {
    fft::forward_unitary(work_.dim, work_.shape(), w.data(), w.data());
    SpatialField out(native_, Representation::Frequency);
    const double scale = std::sqrt(double(native_.size()) / double(work_.size()));
    for_native([&](std::size_t ni, std::size_t wi, const std::array<int, kMaxDim>&) { out[ni] = w[wi] * scale; });
    return out;
  }

 private:
  template <class Fn>
  void for_native(Fn&& fn) const {
    const auto sh = native_.shape();
    const auto nst = native_.strides();
    const auto wst = work_.strides();
    std::array<int, kMaxDim> m{0, 0, 0};
    for (int i0 = 0; i0 < sh[0]; ++i0) {
      m[0] = native_.freq_index(0, i0);
      for (int i1 = 0; i1 < sh[1]; ++i1) {
        m[1] = native_.dim > 1 ? native_.freq_index(1, i1) : 0;
        for (int i2 = 0; i2 < sh[2]; ++i2) {
          m[2] = native_.dim > 2 ? native_.freq_index(2, i2) : 0;
          if (!retained(m)) continue;
          std::size_t wi = 0;
          for (int a = 0; a < native_.dim; ++a) wi += work_.freq_slot(a, m[a]) * wst[a];
          fn(i0 * nst[0] + i1 * nst[1] + i2 * nst[2], wi, m);
        }
      }
    }
  }

  GridSpec native_;
  GridSpec work_;
  Dealias mode_;
  std::array<int, kMaxDim> cut_{0, 0, 0};
};

using Alpha = std::array<int, kMaxDim>;

// Physical arrays of d^alpha of each operand, computed on demand.
struct DerivativeCache {
  const Workspace& ws;
  SpatialField spectrum;
  std::map<Alpha, CVector> arrays;
  const CVector& get(const Alpha& a) {
    auto it = arrays.find(a);
    if (it == arrays.end()) it = arrays.emplace(a, ws.to_physical(spectrum, a)).first;
    return it->second;
  }
};

void add_derivative(SpatialField& acc, const SpatialField& P, int axis, cplx lambda) {
  const GridSpec& g = acc.grid();
  for (std::size_t n = 0; n < acc.size(); ++n)
    if (P[n] != cplx(0)) acc[n] += lambda * derivative_symbol(frequency_of(g, n)[axis], 3) * P[n];
}

// Sum of all monomials. With telescoping each term is expanded into one product per factor
// position; pick(pass, factor, alpha) selects the operand array for each factor.
template <class Pick>
SpatialField general_sum(const Workspace& ws, const NonlinearitySpec& spec, bool telescoping, Pick&& pick) {
  CVector acc(ws.size(), cplx{});
  for (const auto& t : spec.terms) {
    if (t.coeff == cplx(0)) continue;
    const int nf = static_cast<int>(t.factors.size());
    const int passes = telescoping ? nf : 1;
    for (int pass = 0; pass < passes; ++pass) {
      std::vector<const CVector*> arr(static_cast<std::size_t>(nf));
      for (int f = 0; f < nf; ++f) arr[f] = &pick(pass, f, t.factors[f].alpha);
      for (std::size_t x = 0; x < acc.size(); ++x) {
        cplx p = t.coeff;
        for (int f = 0; f < nf; ++f) {
          const cplx v = (*arr[f])[x];
          p *= t.factors[f].conjugate ? std::conj(v) : v;
        }
        acc[x] += p;
      }
    }
  }
  return ws.to_spectrum(acc);
}

}  // namespace

SpatialField evaluate_nonlinearity(const SpatialField& u, const NonlinearitySpec& spec, Dealias mode) {
  spec.validate(u.grid().dim);
  const GridSpec& g = u.grid();
  SpatialField out(g, Representation::Frequency);
  if (spec.is_zero()) return out;
  const Workspace ws(g, spec.max_degree(), mode);
  DerivativeCache U{ws, u.as_frequency(), {}};
  if (spec.form == NonlinearityForm::Simple) {
    const CVector& up = U.get({0, 0, 0});
    std::map<int, SpatialField> powers;
    for (int i = 0; i < g.dim; ++i) {
      if (spec.lambda[i] == cplx(0)) continue;
      const int p = spec.kappa[i] + 1;
      if (!powers.count(p)) {
        CVector w(up.size());
        for (std::size_t x = 0; x < w.size(); ++x) {
          cplx r = up[x];
          for (int e = 1; e < p; ++e) r *= up[x];
          w[x] = r;
        }
        powers.emplace(p, ws.to_spectrum(w));
      }
      add_derivative(out, powers.at(p), i, spec.lambda[i]);
    }
    return out;
  }
  return general_sum(ws, spec, false, [&](int, int, const Alpha& a) -> const CVector& { return U.get(a); });
}

SpatialField evaluate_difference(const SpatialField& u, const SpatialField& v, const SpatialField& delta,
                                 const NonlinearitySpec& spec, Dealias mode) {
  spec.validate(u.grid().dim);
  const GridSpec& g = u.grid();
  require_same_space(g, v.grid(), "evaluate_difference");
  require_same_space(g, delta.grid(), "evaluate_difference");
  SpatialField out(g, Representation::Frequency);
  if (spec.is_zero()) return out;
  const Workspace ws(g, spec.max_degree(), mode);
  DerivativeCache U{ws, u.as_frequency(), {}};
  DerivativeCache V{ws, v.as_frequency(), {}};
  DerivativeCache D{ws, delta.as_frequency(), {}};
  if (spec.form == NonlinearityForm::Simple) {
    const CVector& up = U.get({0, 0, 0});
    const CVector& vp = V.get({0, 0, 0});
    const CVector& dp = D.get({0, 0, 0});
    std::map<int, SpatialField> diffs;
    for (int i = 0; i < g.dim; ++i) {
      if (spec.lambda[i] == cplx(0)) continue;
      const int p = spec.kappa[i] + 1;
      if (!diffs.count(p)) {
        // u^p - v^p = delta * sum_{r < p} u^r v^{p-1-r}
        CVector w(up.size());
        for (std::size_t x = 0; x < w.size(); ++x) {
          cplx s = 0, ur = 1;
          for (int r = 0; r < p; ++r) {
            cplx vr = 1;
            for (int e = 0; e < p - 1 - r; ++e) vr *= vp[x];
            s += ur * vr;
            ur *= up[x];
          }
          w[x] = dp[x] * s;
        }
        diffs.emplace(p, ws.to_spectrum(w));
      }
      add_derivative(out, diffs.at(p), i, spec.lambda[i]);
    }
    return out;
  }
  // Telescoping: prod a(u) - prod a(v) = sum_i a_1(u)..a_{i-1}(u) a_i(delta) a_{i+1}(v)..a_n(v).
  return general_sum(ws, spec, true, [&](int pass, int f, const Alpha& a) -> const CVector& {
    if (f < pass) return U.get(a);
    if (f == pass) return D.get(a);
    return V.get(a);
  });
}

}  // namespace modspec
