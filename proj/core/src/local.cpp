#include "modspec/local.hpp"

#include <cmath>

namespace modspec {

CubeSampler::CubeSampler(const DecompositionFamily& fam, int oversample) : fam_(&fam) {
  const GridSpec& g = fam.grid();
  coarse_ = g;
  for (int a = 0; a < g.dim; ++a) {
    int reach = 0, width = 1;
    for (int k = -fam.edge(a); k <= fam.edge(a); ++k) {
      const auto& s = fam.axis_support(a, k);
      const int c = fam.centre_index(a, k);
      reach = std::max({reach, std::abs(s.lo - c), std::abs(s.hi() - c)});
      width = std::max(width, static_cast<int>(s.w.size()));
    }
    const int need = std::max(2 * reach + 2, oversample * width);
    int M = g.points[a];
    for (int d = 2; d <= g.points[a]; d += 2)
      if (g.points[a] % d == 0 && d >= need) {
        M = d;
        break;
      }
    M_[a] = M;
    coarse_.points[a] = M;
  }
}

std::vector<CubeSampler::Node> CubeSampler::patch(const Index& k) const {
  require_member(*fam_, k, "CubeSampler");
  const GridSpec& g = fam_->grid();
  const auto fst = g.strides();
  const auto cst = coarse_.strides();
  std::vector<Node> nodes;
  const AxisSupport* s[kMaxDim];
  AxisSupport unit{0, {1.0}};
  int centre[kMaxDim] = {0, 0, 0};
  for (int a = 0; a < kMaxDim; ++a) {
    s[a] = a < g.dim ? &fam_->axis_support(a, k[a]) : &unit;
    if (a < g.dim) centre[a] = fam_->centre_index(a, k[a]);
  }
  for (std::size_t i0 = 0; i0 < s[0]->w.size(); ++i0)
    for (std::size_t i1 = 0; i1 < s[1]->w.size(); ++i1)
      for (std::size_t i2 = 0; i2 < s[2]->w.size(); ++i2) {
        const int m[3] = {s[0]->lo + int(i0), s[1]->lo + int(i1), s[2]->lo + int(i2)};
        Node n{0, 0, s[0]->w[i0] * s[1]->w[i1] * s[2]->w[i2], {0, 0, 0}};
        for (int a = 0; a < g.dim; ++a) {
          n.fine += g.freq_slot(a, m[a]) * fst[a];
          n.coarse += coarse_.freq_slot(a, m[a] - centre[a]) * cst[a];
          n.xi[a] = m[a] * g.dxi(a);
        }
        nodes.push_back(n);
      }
  return nodes;
}

SpatialField CubeSampler::finish(CVector& buf, const GridSpec& grid, const Index& k) const {
  const GridSpec& g = fam_->grid();
  fft::execute(g.dim, coarse_.shape(), fft::Direction::Backward, buf.data(), buf.data());
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  // Restore the carrier exp(2 pi i c_a j_a / M_a) removed by the shift.
  const auto cst = coarse_.strides();
  std::array<std::vector<cplx>, kMaxDim> carrier;
  for (int a = 0; a < kMaxDim; ++a) {
    if (a >= g.dim) {
      carrier[a].assign(1, 1.0);
      continue;
    }
    const int c = fam_->centre_index(a, k[a]);
    carrier[a].resize(M_[a]);
    for (int j = 0; j < M_[a]; ++j) {
      const long r = (static_cast<long>(c) * j) % M_[a];
      carrier[a][j] = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(r) / M_[a]);
    }
  }
  const auto sh = coarse_.shape();
  for (int i0 = 0; i0 < sh[0]; ++i0)
    for (int i1 = 0; i1 < sh[1]; ++i1) {
      const cplx c01 = scale * carrier[0][i0] * carrier[1][i1];
      for (int i2 = 0; i2 < sh[2]; ++i2) buf[i0 * cst[0] + i1 * cst[1] + i2] *= c01 * carrier[2][i2];
    }
  return SpatialField(grid, Representation::Physical, std::move(buf));
}

SpatialField CubeSampler::sample(const SpatialField& F, const Index& k, const PatchSymbol& m) const {
  if (!F.is_frequency()) throw ContractError("CubeSampler::sample: expects frequency representation");
  require_same_space(F.grid(), fam_->grid(), "CubeSampler::sample");
  CVector buf(coarse_.size(), cplx{});
  for (const auto& n : patch(k)) buf[n.coarse] = n.weight * F[n.fine] * (m ? m(n.xi) : cplx(1));
  return finish(buf, coarse_, k);
}

SpacetimeField CubeSampler::sample(const SpacetimeField& F, const Index& k, const PatchSymbol& m) const {
  require_same_space(F.grid(), fam_->grid(), "CubeSampler::sample");
  const auto nodes = patch(k);
  std::vector<cplx> w(nodes.size());
  for (std::size_t p = 0; p < nodes.size(); ++p) w[p] = nodes[p].weight * (m ? m(nodes[p].xi) : cplx(1));
  const GridSpec window = coarse_.with_time(F.grid().horizon, F.grid().time_steps);
  std::vector<SpatialField> out;
  out.reserve(F.count());
  for (const auto& f : F.slices()) {
    if (!f.is_frequency()) throw ContractError("CubeSampler::sample: expects frequency representation");
    CVector buf(coarse_.size(), cplx{});
    for (std::size_t p = 0; p < nodes.size(); ++p) buf[nodes[p].coarse] = w[p] * f[nodes[p].fine];
    out.push_back(finish(buf, window, k));
  }
  return SpacetimeField(window, std::move(out));
}

SpacetimeField CubeSampler::sample_free(const SpatialField& F, const Index& k, int eps,
                                        const GridSpec& window, const PatchSymbol& m) const {
  if (!F.is_frequency()) throw ContractError("CubeSampler::sample_free: expects frequency representation");
  require_same_space(F.grid(), fam_->grid(), "CubeSampler::sample_free");
  require_eps(eps);
  const auto nodes = patch(k);
  const int d = fam_->grid().dim;
  std::vector<cplx> c(nodes.size());
  std::vector<double> omega(nodes.size());
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    c[p] = nodes[p].weight * F[nodes[p].fine] * (m ? m(nodes[p].xi) : cplx(1));
    omega[p] = dispersion(nodes[p].xi, d, eps);
  }
  const GridSpec cw = coarse_.with_time(window.horizon, window.time_steps);
  std::vector<SpatialField> out;
  out.reserve(static_cast<std::size_t>(window.time_steps) + 1);
  for (int s = 0; s <= window.time_steps; ++s) {
    const double t = window.time_at(s);
    CVector buf(coarse_.size(), cplx{});
    for (std::size_t p = 0; p < nodes.size(); ++p) buf[nodes[p].coarse] = c[p] * phase(t, omega[p]);
    out.push_back(finish(buf, cw, k));
  }
  return SpacetimeField(cw, std::move(out));
}

}  // namespace modspec
