#include "perpetua/laws.hpp"

#include <cmath>
#include <utility>

#include "laws_node.hpp"
#include "perpetua/errors.hpp"

namespace perpetua {

namespace {

void check_weights(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw InvalidInput(std::string(what) + ": no weights");
  double total = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0)
      throw InvalidInput(std::string(what) + ": weights must be >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidInput(std::string(what) + ": weights must sum to 1");
}

void check_finite_vec(const Vec& v, const char* what) {
  if (!all_finite(v))
    throw InvalidInput(std::string(what) + ": non-finite entry");
}

void check_scalar_law(const FiniteScalarLaw& law, const char* what) {
  if (law.values.size() != law.weights.size() || law.values.empty())
    throw InvalidInput(std::string(what) + ": values/weights size mismatch");
  for (double v : law.values)
    if (!std::isfinite(v))
      throw InvalidInput(std::string(what) + ": non-finite scalar value");
  check_weights(law.weights, what);
}

// orthonormality within 1e-10, exactly d directions in dimension d
void check_frame(const std::vector<Vec>& frame) {
  if (frame.empty()) throw FrameError("frame: empty");
  const std::size_t d = frame.size();
  if (d > std::size_t(kMaxDim)) throw FrameError("frame: too many directions");
  for (const Vec& v : frame) {
    if (v.size() != d)
      throw FrameError("frame: need exactly d vectors of dimension d");
    check_finite_vec(v, "frame");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(dot(frame[i], frame[j]) - want) > 1e-10)
        throw FrameError("frame: not orthonormal");
    }
}

// M = sum_i a_i v_i v_i^T. Zero factors are skipped so that a standard-basis
// frame yields an exactly diagonal matrix — downstream exactness tests
// depend on that.
SquareMatrix frame_matrix(const std::vector<Vec>& frame,
                          const std::vector<double>& a) {
  const int d = int(frame.size());
  SquareMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (a[std::size_t(i)] == 0.0) continue;
    const Vec& v = frame[std::size_t(i)];
    for (int r = 0; r < d; ++r) {
      if (v[std::size_t(r)] == 0.0) continue;
      for (int c = 0; c < d; ++c) {
        if (v[std::size_t(c)] == 0.0) continue;
        m(r, c) += a[std::size_t(i)] * v[std::size_t(r)] * v[std::size_t(c)];
      }
    }
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------- VectorLaw

VectorLaw::VectorLaw(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

VectorLaw VectorLaw::zero(int d) { return constant(Vec(std::size_t(d), 0.0)); }

VectorLaw VectorLaw::constant(Vec v) {
  if (v.empty() || v.size() > std::size_t(kMaxDim))
    throw InvalidInput("VectorLaw::constant: bad dimension");
  check_finite_vec(v, "VectorLaw::constant");
  const int d = int(v.size());
  return VectorLaw(std::make_shared<const Node>(
      Node{d, Node::Constant{std::move(v)}}));
}

VectorLaw VectorLaw::gaussian(int d, double std) {
  if (d < 1 || d > kMaxDim) throw InvalidInput("VectorLaw::gaussian: bad dim");
  if (!(std >= 0.0) || !std::isfinite(std))
    throw InvalidInput("VectorLaw::gaussian: std must be >= 0");
  return VectorLaw(std::make_shared<const Node>(Node{d, Node::Gaussian{std}}));
}

VectorLaw VectorLaw::finite_support(std::vector<Vec> atoms,
                                    std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw InvalidInput("VectorLaw::finite_support: atoms/weights mismatch");
  const std::size_t d = atoms.front().size();
  if (d == 0 || d > std::size_t(kMaxDim))
    throw InvalidInput("VectorLaw::finite_support: bad dimension");
  for (const Vec& a : atoms) {
    if (a.size() != d)
      throw DimensionError("VectorLaw::finite_support: ragged atoms");
    check_finite_vec(a, "VectorLaw::finite_support");
  }
  check_weights(weights, "VectorLaw::finite_support");
  return VectorLaw(std::make_shared<const Node>(Node{
      int(d), Node::FiniteSupport{std::move(atoms), std::move(weights)}}));
}

int VectorLaw::dim() const { return node_->dim; }

std::string_view VectorLaw::kind() const {
  switch (node_->alt.index()) {
    case 0: return "constant";
    case 1: return "gaussian";
    default: return "finite-support";
  }
}

Vec VectorLaw::sample(RngStream& rng) const {
  const Node& n = *node_;
  if (const auto* c = std::get_if<Node::Constant>(&n.alt)) return c->v;
  if (const auto* g = std::get_if<Node::Gaussian>(&n.alt)) {
    Vec out(std::size_t(n.dim));
    for (double& x : out) x = g->std * rng.gaussian();
    return out;
  }
  const auto& f = std::get<Node::FiniteSupport>(n.alt);
  return f.atoms[rng.categorical(f.weights)];
}

// ------------------------------------------------------------------ PairLaw

PairLaw::PairLaw(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

PairLaw PairLaw::constant(SquareMatrix m, Vec z) {
  if (std::size_t(m.dim()) != z.size())
    throw DimensionError("PairLaw::constant: matrix/vector dims differ");
  if (!m.all_finite()) throw InvalidInput("PairLaw::constant: non-finite M");
  check_finite_vec(z, "PairLaw::constant");
  const int d = m.dim();
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::Constant{std::move(m), std::move(z)}}));
}

PairLaw PairLaw::frame_diagonal(std::vector<Vec> frame,
                                std::vector<FiniteScalarLaw> scalarLaws,
                                VectorLaw zLaw) {
  check_frame(frame);
  const int d = int(frame.size());
  if (scalarLaws.size() != std::size_t(d))
    throw InvalidInput("frame_diagonal: need one scalar law per direction");
  for (const auto& s : scalarLaws) check_scalar_law(s, "frame_diagonal");
  if (zLaw.dim() != d)
    throw DimensionError("frame_diagonal: innovation dimension mismatch");
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::FrameDiagonal{std::move(frame), std::move(scalarLaws),
                                  {}, {}, std::move(zLaw), false}}));
}

PairLaw PairLaw::frame_diagonal_coupled(std::vector<Vec> frame,
                                        std::vector<std::vector<double>> tuples,
                                        std::vector<double> weights,
                                        VectorLaw zLaw) {
  check_frame(frame);
  const int d = int(frame.size());
  if (tuples.empty() || tuples.size() != weights.size())
    throw InvalidInput("frame_diagonal_coupled: tuples/weights mismatch");
  for (const auto& t : tuples) {
    if (t.size() != std::size_t(d))
      throw InvalidInput("frame_diagonal_coupled: tuple arity != d");
    for (double v : t)
      if (!std::isfinite(v))
        throw InvalidInput("frame_diagonal_coupled: non-finite scalar");
  }
  check_weights(weights, "frame_diagonal_coupled");
  if (zLaw.dim() != d)
    throw DimensionError("frame_diagonal_coupled: innovation dim mismatch");
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::FrameDiagonal{std::move(frame), {}, std::move(tuples),
                                  std::move(weights), std::move(zLaw), true}}));
}

PairLaw PairLaw::gaussian_entries(int d, double entryStd, double zStd) {
  if (d < 1 || d > kMaxDim) throw InvalidInput("gaussian_entries: bad dim");
  if (!(entryStd >= 0.0) || !(zStd >= 0.0) || !std::isfinite(entryStd) ||
      !std::isfinite(zStd))
    throw InvalidInput("gaussian_entries: std must be >= 0");
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::GaussianEntries{entryStd, zStd}}));
}

PairLaw PairLaw::finite_mixture(std::vector<PairLaw> components,
                                std::vector<double> weights) {
  if (components.empty() || components.size() != weights.size())
    throw InvalidInput("finite_mixture: components/weights mismatch");
  const int d = components.front().dim();
  for (const PairLaw& c : components)
    if (c.dim() != d) throw DimensionError("finite_mixture: mixed dimensions");
  check_weights(weights, "finite_mixture");
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::FiniteMixture{std::move(components), std::move(weights)}}));
}

PairLaw PairLaw::composite(PairLaw base, VectorLaw zLaw) {
  if (base.dim() != zLaw.dim())
    throw DimensionError("composite: dimension mismatch");
  const int d = base.dim();
  return PairLaw(std::make_shared<const Node>(
      Node{d, Node::Composite{std::move(base), std::move(zLaw)}}));
}

int PairLaw::dim() const { return node_->dim; }

std::string_view PairLaw::kind() const {
  switch (node_->alt.index()) {
    case 0: return "constant";
    case 1: return "frame-diagonal";
    case 2: return "gaussian-entries";
    case 3: return "finite-mixture";
    default: return "composite";
  }
}

bool PairLaw::coupled_scalars() const {
  if (const auto* f = std::get_if<Node::FrameDiagonal>(&node_->alt))
    return f->coupled;
  return false;
}

PairSample PairLaw::sample(RngStream& rng) const {
  const Node& n = *node_;
  switch (n.alt.index()) {
    case 0: {
      const auto& c = std::get<Node::Constant>(n.alt);
      return {c.m, c.z};
    }
    case 1: {
      const auto& f = std::get<Node::FrameDiagonal>(n.alt);
      std::vector<double> a;
      if (f.coupled) {
        a = f.tuples[rng.categorical(f.tupleWeights)];
      } else {
        a.reserve(f.scalarLaws.size());
        for (const auto& s : f.scalarLaws)
          a.push_back(s.values[rng.categorical(s.weights)]);
      }
      SquareMatrix m = frame_matrix(f.frame, a);
      return {std::move(m), f.zLaw.sample(rng)};
    }
    case 2: {
      const auto& g = std::get<Node::GaussianEntries>(n.alt);
      SquareMatrix m(n.dim);
      for (int r = 0; r < n.dim; ++r)
        for (int c = 0; c < n.dim; ++c) m(r, c) = g.entryStd * rng.gaussian();
      Vec z(std::size_t(n.dim));
      for (double& x : z) x = g.zStd * rng.gaussian();
      return {std::move(m), std::move(z)};
    }
    case 3: {
      const auto& mix = std::get<Node::FiniteMixture>(n.alt);
      return mix.components[rng.categorical(mix.weights)].sample(rng);
    }
    default: {
      const auto& c = std::get<Node::Composite>(n.alt);
      PairSample s = c.base.sample(rng);
      s.z = c.zLaw.sample(rng);
      return s;
    }
  }
}

}  // namespace perpetua
