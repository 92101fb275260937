#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "perpetua/linalg.hpp"
#include "perpetua/rng.hpp"

namespace perpetua {

// finite-support distribution on the real line
struct FiniteScalarLaw {
  std::vector<double> values;
  std::vector<double> weights;
};

// Law of an innovation-style random vector. Immutable, cheap to copy.
class VectorLaw {
 public:
  static VectorLaw zero(int d);
  static VectorLaw constant(Vec v);
  static VectorLaw gaussian(int d, double std);
  static VectorLaw finite_support(std::vector<Vec> atoms,
                                  std::vector<double> weights);

  int dim() const;
  std::string_view kind() const;  // "constant" | "gaussian" | "finite-support"
  Vec sample(RngStream& rng) const;

  // canonical JSON text of this law (sorted keys, round-trips via parse)
  std::string describe_json() const;

  struct Node;  // internal representation, defined in core/src

 private:
  explicit VectorLaw(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct PairSample {
  SquareMatrix m;
  Vec z;
};

// Joint law of one (coefficient matrix, innovation) pair. The process draws
// these i.i.d. across time. M and Z parts are always sampled independently
// of each other; "coupling" below refers to the scalar tuple inside a
// frame-diagonal matrix draw (all directions drawn jointly from one finite
// mixture of tuples).
class PairLaw {
 public:
  // degenerate law: every sample is exactly (m, z)
  static PairLaw constant(SquareMatrix m, Vec z);

  // M = sum_i a_i v_i v_i^T with independent finite-support scalars a_i,
  // Z drawn independently from zLaw. Frame must be orthonormal (1e-10).
  static PairLaw frame_diagonal(std::vector<Vec> frame,
                                std::vector<FiniteScalarLaw> scalarLaws,
                                VectorLaw zLaw);

  // same frame construction, but the whole scalar tuple (a_1..a_d) is drawn
  // from a finite mixture of tuples — the way to express couplings such as
  // a_2 = 3/2 - a_1
  static PairLaw frame_diagonal_coupled(std::vector<Vec> frame,
                                        std::vector<std::vector<double>> tuples,
                                        std::vector<double> weights,
                                        VectorLaw zLaw);

  // M entries i.i.d. N(0, entryStd^2) row-major, Z entries i.i.d. N(0, zStd^2)
  static PairLaw gaussian_entries(int d, double entryStd, double zStd);

  // mixture over whole pair laws
  static PairLaw finite_mixture(std::vector<PairLaw> components,
                                std::vector<double> weights);

  // base law's matrix part with an independently drawn replacement innovation
  static PairLaw composite(PairLaw base, VectorLaw zLaw);

  int dim() const;
  // "constant" | "frame-diagonal" | "gaussian-entries" | "finite-mixture" |
  // "composite"
  std::string_view kind() const;
  // true when the matrix draw uses jointly drawn scalar tuples
  bool coupled_scalars() const;

  PairSample sample(RngStream& rng) const;

  std::string describe_json() const;

  struct Node;  // internal representation, defined in core/src

 private:
  explicit PairLaw(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// JSON entry points (schema documented in docs/laws.md)
PairLaw parse_pair_law(const std::string& jsonText);
VectorLaw parse_vector_law(const std::string& jsonText);

}  // namespace perpetua
