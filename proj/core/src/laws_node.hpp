#pragma once

// Internal law representations, shared between laws.cpp (construction and
// sampling) and laws_json.cpp (serialization). Not installed.

#include <variant>
#include <vector>

#include "perpetua/laws.hpp"

namespace perpetua {

struct VectorLaw::Node {
  struct Constant {
    Vec v;
  };
  struct Gaussian {
    double std;
  };
  struct FiniteSupport {
    std::vector<Vec> atoms;
    std::vector<double> weights;
  };

  int dim;
  std::variant<Constant, Gaussian, FiniteSupport> alt;
};

struct PairLaw::Node {
  struct Constant {
    SquareMatrix m;
    Vec z;
  };
  struct FrameDiagonal {
    std::vector<Vec> frame;
    // independent mode: one scalar law per direction; coupled mode: a finite
    // mixture over whole tuples (exactly one of the two is populated)
    std::vector<FiniteScalarLaw> scalarLaws;
    std::vector<std::vector<double>> tuples;
    std::vector<double> tupleWeights;
    VectorLaw zLaw;
    bool coupled;
  };
  struct GaussianEntries {
    double entryStd;
    double zStd;
  };
  struct FiniteMixture {
    std::vector<PairLaw> components;
    std::vector<double> weights;
  };
  struct Composite {
    PairLaw base;
    VectorLaw zLaw;
  };

  int dim;
  std::variant<Constant, FrameDiagonal, GaussianEntries, FiniteMixture,
               Composite>
      alt;
};

}  // namespace perpetua
