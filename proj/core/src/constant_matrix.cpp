#include "perpetua/constant_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "perpetua/errors.hpp"

namespace perpetua {

namespace {

constexpr double kAnnihilationRelTol = 1e-8;
constexpr double kAmbiguityFactor = 100.0;
constexpr double kMaxConditionNumber = 1e12;
constexpr double kInvariantTol = 1e-8;
constexpr double kBoundaryBand = 1e-12;
// Numerically computed m-fold roots scatter like eps^(1/m); the base radius
// absorbs the m = 2 scatter, and coarser clusterings are only tried when the
// finer one fails to reconstruct the powers.
constexpr double kClusterScatterFactor = 50.0;
constexpr double kClusterFloor = 1e-8;
constexpr double kClusterEscalation = 100.0;
constexpr int kMaxClusterEscalations = 3;
constexpr int kValidationExtraPowers = 5;

Eigen::MatrixXd to_eigen(const SquareMatrix& m) {
  const auto d = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

void require_square_input(const SquareMatrix& m) {
  if (m.dim() == 0)
    throw InvalidInput("matrix must have positive dimension");
  if (m.dim() > kMaxDim)
    throw InvalidInput("matrix dimension exceeds the supported maximum");
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (!std::isfinite(m(i, j)))
        throw InvalidInput("matrix entries must be finite");
}

// Integer power of a complex number by binary exponentiation; deterministic
// and branch-cut free, unlike std::pow on complex arguments.
Complex cpow_int(Complex base, int e) {
  Complex acc(1.0, 0.0);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// j-th derivative of x^t evaluated at lambda:
//   t (t-1) ... (t-j+1) * lambda^(t-j),  zero when j > t.
Complex power_derivative(int t, Complex lambda, int j) {
  if (j > t) return Complex(0.0, 0.0);
  double falling = 1.0;
  for (int i = 0; i < j; ++i) falling *= static_cast<double>(t - i);
  return falling * cpow_int(lambda, t - j);
}

struct MinimalFit {
  int degree = 0;
  std::vector<Complex> coefficients;  // ascending, monic
};

MinimalFit fit_minimal_polynomial(const SquareMatrix& m) {
  require_square_input(m);
  const std::size_t d = m.dim();
  const auto n2 = static_cast<Eigen::Index>(d * d);

  std::vector<SquareMatrix> powers;
  powers.reserve(d + 1);
  powers.push_back(SquareMatrix::identity(d));
  for (std::size_t k = 0; k < d; ++k) powers.push_back(powers.back() * m);

  const double normM = spectral_norm(m);

  const auto vec_of = [&](const SquareMatrix& p) {
    Eigen::VectorXd v(n2);
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) v(idx++) = p(i, j);
    return v;
  };

  int nearMissDegree = 0;
  double nearMissResidual = 0.0;
  for (std::size_t deg = 1; deg <= d; ++deg) {
    Eigen::MatrixXd krylov(n2, static_cast<Eigen::Index>(deg));
    for (std::size_t k = 0; k < deg; ++k)
      krylov.col(static_cast<Eigen::Index>(k)) = vec_of(powers[k]);
    const Eigen::VectorXd rhs = vec_of(powers[deg]);

    const Eigen::VectorXd c =
        krylov.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    const double residual = (krylov * c - rhs).norm();
    const double tol =
        kAnnihilationRelTol * std::pow(normM, static_cast<double>(deg));

    if (residual <= tol) {
      if (nearMissDegree > 0) {
        std::ostringstream msg;
        msg << "minimal polynomial degree is ambiguous: degree "
            << nearMissDegree << " nearly annihilates (residual "
            << nearMissResidual << ") while degree " << deg
            << " annihilates within tolerance " << tol;
        throw DegeneracyError(msg.str());
      }
      MinimalFit fit;
      fit.degree = static_cast<int>(deg);
      fit.coefficients.resize(deg + 1);
      for (std::size_t k = 0; k < deg; ++k)
        fit.coefficients[k] = Complex(-c(static_cast<Eigen::Index>(k)), 0.0);
      fit.coefficients[deg] = Complex(1.0, 0.0);
      return fit;
    }
    if (residual <= kAmbiguityFactor * tol && nearMissDegree == 0) {
      nearMissDegree = static_cast<int>(deg);
      nearMissResidual = residual;
    }
  }
  throw DegeneracyError(
      "no polynomial of degree up to the matrix dimension annihilates the "
      "matrix within tolerance");
}

std::vector<Complex> companion_roots(const std::vector<Complex>& monic) {
  const int deg = static_cast<int>(monic.size()) - 1;
  if (deg == 1) return {-monic[0]};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -monic[i];
  for (int i = 0; i + 1 < deg; ++i) companion(i + 1, i) = Complex(1.0, 0.0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion);
  if (solver.info() != Eigen::Success)
    throw ConditioningError("eigenvalue iteration failed to converge");
  std::vector<Complex> roots;
  for (int i = 0; i < deg; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

struct Cluster {
  Complex value;
  int multiplicity = 0;
};

// Connected components of the roots under "closer than radius", each
// represented by its mean.
std::vector<Cluster> cluster_at(const std::vector<Complex>& roots,
                                double radius) {
  std::vector<int> parent(roots.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    parent[i] = static_cast<int>(i);
  const auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a)
      a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= radius)
        parent[static_cast<std::size_t>(find(static_cast<int>(j)))] =
            find(static_cast<int>(i));

  std::vector<Cluster> clusters;
  std::vector<int> clusterOf(roots.size(), -1);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const int rep = find(static_cast<int>(i));
    if (clusterOf[static_cast<std::size_t>(rep)] < 0) {
      clusterOf[static_cast<std::size_t>(rep)] =
          static_cast<int>(clusters.size());
      clusters.push_back(Cluster{});
    }
    Cluster& cl = clusters[static_cast<std::size_t>(
        clusterOf[static_cast<std::size_t>(rep)])];
    cl.value += roots[i];
    cl.multiplicity += 1;
  }
  for (Cluster& cl : clusters)
    cl.value /= static_cast<double>(cl.multiplicity);
  return clusters;
}

// Nonincreasing modulus, ties broken by descending real then imaginary part.
// Tie runs are detected with a tolerance so that conjugate pairs (whose
// moduli and real parts agree only up to roundoff) order deterministically.
void sort_clusters(std::vector<Cluster>& cl, double scale) {
  const double tol = 1e-9 * scale;
  std::sort(cl.begin(), cl.end(), [](const Cluster& a, const Cluster& b) {
    return std::abs(a.value) > std::abs(b.value);
  });
  std::size_t i = 0;
  while (i < cl.size()) {
    std::size_t j = i + 1;
    while (j < cl.size() &&
           std::fabs(std::abs(cl[i].value) - std::abs(cl[j].value)) <= tol)
      ++j;
    std::sort(cl.begin() + static_cast<std::ptrdiff_t>(i),
              cl.begin() + static_cast<std::ptrdiff_t>(j),
              [](const Cluster& a, const Cluster& b) {
                return a.value.real() > b.value.real();
              });
    std::size_t p = i;
    while (p < j) {
      std::size_t q = p + 1;
      while (q < j &&
             std::fabs(cl[p].value.real() - cl[q].value.real()) <= tol)
        ++q;
      std::sort(cl.begin() + static_cast<std::ptrdiff_t>(p),
                cl.begin() + static_cast<std::ptrdiff_t>(q),
                [](const Cluster& a, const Cluster& b) {
                  return a.value.imag() > b.value.imag();
                });
      p = q;
    }
    i = j;
  }
}

double frob_dev(const SquareMatrix& a, const SquareMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const double d = a(i, j) - b(i, j);
      s += d * d;
    }
  return std::sqrt(s);
}

// Solves the power-interpolation system for a given clustering and enforces
// the reconstruction invariants; throws ConditioningError when the
// clustering cannot support an accurate solution.
SpectralDecomposition solve_components(const SquareMatrix& m, int deg,
                                       const std::vector<Cluster>& clusters) {
  const std::size_t d = m.dim();

  std::vector<std::pair<int, int>> slots;
  for (std::size_t k = 0; k < clusters.size(); ++k)
    for (int j = 0; j < clusters[k].multiplicity; ++j)
      slots.emplace_back(static_cast<int>(k), j);

  Eigen::MatrixXcd system(deg, deg);
  for (int t = 0; t < deg; ++t)
    for (int s = 0; s < deg; ++s)
      system(t, s) =
          power_derivative(t,
                           clusters[static_cast<std::size_t>(
                                        slots[static_cast<std::size_t>(s)]
                                            .first)]
                               .value,
                           slots[static_cast<std::size_t>(s)].second);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      system, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sMax = svd.singularValues()(0);
  const double sMin = svd.singularValues()(deg - 1);
  if (!(sMin > 0.0) || sMax / sMin > kMaxConditionNumber)
    throw ConditioningError(
        "power-interpolation system is too ill-conditioned to separate the "
        "spectral components");

  Eigen::MatrixXcd rhs(deg, static_cast<Eigen::Index>(d * d));
  SquareMatrix power = SquareMatrix::identity(d);
  for (int t = 0; t < deg; ++t) {
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        rhs(t, idx++) = Complex(power(i, j), 0.0);
    if (t + 1 < deg) power = power * m;
  }

  const Eigen::MatrixXcd solution = svd.solve(rhs);

  SpectralDecomposition dec;
  dec.components.resize(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    dec.eigenvalues.push_back(clusters[k].value);
    dec.multiplicities.push_back(clusters[k].multiplicity);
    dec.components[k].assign(
        static_cast<std::size_t>(clusters[k].multiplicity), ComplexMatrix(d));
  }
  for (int s = 0; s < deg; ++s) {
    const auto [k, j] = slots[static_cast<std::size_t>(s)];
    ComplexMatrix& z = dec.components[static_cast<std::size_t>(k)]
                                     [static_cast<std::size_t>(j)];
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t c = 0; c < d; ++c) z(i, c) = solution(s, idx++);
  }

  // Invariant: leading components resolve the identity.
  double maxIdentityDev = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t c = 0; c < d; ++c) {
      Complex sum(0.0, 0.0);
      for (std::size_t k = 0; k < clusters.size(); ++k)
        sum += dec.components[k][0](i, c);
      const double target = (i == c) ? 1.0 : 0.0;
      maxIdentityDev = std::max(maxIdentityDev, std::abs(sum - target));
    }
  }
  if (maxIdentityDev > kInvariantTol)
    throw ConditioningError(
        "leading spectral components do not resolve the identity within "
        "tolerance");

  // Invariant: the reconstruction reproduces the matrix itself.
  const SquareMatrix recon1 = power_via_spectral(dec, 1);
  if (frob_dev(recon1, m) > kInvariantTol * (1.0 + frobenius_norm(m)))
    throw ConditioningError(
        "spectral components fail to reconstruct the matrix within "
        "tolerance");

  // Invariant: the components are linearly independent (nonsingular Gram
  // matrix of the vectorized components).
  Eigen::MatrixXcd gram(deg, deg);
  for (int a = 0; a < deg; ++a) {
    for (int b = 0; b < deg; ++b) {
      const auto [ka, ja] = slots[static_cast<std::size_t>(a)];
      const auto [kb, jb] = slots[static_cast<std::size_t>(b)];
      Complex dot(0.0, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < d; ++c)
          dot += std::conj(dec.components[static_cast<std::size_t>(ka)]
                                         [static_cast<std::size_t>(ja)](i, c)) *
                 dec.components[static_cast<std::size_t>(kb)]
                               [static_cast<std::size_t>(jb)](i, c);
      gram(a, b) = dot;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> gramSvd(gram);
  const double gMax = gramSvd.singularValues()(0);
  const double gMin = gramSvd.singularValues()(deg - 1);
  if (!(gMin > 0.0) || gMax / gMin > kMaxConditionNumber)
    throw ConditioningError(
        "spectral components are numerically linearly dependent");

  return dec;
}

// Out-of-sample check: the interpolation rows (t < deg) are fitted by
// construction, so an under-merged clustering only reveals itself at higher
// powers.
void validate_beyond_degree(const SquareMatrix& m, int deg,
                            const SpectralDecomposition& dec) {
  SquareMatrix direct = SquareMatrix::identity(m.dim());
  for (int t = 0; t < deg; ++t) direct = direct * m;
  for (int t = deg; t < deg + kValidationExtraPowers; ++t) {
    const SquareMatrix recon = power_via_spectral(dec, t);
    if (frob_dev(recon, direct) >
        kInvariantTol * (1.0 + frobenius_norm(direct)))
      throw ConditioningError(
          "spectral components fail to reconstruct powers beyond the "
          "interpolation degree");
    direct = direct * m;
  }
}

}  // namespace

std::vector<Complex> minimal_polynomial(const SquareMatrix& m) {
  return fit_minimal_polynomial(m).coefficients;
}

SpectralDecomposition spectral_components(const SquareMatrix& m) {
  const MinimalFit fit = fit_minimal_polynomial(m);
  const int deg = fit.degree;
  const std::vector<Complex> roots = companion_roots(fit.coefficients);

  double scale = 1.0;
  for (const Complex& r : roots) scale = std::max(scale, std::abs(r));
  const double eps = std::numeric_limits<double>::epsilon();
  const double baseRadius =
      scale * std::max(kClusterFloor, kClusterScatterFactor * std::sqrt(eps));

  std::string failure;
  std::size_t previousCount = roots.size() + 1;
  for (int esc = 0; esc < kMaxClusterEscalations; ++esc) {
    const double radius = baseRadius * std::pow(kClusterEscalation, esc);
    std::vector<Cluster> clusters = cluster_at(roots, radius);
    if (clusters.size() == previousCount) continue;  // same partition
    previousCount = clusters.size();
    sort_clusters(clusters, scale);
    try {
      SpectralDecomposition dec = solve_components(m, deg, clusters);
      validate_beyond_degree(m, deg, dec);
      return dec;
    } catch (const ConditioningError& e) {
      failure = e.what();
      if (clusters.size() == 1) break;  // cannot coarsen further
    }
  }
  throw ConditioningError(
      failure.empty()
          ? "no eigenvalue clustering yields well-conditioned components"
          : failure);
}

SquareMatrix power_via_spectral(const SpectralDecomposition& dec, int t) {
  if (t < 0) throw InvalidInput("power exponent must be nonnegative");
  if (dec.eigenvalues.empty() || dec.components.empty())
    throw InvalidInput("decomposition has no components");
  const std::size_t d = dec.components[0][0].dim();

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    for (int j = 0; j < dec.multiplicities[k]; ++j) {
      const Complex f = power_derivative(t, dec.eigenvalues[k], j);
      if (f == Complex(0.0, 0.0)) continue;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t c = 0; c < d; ++c)
          acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
              f * dec.components[k][static_cast<std::size_t>(j)](i, c);
    }
  }

  const double reNorm = acc.real().norm();
  const double imNorm = acc.imag().norm();
  if (imNorm > kInvariantTol * (1.0 + reNorm))
    throw ConditioningError(
        "reconstructed power has a non-negligible imaginary part");

  SquareMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t c = 0; c < d; ++c)
      out(i, c) = acc(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(c)).real();
  return out;
}

C0ExactResult c0_exact(const SquareMatrix& m) {
  require_square_input(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m),
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw ConditioningError("eigenvalue iteration failed to converge");

  double rho = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(solver.eigenvalues()(i)));

  C0ExactResult result;
  result.dominantModulus = rho;
  result.holds = rho < 1.0 - kBoundaryBand;
  result.boundaryWarning = std::fabs(rho - 1.0) <= kBoundaryBand;
  return result;
}

}  // namespace perpetua
