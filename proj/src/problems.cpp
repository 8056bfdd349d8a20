#include "specgal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specgal/linalg.hpp"

namespace specgal::problems {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spec(const ProblemSpec& p) {
  if (p.kind == ProblemKind::synthetic_dense) {
    if (p.synthetic_eigenvalues.empty())
      throw Error(Errc::invalid_argument, "synthetic_dense: eigenvalue list is empty");
    for (double v : p.synthetic_eigenvalues)
      if (!std::isfinite(v))
        throw Error(Errc::invalid_argument, "synthetic_dense: eigenvalues must be finite");
  }
}

// Deterministic complex Gaussians (Box-Muller over mt19937_64 uniforms).
class Gaussians {
 public:
  explicit Gaussians(std::uint64_t seed) : gen_(seed) {}
  Complex next() {
    const double u1 = std::max((gen_() >> 11) * (1.0 / 9007199254740992.0), 1e-300);
    const double u2 = (gen_() >> 11) * (1.0 / 9007199254740992.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  std::mt19937_64 gen_;
};

Matrix seeded_unitary(Index n, std::uint64_t seed) {
  Gaussians g(seed);
  Matrix z(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) z(i, j) = g.next();
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix synthetic_full(const ProblemSpec& p) {
  const Index n = static_cast<Index>(p.synthetic_eigenvalues.size());
  const Matrix u = seeded_unitary(n, p.synthetic_seed);
  Matrix lambda = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) lambda(i, i) = p.synthetic_eigenvalues[i];
  Matrix t = u.adjoint() * lambda * u;
  return (t + t.adjoint()) / 2.0;
}

FormMatrices assemble_fourier(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "fourier_rank_one: level (half-width) must be >= 1");
  const Index dim = 2 * Index(n) + 1;
  FormMatrices fm;
  fm.t_hat = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      const long l = long(i) - n, k = long(j) - n;
      fm.t_hat(i, j) = fourier_symbol_coefficient(l - k);
    }
  fm.t_hat(n, n) += 10.0;  // rank-one term on the normalized constant mode
  fm.mass = Matrix::Identity(dim, dim);
  fm.dim = dim;
  fm.space_id = "fourier:n=" + std::to_string(n);
  return fm;
}

// Block operator t((u1,u2),(v1,v2)) = <u1',v1'> + <u2,v1'> + <u1',v2> + 2<u2,v2>
// on (P1 Dirichlet) + (P1 free); uniform mesh with N elements. Basis order:
// interior hats of the first component, then all hats of the second.
FormMatrices assemble_block_fem(int n_elems) {
  if (n_elems < 2) throw Error(Errc::invalid_argument, "block_fem: level (element count) must be >= 2");
  const Index nd = n_elems - 1, nf = n_elems + 1;
  const double h = 1.0 / n_elems;

  Matrix k = Matrix::Zero(nd, nd), md = Matrix::Zero(nd, nd);
  Matrix mf = Matrix::Zero(nf, nf), c = Matrix::Zero(nf, nd);
  for (Index e = 0; e < n_elems; ++e) {
    const Index nodes[2] = {e, e + 1};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Index na = nodes[a], nb = nodes[b];
        mf(na, nb) += (a == b) ? h / 3.0 : h / 6.0;
        if (na >= 1 && na <= nd && nb >= 1 && nb <= nd) {
          k(na - 1, nb - 1) += (a == b ? 1.0 : -1.0) / h;
          md(na - 1, nb - 1) += (a == b) ? h / 3.0 : h / 6.0;
        }
        if (nb >= 1 && nb <= nd) c(na, nb - 1) += (b == 1) ? 0.5 : -0.5;  // \int hat_a hat_b'
      }
    }
  }

  const Index dim = nd + nf;
  FormMatrices fm;
  fm.t_hat = Matrix::Zero(dim, dim);
  fm.t_hat.topLeftCorner(nd, nd) = k;
  fm.t_hat.topRightCorner(nd, nf) = c.transpose();
  fm.t_hat.bottomLeftCorner(nf, nd) = c;
  fm.t_hat.bottomRightCorner(nf, nf) = 2.0 * mf;
  fm.mass = Matrix::Zero(dim, dim);
  fm.mass.topLeftCorner(nd, nd) = md;
  fm.mass.bottomRightCorner(nf, nf) = mf;
  fm.dim = dim;
  fm.space_id = "fem:h=1/" + std::to_string(n_elems);
  return fm;
}

FormMatrices assemble_synthetic(const ProblemSpec& p, int level) {
  const Index n = static_cast<Index>(p.synthetic_eigenvalues.size());
  if (level < 1 || level > n)
    throw Error(Errc::invalid_argument, "synthetic_dense: level must be in 1..dim");
  FormMatrices fm;
  fm.t_hat = synthetic_full(p).topLeftCorner(level, level);
  fm.mass = Matrix::Identity(level, level);
  fm.dim = level;
  fm.space_id = "synthetic:k=" + std::to_string(level) + "/" + std::to_string(n);
  return fm;
}

// Values of the coarse P1 hat basis at the fine nodes, one mesh component.
Matrix fem_component_embedding(int coarse_elems, int fine_elems, bool dirichlet) {
  const double hc = 1.0 / coarse_elems;
  const auto nodes = [&](int elems) {
    std::vector<double> xs;
    const int lo = dirichlet ? 1 : 0, hi = dirichlet ? elems - 1 : elems;
    for (int i = lo; i <= hi; ++i) xs.push_back(double(i) / elems);
    return xs;
  };
  const auto xc = nodes(coarse_elems), xf = nodes(fine_elems);
  Matrix e = Matrix::Zero(Index(xf.size()), Index(xc.size()));
  for (Index j = 0; j < Index(xc.size()); ++j)
    for (Index i = 0; i < Index(xf.size()); ++i)
      e(i, j) = std::max(0.0, 1.0 - std::abs(xf[i] - xc[j]) / hc);
  return e;
}

}  // namespace

ProblemSpec ProblemSpec::fourier_rank_one() {
  ProblemSpec p;
  p.kind = ProblemKind::fourier_rank_one;
  return p;
}

ProblemSpec ProblemSpec::block_fem() {
  ProblemSpec p;
  p.kind = ProblemKind::block_fem;
  return p;
}

ProblemSpec ProblemSpec::synthetic_dense(std::vector<double> eigenvalues, std::uint64_t seed) {
  ProblemSpec p;
  p.kind = ProblemKind::synthetic_dense;
  p.synthetic_eigenvalues = std::move(eigenvalues);
  p.synthetic_seed = seed;
  check_spec(p);
  return p;
}

int ProblemSpec::full_level() const {
  if (kind != ProblemKind::synthetic_dense)
    throw Error(Errc::invalid_argument, "full_level is defined for synthetic problems only");
  return static_cast<int>(synthetic_eigenvalues.size());
}

Complex fourier_symbol_coefficient(long m) {
  if (m == 0) return {0.0, 0.0};
  const double linear = ((m % 2 == 0) ? 1.0 : -1.0) / double(m);  // from the -x part
  const double jump = (std::abs(m) % 2 == 1) ? 4.0 / double(m) : 0.0;
  return {0.0, linear + jump};
}

double block_fem_lambda(int k, int sign) {
  if (k < 1 || (sign != 1 && sign != -1))
    throw Error(Errc::invalid_argument, "block_fem_lambda: k >= 1 and sign in {-1,+1}");
  const double kpi2 = double(k) * double(k) * kPi * kPi;
  const double disc = std::sqrt((kpi2 + 2.0) * (kpi2 + 2.0) - 4.0 * kpi2);
  return (2.0 + kpi2 + sign * disc) / 2.0;
}

FormMatrices assemble(const ProblemSpec& problem, int level) {
  check_spec(problem);
  switch (problem.kind) {
    case ProblemKind::fourier_rank_one:
      return assemble_fourier(level);
    case ProblemKind::block_fem:
      return assemble_block_fem(level);
    case ProblemKind::synthetic_dense:
      return assemble_synthetic(problem, level);
  }
  throw Error(Errc::invalid_argument, "assemble: unknown problem kind");
}

NestedSpaces embed(const ProblemSpec& problem, int coarse_level, int fine_level) {
  check_spec(problem);
  NestedSpaces ns;
  switch (problem.kind) {
    case ProblemKind::fourier_rank_one: {
      if (coarse_level < 1 || fine_level < coarse_level)
        throw Error(Errc::invalid_argument, "fourier embed: need 1 <= coarse <= fine half-width");
      const Index nc = 2 * Index(coarse_level) + 1, nf = 2 * Index(fine_level) + 1;
      ns.embedding = Matrix::Zero(nf, nc);
      ns.embedding.block(fine_level - coarse_level, 0, nc, nc) = Matrix::Identity(nc, nc);
      ns.coarse_dim = nc;
      ns.fine_dim = nf;
      ns.exact = true;
      return ns;
    }
    case ProblemKind::block_fem: {
      if (coarse_level < 2 || fine_level < coarse_level)
        throw Error(Errc::invalid_argument, "fem embed: need 2 <= coarse <= fine element count");
      const Matrix ed = fem_component_embedding(coarse_level, fine_level, true);
      const Matrix ef = fem_component_embedding(coarse_level, fine_level, false);
      ns.coarse_dim = 2 * coarse_level;
      ns.fine_dim = 2 * fine_level;
      ns.embedding = Matrix::Zero(ns.fine_dim, ns.coarse_dim);
      ns.embedding.topLeftCorner(ed.rows(), ed.cols()) = ed;
      ns.embedding.bottomRightCorner(ef.rows(), ef.cols()) = ef;
      ns.exact = (fine_level % coarse_level == 0);
      return ns;
    }
    case ProblemKind::synthetic_dense: {
      const Index n = static_cast<Index>(problem.synthetic_eigenvalues.size());
      if (coarse_level < 1 || fine_level < coarse_level || fine_level > n)
        throw Error(Errc::invalid_argument, "synthetic embed: need 1 <= coarse <= fine <= dim");
      ns.coarse_dim = coarse_level;
      ns.fine_dim = fine_level;
      ns.embedding = Matrix::Identity(ns.fine_dim, ns.coarse_dim);
      ns.exact = true;
      return ns;
    }
  }
  throw Error(Errc::invalid_argument, "embed: unknown problem kind");
}

ReferenceSpectrum reference_spectrum(const ProblemSpec& problem) {
  check_spec(problem);
  ReferenceSpectrum ref;
  switch (problem.kind) {
    case ProblemKind::fourier_rank_one:
      ref.eigenvalues = {{-1.64834270, 1}, {11.97518502, 1}};
      ref.essential_intervals = {{-2.0 * kPi, -kPi}, {kPi, 2.0 * kPi}};
      return ref;
    case ProblemKind::block_fem: {
      std::vector<double> vals;
      vals.push_back(2.0);
      for (int k = 1; k <= 8; ++k) {
        vals.push_back(block_fem_lambda(k, -1));
        vals.push_back(block_fem_lambda(k, +1));
      }
      std::sort(vals.begin(), vals.end());
      for (double v : vals) ref.eigenvalues.push_back({v, 1});
      ref.essential_intervals = {{1.0, 1.0}};
      return ref;
    }
    case ProblemKind::synthetic_dense: {
      std::vector<double> vals = problem.synthetic_eigenvalues;
      std::sort(vals.begin(), vals.end());
      for (double v : vals) {
        if (!ref.eigenvalues.empty() && std::abs(ref.eigenvalues.back().first - v) <= 1e-12)
          ref.eigenvalues.back().second += 1;
        else
          ref.eigenvalues.push_back({v, 1});
      }
      return ref;
    }
  }
  throw Error(Errc::invalid_argument, "reference_spectrum: unknown problem kind");
}

Matrix synthetic_eigenbasis(const ProblemSpec& problem) {
  check_spec(problem);
  if (problem.kind != ProblemKind::synthetic_dense)
    throw Error(Errc::invalid_argument, "synthetic_eigenbasis: synthetic problems only");
  const Index n = static_cast<Index>(problem.synthetic_eigenvalues.size());
  return seeded_unitary(n, problem.synthetic_seed).adjoint();
}

}  // namespace specgal::problems
