#include "mpf/sim.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "mpf/errors.hpp"

namespace mpf {

namespace {

using cd = std::complex<double>;

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

ComplexMatrix pauli(char which) {
  ComplexMatrix p(2, 2);
  switch (which) {
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: p.setIdentity();
  }
  return p;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// P_a on site a and P_b on site b (1-based), identity elsewhere.
ComplexMatrix two_site(int sites, int a, int b, char flavor) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 1; s <= sites; ++s) out = kron(out, pauli((s == a || s == b) ? flavor : 'I'));
  return out;
}

}  // namespace

HamiltonianModel::HamiltonianModel(std::vector<ComplexMatrix> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("Hamiltonian needs at least one term");
  dimension_ = terms_.front().rows();
  if (!is_power_of_two(dimension_)) throw std::invalid_argument("dimension must be a power of two");
  ComplexMatrix sum = ComplexMatrix::Zero(dimension_, dimension_);
  spectra_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.rows() != dimension_ || t.cols() != dimension_) throw DimensionMismatch("terms differ in dimension");
    const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    if ((t - t.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw std::invalid_argument("term is not Hermitian");
    spectra_.push_back(decompose(t));
    lambda_ += spectra_.back().values.cwiseAbs().maxCoeff();
    sum += t;
  }
  total_ = decompose(sum);
}

HamiltonianModel::Spectral HamiltonianModel::decompose(const ComplexMatrix& h) {
  // Symmetrize so roundoff in the input cannot leak an anti-Hermitian part.
  const ComplexMatrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix HamiltonianModel::exponentiate(const Spectral& s, double t) {
  Eigen::VectorXcd phases(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) phases(i) = std::polar(1.0, -s.values(i) * t);
  return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

ComplexMatrix HamiltonianModel::total() const {
  return total_.vectors * total_.values.cast<cd>().asDiagonal() * total_.vectors.adjoint();
}

ComplexMatrix HamiltonianModel::term_exponential(std::size_t j, double t) const {
  return exponentiate(spectra_.at(j), t);
}

ComplexMatrix HamiltonianModel::exponential(double t) const { return exponentiate(total_, t); }

HamiltonianModel heisenberg_chain(int sites) {
  if (sites < 2) throw std::invalid_argument("chain needs at least two sites");
  if (sites > kMaxSites) throw DimensionCap("chain of " + std::to_string(sites) + " sites exceeds the cap of " +
                                            std::to_string(kMaxSites));
  std::vector<ComplexMatrix> terms;
  terms.reserve(static_cast<std::size_t>(3 * sites));
  for (int j = 1; j <= sites; ++j) {
    const int next = j % sites + 1;
    for (char flavor : {'X', 'Y', 'Z'}) terms.push_back(two_site(sites, j, next, flavor));
  }
  return HamiltonianModel(std::move(terms));
}

HamiltonianModel random_hamiltonian(int n_qubits, int n_terms, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > kMaxSites || n_terms < 1) throw std::invalid_argument("bad random model shape");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<ComplexMatrix> terms;
  for (int t = 0; t < n_terms; ++t) {
    ComplexMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cd(normal(rng), normal(rng));
    ComplexMatrix h = (g + g.adjoint()) * 0.5;
    h /= spectral_norm(h);
    terms.push_back(std::move(h));
  }
  return HamiltonianModel(std::move(terms));
}

ComplexMatrix exact_evolution(const HamiltonianModel& h, double t) { return h.exponential(t); }

ComplexMatrix trotter_u1(const HamiltonianModel& h, double delta) {
  ComplexMatrix u = h.term_exponential(0, delta);
  for (std::size_t j = 1; j < h.num_terms(); ++j) u = u * h.term_exponential(j, delta);
  return u;
}

ComplexMatrix trotter_u1_reversed(const HamiltonianModel& h, double delta) {
  const std::size_t n = h.num_terms();
  ComplexMatrix u = h.term_exponential(n - 1, delta);
  for (std::size_t j = n - 1; j-- > 0;) u = u * h.term_exponential(j, delta);
  return u;
}

ComplexMatrix trotter_u2(const HamiltonianModel& h, double delta) {
  return trotter_u1(h, delta / 2) * trotter_u1_reversed(h, delta / 2);
}

std::int64_t suzuki_u2_queries(int alpha) {
  if (alpha < 2 || alpha % 2 != 0) throw std::invalid_argument("alpha must be even and >= 2");
  std::int64_t q = 1;
  for (int a = 4; a <= alpha; a += 2) q *= 5;
  return q;
}

ComplexMatrix suzuki_u_alpha(const HamiltonianModel& h, double delta, int alpha, std::int64_t* u2_calls) {
  if (alpha < 2 || alpha % 2 != 0) throw std::invalid_argument("alpha must be even and >= 2");
  if (alpha == 2) {
    if (u2_calls) ++*u2_calls;
    return trotter_u2(h, delta);
  }
  const double p = 1.0 / (4.0 - std::pow(4.0, 1.0 / (alpha - 1)));
  const ComplexMatrix outer = suzuki_u_alpha(h, p * delta, alpha - 2, u2_calls);
  if (u2_calls) *u2_calls += 3 * suzuki_u2_queries(alpha - 2);  // the outer factor is reused four times
  const ComplexMatrix inner = suzuki_u_alpha(h, (1.0 - 4.0 * p) * delta, alpha - 2, u2_calls);
  const ComplexMatrix outer2 = outer * outer;
  return outer2 * inner * outer2;
}

ComplexMatrix matrix_power(const ComplexMatrix& u, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("negative matrix power");
  ComplexMatrix result = ComplexMatrix::Identity(u.rows(), u.cols());
  ComplexMatrix base = u;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace {

ComplexMatrix mpf_term(const HamiltonianModel& h, int base_order, std::int64_t k, double delta) {
  return matrix_power(suzuki_u_alpha(h, delta / static_cast<double>(k), base_order), k);
}

}  // namespace

ComplexMatrix apply_mpf_serial(const HamiltonianModel& h, const MpfFormula& formula, double delta) {
  const std::vector<double> a = formula.coefficients_as_double();
  ComplexMatrix out = ComplexMatrix::Zero(h.dimension(), h.dimension());
  for (std::size_t j = 0; j < formula.size(); ++j)
    out += a[j] * mpf_term(h, formula.base_order(), formula.exponents()[j], delta);
  return out;
}

ComplexMatrix apply_mpf(const HamiltonianModel& h, const MpfFormula& formula, double delta) {
  const std::vector<double> a = formula.coefficients_as_double();
  const auto n = static_cast<std::ptrdiff_t>(formula.size());
  std::vector<ComplexMatrix> parts(formula.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    parts[i] = a[i] * mpf_term(h, formula.base_order(), formula.exponents()[i], delta);
  }
  // Summed in index order so the result matches the serial reference bit for bit.
  ComplexMatrix out = ComplexMatrix::Zero(h.dimension(), h.dimension());
  for (const auto& p : parts) out += p;
  return out;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0;
  const ComplexMatrix gram = a.rows() >= a.cols() ? ComplexMatrix(a.adjoint() * a) : ComplexMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double evolution_error(const HamiltonianModel& h, const MpfFormula& formula, double t, std::int64_t r) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  const ComplexMatrix step = apply_mpf(h, formula, t / static_cast<double>(r));
  return spectral_norm(matrix_power(step, r) - exact_evolution(h, t));
}

double product_formula_error(const HamiltonianModel& h, int alpha, double t, std::int64_t r) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  const ComplexMatrix step = suzuki_u_alpha(h, t / static_cast<double>(r), alpha);
  return spectral_norm(matrix_power(step, r) - exact_evolution(h, t));
}

double unitarity_defect(const ComplexMatrix& u) {
  return spectral_norm(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace mpf
