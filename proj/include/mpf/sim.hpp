#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "mpf/formula.hpp"

namespace mpf {

using ComplexMatrix = Eigen::MatrixXcd;

/// H = sum_j h_j with dense Hermitian terms. Spectral decompositions of every
/// term and of the total are computed once at construction; the model is
/// immutable afterwards and safe to share across threads.
class HamiltonianModel {
 public:
  explicit HamiltonianModel(std::vector<ComplexMatrix> terms);

  [[nodiscard]] Eigen::Index dimension() const { return dimension_; }
  [[nodiscard]] std::size_t num_terms() const { return terms_.size(); }
  [[nodiscard]] const std::vector<ComplexMatrix>& terms() const { return terms_; }
  /// sum_j ||h_j|| in the spectral norm.
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] ComplexMatrix total() const;

  /// e^{-i h_j t}
  [[nodiscard]] ComplexMatrix term_exponential(std::size_t j, double t) const;
  /// e^{-i H t}
  [[nodiscard]] ComplexMatrix exponential(double t) const;
  [[nodiscard]] const Eigen::VectorXd& total_spectrum() const { return total_.values; }

 private:
  struct Spectral {
    Eigen::VectorXd values;
    ComplexMatrix vectors;
  };
  static Spectral decompose(const ComplexMatrix& h);
  static ComplexMatrix exponentiate(const Spectral& s, double t);

  Eigen::Index dimension_ = 0;
  std::vector<ComplexMatrix> terms_;
  std::vector<Spectral> spectra_;
  Spectral total_;
  double lambda_ = 0;
};

inline constexpr int kMaxSites = 12;

/// Periodic chain sum_{j=1}^{N} (X_j X_{j+1} + Y_j Y_{j+1} + Z_j Z_{j+1}),
/// site N+1 = site 1. Terms ordered by bond j ascending, then X, Y, Z. Site 1
/// is the most significant qubit. N = 2 keeps both bonds (1,2) and (2,1).
/// Throws DimensionCap above kMaxSites.
[[nodiscard]] HamiltonianModel heisenberg_chain(int sites);

/// Random dense Hermitian terms on n_qubits, each with unit spectral norm.
[[nodiscard]] HamiltonianModel random_hamiltonian(int n_qubits, int n_terms, std::uint64_t seed);

[[nodiscard]] ComplexMatrix exact_evolution(const HamiltonianModel& h, double t);

/// prod_j e^{-i h_j delta} in stored order (left to right).
[[nodiscard]] ComplexMatrix trotter_u1(const HamiltonianModel& h, double delta);
/// Same product in reversed term order.
[[nodiscard]] ComplexMatrix trotter_u1_reversed(const HamiltonianModel& h, double delta);
/// U1(delta/2) times reversed U1(delta/2).
[[nodiscard]] ComplexMatrix trotter_u2(const HamiltonianModel& h, double delta);

/// Suzuki fractal with p = 1 / (4 - 4^{1/(alpha-1)}):
///   U_a(d) = U_{a-2}(p d)^2 U_{a-2}((1 - 4p) d) U_{a-2}(p d)^2.
/// When u2_calls is given it is incremented once per base U2 invocation.
[[nodiscard]] ComplexMatrix suzuki_u_alpha(const HamiltonianModel& h, double delta, int alpha,
                                           std::int64_t* u2_calls = nullptr);

/// Number of U2 invocations inside U_alpha: 5^{alpha/2 - 1}.
[[nodiscard]] std::int64_t suzuki_u2_queries(int alpha);

/// U^k by repeated squaring.
[[nodiscard]] ComplexMatrix matrix_power(const ComplexMatrix& u, std::int64_t k);

/// sum_j a_j U_base(delta / k_j)^{k_j} with the base sequence of the
/// formula's base order. The terms are evaluated in parallel; the serial
/// variant is the reference.
[[nodiscard]] ComplexMatrix apply_mpf(const HamiltonianModel& h, const MpfFormula& formula, double delta);
[[nodiscard]] ComplexMatrix apply_mpf_serial(const HamiltonianModel& h, const MpfFormula& formula, double delta);

/// Largest singular value.
[[nodiscard]] double spectral_norm(const ComplexMatrix& a);

/// ||apply_mpf(t/r)^r - e^{-iHt}||
[[nodiscard]] double evolution_error(const HamiltonianModel& h, const MpfFormula& formula, double t, std::int64_t r);

/// ||U_alpha(t/r)^r - e^{-iHt}|| for a plain product formula.
[[nodiscard]] double product_formula_error(const HamiltonianModel& h, int alpha, double t, std::int64_t r);

/// ||U U^dagger - I||
[[nodiscard]] double unitarity_defect(const ComplexMatrix& u);

}  // namespace mpf
