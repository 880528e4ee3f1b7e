#pragma once

#include "pwave/chart.hpp"
#include "pwave/conformal_group.hpp"
#include "pwave/model.hpp"

#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pwave {

/// Γ = <gamma_hat> |x Γ0 with Γ0 a finitely generated subgroup of Heis.
struct GammaSpec {
  ModelSpec spec;
  std::optional<ConfGroupElement> gamma_hat;
  std::vector<HeisElement> gamma0;
};

struct GammaValidation {
  bool abelian = true;
  double max_commutator = 0.0;
  bool normalized = true;
  double normalization_residual = 0.0;
  bool center_free = true;
  std::vector<std::string> issues;
  bool ok() const { return abelian && normalized && center_free; }
};

/// Checks that Γ0 is abelian, that gamma_hat conjugates each generator into the
/// integer span of Γ0, and that no short integer combination of Γ0 is central.
GammaValidation validate_gamma(const GammaSpec& gamma, double tol = 1e-8);

/// Orthonormal basis (columns, log-coordinates) of the smallest bracket-closed
/// subspace of heis containing the logs of the generators.
Mat malcev_closure(const std::vector<HeisElement>& generators, double tol = 1e-12);

/// Coordinates of the A+ basis vectors e_1..e_n inside heis_{2n+1}.
Mat a_plus_basis(int n);

struct TransversalityGrid {
  double t_min = -20.0;
  double t_max = 20.0;
  int count = 4001;
};

enum class ProperVerdict { pass, fail, inconclusive };
std::string to_string(ProperVerdict v);

struct PropernessReport {
  bool cond_pL = false;
  bool cond_intersection_at_0 = false;
  bool cond_intersection_d0 = false;  // same condition read off d(0)
  bool cond_dim = false;
  int dim_n0 = 0;
  int rank_stacked = 0;
  std::optional<Vec> witness;  // nonzero vector of n0 ∩ a+ when (ii) fails
  double min_transversality = 0.0;
  double argmin_t = 0.0;
  double tail_min = 0.0;  // min of d over the extended windows beyond the grid
  TransversalityGrid grid;
  double threshold = 1e-8;
  std::vector<double> t_values;
  std::vector<double> d_values;
  ProperVerdict verdict = ProperVerdict::fail;
  std::string reason;
};

/// d(t) = product of singular values of [orthonormal basis of e^{tL} n0 | a+ basis].
PropernessReport properness_check(const ModelSpec& spec, const Mat& n0_basis,
                                  const std::optional<ConfGroupElement>& gamma_hat,
                                  const TransversalityGrid& grid = {}, double threshold = 1e-8);

enum class LatticeVerdict { preserved, not_preserved, inconclusive };
std::string to_string(LatticeVerdict v);

struct LatticeCertificate {
  LatticeVerdict verdict = LatticeVerdict::inconclusive;
  std::vector<double> char_poly;  // monic, highest degree first
  double max_integrality_defect = 0.0;
  std::optional<int> offending_coefficient;  // index into char_poly
  Mat basis;                                 // columns span the invariant lattice
  Mat integer_action;                        // basis^-1 A basis, rounded
  double verification_residual = 0.0;
  double basis_condition = 0.0;
  double tolerance = 1e-6;
  std::string reason;
};

/// Characteristic polynomial by Faddeev-LeVerrier (monic, highest degree first).
std::vector<double> characteristic_polynomial(const Mat& a);

/// Certifies that A preserves a lattice: integral char poly with constant
/// term ±1, then an integer basis (A integral) or a cyclic-vector basis
/// [v, Av, ..., A^{m-1}v] in which A becomes the companion matrix.
LatticeCertificate lattice_preservation(const Mat& a, double tol = 1e-6, std::uint64_t seed = 7);

/// g ∈ <gamma_hat> |x Γ0 up to tol.
bool membership(const ConfGroupElement& g, const GammaSpec& gamma, double tol = 1e-8);

struct OrbitReport {
  double min_displacement = std::numeric_limits<double>::infinity();
  std::string witness_word;
  long words_enumerated = 0;
  long identity_words_skipped = 0;
  int word_length = 0;
  std::string note = "probe over finitely many words; not a proof of proper discontinuity";
};

/// Minimum Euclidean chart displacement |w(p) - p| over freely reduced words of
/// length 1..word_length in the generators of Γ and their inverses; words that
/// evaluate to the identity are skipped. Throws BudgetError past max_words.
OrbitReport orbit_separation(const GammaSpec& gamma, const BrinkmannPoint& p, int word_length,
                             long max_words = 1000000);

struct ExampleParams {
  bool adjusted = false;
  double b = 1.0;  // example2 only
};

struct ExampleBuild {
  std::string name;
  ExampleParams params;
  ModelSpec spec;
  std::vector<std::complex<double>> l_eigenvalues;
  ConfGroupElement gamma_hat;
  Mat n_basis;      // columns in log-coordinates
  Mat restriction;  // Ad(gamma_hat) on n in the n_basis coordinates
  LatticeCertificate lattice;
  std::optional<GammaSpec> gamma;  // only when the lattice is certified
  std::vector<std::string> diagnostics;
};

/// Adjusted time scale s with e^{2s} + e^{-2s} = 3.
double adjusted_time_scale();

/// Builds one of the bundled examples: "cw4", "example1", "example2".
ExampleBuild build_example(const std::string& name, const ExampleParams& params = {});

}  // namespace pwave
