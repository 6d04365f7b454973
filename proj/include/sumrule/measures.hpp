#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Evaluator = std::function<double(double)>;

enum class LawKind { SemiCircle, MarchenkoPastur, KestenMcKay, Arcsine01, GeneralV };

// A reference equilibrium law: support [alpha_minus, alpha_plus], a.c. density
// on the open support, the confining potential V on [b_minus, b_plus], and the
// off-criticality factor S with density = S(x) sqrt((a+-x)(x-a-)) / (2 pi).
class ReferenceLaw {
 public:
  static ReferenceLaw semicircle();
  static ReferenceLaw marchenko_pastur(double tau);        // tau in (0,1]
  static ReferenceLaw kesten_mckay(double k1, double k2);  // k1,k2 >= 0
  static ReferenceLaw arcsine01();
  static ReferenceLaw general(Evaluator potential, double b_minus, double b_plus,
                              Evaluator density = nullptr, double a_minus = 0,
                              double a_plus = 0);

  LawKind kind() const { return kind_; }
  double tau() const { return tau_; }
  double kappa1() const { return k1_; }
  double kappa2() const { return k2_; }

  double alpha_minus() const { return am_; }
  double alpha_plus() const { return ap_; }
  double b_minus() const { return bm_; }
  double b_plus() const { return bp_; }

  // f_V(x); zero outside the open support. GeneralV without an attached
  // density throws std::runtime_error.
  double density(double x) const;
  bool has_density() const;
  double potential(double x) const;  // V(x); +inf outside [b-, b+]
  // off-criticality factor; defined on (b-, b+) minus the hard edges
  double s_factor(double x) const;
  bool has_s_factor() const { return kind_ != LawKind::GeneralV || bool(s_); }

  std::string name() const;

 private:
  ReferenceLaw() = default;
  LawKind kind_ = LawKind::GeneralV;
  double tau_ = 0, k1_ = 0, k2_ = 0;
  double am_ = 0, ap_ = 0, bm_ = -kInf, bp_ = kInf;
  Evaluator dens_, pot_, s_;
};

struct Atom {
  double pos;
  double mass;
};

// Probability measure in the class S1(alpha-, alpha+): an a.c. part on the
// reference support, ordered outlier atoms on both sides, and an optional
// interior singular part tracked as a mass number only.
struct MeasureS1 {
  Evaluator ac_density;                 // on the reference support
  double ac_mass = 1.0;
  std::vector<Atom> atoms_plus;         // lambda_1+ > lambda_2+ > ... > alpha+
  std::vector<Atom> atoms_minus;        // lambda_1- < lambda_2- < ... < alpha-
  double interior_singular_mass = 0.0;
  bool interior_singular_flag() const { return interior_singular_mass > 0.0; }
  std::string tag;                      // builder name, used for serialization

  double total_mass() const;
  // throws std::invalid_argument on structural violations (ordering, signs,
  // masses); returns false (no throw) when the measure is merely outside S1
  // relative to `law` (atoms out of [b-, b+] etc).
  bool validate_against(const ReferenceLaw& law, std::string* why = nullptr) const;
};

// built-in measure families
MeasureS1 equilibrium_measure(const ReferenceLaw& law);
// density(x) = poly(x) * law.density(x), renormalized; poly given by coefficients
MeasureS1 polynomial_modulated(const ReferenceLaw& law, std::vector<double> poly);
// spectral measure of the free half-line operator with b_1 = c: a.c. part
// f_c on [-2,2] plus, for |c| > 1, an atom at c + 1/c of mass 1 - 1/c^2.
MeasureS1 hermite_rank_one(double c);
// (1-tau) delta_0 + tau MP_tau
MeasureS1 laguerre_atom_at_zero(double tau);
// pushforward to [0,1] of the single-coefficient Szego-class measure alpha_0=r
MeasureS1 bernstein_szego01(double r);

struct DiscreteMeasure {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<double> n, std::vector<double> w);
  std::size_t size() const { return nodes.size(); }
  double total_mass() const;
};

struct KlOptions {
  int panels = 512;
  int deg = 16;
  double divergence_cap = 1e6;
};

struct KlResult {
  double value = 0.0;         // +inf when divergent
  bool cap_triggered = false; // divergence reported through the configured cap
  bool support_violation = false;
  bool finite() const { return value < kInf; }
};

// Reverse Kullback-Leibler divergence K(law | mu) = int f_V log(f_V / f) over
// the support, by cosine-substitution composite Gauss-Legendre. Atoms and the
// interior singular part of mu never enter the integrand.
KlResult kl_reverse(const ReferenceLaw& law, const MeasureS1& mu,
                    const KlOptions& opts = {});

// moments (sum_k w_k lambda_k^j) for j = 0..max_order
std::vector<double> quad_moments(const DiscreteMeasure& mu, int max_order);

// cosine-mapped panel discretization of a law's a.c. density (not a Gauss
// rule; see jacobi::gauss_rule for that)
DiscreteMeasure discretize(const ReferenceLaw& law, int panels = 400, int deg = 16);

}  // namespace sr
