#pragma once

// Surprise, entropy and free energies over Mat(R+) states, plus the open VFE
// and the approximate (free-energy) planner.
//
// Conventions: -log x is +inf for x <= tol.zero, and a term whose weight is
// exactly zero contributes 0 even when its log value is +inf.

#include <optional>
#include <string>
#include <vector>

#include "catinf/category.hpp"
#include "catinf/diagram.hpp"
#include "catinf/extended_real.hpp"
#include "catinf/updating.hpp"

namespace catinf {

/// -log e as a table over the effect's domain. Composition of log-effects
/// along wires is summation.
struct LogEffect {
  Morphism base;
  std::vector<ExtendedReal> values;

  static LogEffect of(const Morphism& effect, const Tolerances& tol = {});
  const Shape& shape() const noexcept { return base.dom(); }
};

/// -log(d * e) as the pointwise sum of the two log-effects.
LogEffect log_product(const LogEffect& d, const LogEffect& e);
/// -log(d ⊗ e)(x, y) = -log d(x) + -log e(y).
LogEffect log_tensor(const LogEffect& d, const LogEffect& e);
/// Plugging the point `index` of the leading `prefix` wires into the log-effect.
LogEffect log_substitute(const LogEffect& d, std::size_t prefix, std::size_t index);
/// E_{x ~ ω} values(x) with 0 * inf = 0.
ExtendedReal expect(const LogEffect& d, const Morphism& state);

ExtendedReal cross_surprise(const Morphism& omega, const Morphism& sigma, const Tolerances& tol = {});
double entropy(const Morphism& omega);
ExtendedReal kl(const Morphism& omega, const Morphism& sigma, const Tolerances& tol = {});

struct Term {
  std::string name;
  ExtendedReal value;
};

ExtendedReal sum(const std::vector<Term>& terms);

/// `total` is the definitional value. `terms` is its primary decomposition and
/// `alternative` a second, independently computed one; `consistent` records
/// whether both agree with `total` (within 1e-9 relative, or both infinite).
struct FreeEnergyReport {
  ExtendedReal total;
  std::vector<Term> terms;
  std::vector<Term> alternative;
  std::optional<ExtendedReal> lower_bound;
  std::optional<ExtendedReal> upper_bound;
  bool consistent = true;
  std::vector<std::string> notes;
};

/// FE(Q, M) = S(Q, M) - H(Q_S) for states Q, M over S ⊗ O, with O the wires
/// named in `observed`. Alternative: E_Q[-log M(s|o)] + S(Q_O, M_O) - H(Q_S).
FreeEnergyReport free_energy(const Morphism& q_joint, const Morphism& m,
                             const std::vector<std::string>& observed, const Tolerances& tol = {});

/// FE(q ⊗ ō, M). Alternative: E_ō KL(q, M(·|o)) + S(ō, M_O); lower bound
/// KL(q, M|_O ∘ ō) + S(ō, M_O).
FreeEnergyReport vfe(const Morphism& q, const Morphism& m, const Observation& obs,
                     const Tolerances& tol = {});

/// softmax_s E_{o ~ ō} log M(s | o), per input row for channels. Observation
/// values with no model mass are left out of the expectation and reported.
/// AllMinusInfinity when no row has a state of finite score.
Posterior vfe_update(const Morphism& m, const Observation& obs, const Tolerances& tol = {});

/// FE(M, M~) with M~(s, o) = M(s|o) C(o). Terms: ambiguity E_s H(M(·|s)) and
/// risk KL(M_O, C). Upper bound: S(M_O, C).
FreeEnergyReport efe(const Morphism& m, const Observation& preference, const Tolerances& tol = {});

/// E_{(i,s) ~ q, o ~ ō}[log q(i, s) - log M(s, o | i)] for M : I -> S ⊗ O.
/// q's wires must be I's and S's, in any order.
ExtendedReal open_vfe(const Morphism& m, const Morphism& q, const Observation& obs,
                      const Tolerances& tol = {});

/// Marginal of q2 on M2's input wires, the observation handed down to the
/// lower model of a sequential composite.
Observation induced_observation(const Morphism& m2, const Morphism& q2,
                                const Tolerances& tol = {});

/// Perception by VFE update of M1, prediction by EFE of the predicted future,
/// plan = softmax(log E - F - G). Also fills the exact plan and the total
/// variation gap when the exact planner succeeds. AllMinusInfinity when every
/// policy has weight 0.
PlanReport approx_active_inference(const ActinfModel& m, const Observation& obs,
                                   const Observation& preference, const Tolerances& tol = {});

/// Numerically stable softmax; -inf (and +inf negated) scores get weight 0.
/// AllMinusInfinity if every score is -inf.
std::vector<double> softmax(const std::vector<double>& scores);

}  // namespace catinf
