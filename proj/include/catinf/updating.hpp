#pragma once

// Conditionals and exact updating of joint distributions and channels.
//
// Every update here accepts either a state over S ⊗ O or a channel I -> S ⊗ O,
// where O is the observation's target wires (anywhere in the codomain) and S
// is the rest of the codomain in its original order. Open updates act on each
// input row independently.

#include <optional>
#include <string>
#include <vector>

#include "catinf/category.hpp"
#include "catinf/diagram.hpp"
#include "catinf/extended_real.hpp"

namespace catinf {

/// A soft or sharp distribution over named target wires. Preferences over
/// future observations use the same type.
class Observation {
 public:
  /// Point mass at one value label per target wire.
  static Observation sharp(const Shape& target, const std::vector<std::string>& labels);
  /// Soft observation; InvalidArgument unless `distribution` is a normalized state.
  static Observation soft(const Morphism& distribution, const Tolerances& tol = {});

  const Shape& shape() const noexcept { return distribution_.cod(); }
  std::vector<std::string> target() const { return shape().names(); }
  const Morphism& distribution() const noexcept { return distribution_; }
  double operator[](std::size_t i) const { return distribution_.at(i); }
  bool is_sharp() const noexcept { return point_.has_value(); }
  /// Joint index of the point mass for sharp observations.
  std::optional<std::size_t> point() const noexcept { return point_; }

 private:
  Observation(Morphism d, std::optional<std::size_t> p) : distribution_(std::move(d)), point_(p) {}

  Morphism distribution_;
  std::optional<std::size_t> point_;
};

/// ō1 ⊗ ō2 over the concatenated targets.
Observation product(const Observation& a, const Observation& b);

enum class UpdateMethod { Sharp, Jeffrey, Pearl, Vfe };
std::string_view to_string(UpdateMethod m);

struct UpdateDiagnostics {
  /// Per input row: the normaliser divided out (Pearl evidence, Jeffrey mass,
  /// Bayesian column mass, or softmax partition for VFE).
  std::vector<double> normalizers;
  /// Input rows whose posterior is undefined and left as the zero row.
  std::vector<std::size_t> zero_rows;
  /// Observation values with positive weight but zero model mass.
  std::vector<std::string> excluded_observations;
  bool out_of_support = false;
};

struct Posterior {
  Morphism morphism;  // state over S, or channel I -> S
  UpdateMethod method;
  UpdateDiagnostics diagnostics;
};

/// f|_Z : X ⊗ Z -> Y for f : X -> Y ⊗ Z, zero rows where f(·, z | x) has no
/// mass above tol.zero. Domain order is X's wires then `over` in given order.
Morphism minimal_conditional(const Morphism& f, const std::vector<std::string>& over,
                             const Tolerances& tol = {});

/// Minimal conditional of a closed model's total distribution by `observed`
/// (default: its outputs). InvalidModel for open models.
Morphism bayesian_inverse(const OpenModel& m, const std::vector<std::string>& observed = {},
                          const Tolerances& tol = {});

/// Bayesian update at a sharp observation. A zero column yields the zero row
/// and sets diagnostics.out_of_support; it never throws.
Posterior sharp_update(const Morphism& joint, const Observation& o, const Tolerances& tol = {});

/// M|_O ∘ ō, renormalised where the result is partial. EmptyResult when every
/// row is zero.
Posterior jeffrey_update(const Morphism& joint, const Observation& o, const Tolerances& tol = {});

/// Normalisation of Σ_o M(s, o | i) ō(o). EmptyResult when every row's
/// evidence is at most tol.zero.
Posterior pearl_update(const Morphism& joint, const Observation& o, const Tolerances& tol = {});

/// Per-policy outcome of planning. Exact and approximate parts are filled by
/// the respective planners; the approximate planner also fills the exact part
/// when tractable so the two can be compared.
struct ExactPlan {
  std::vector<double> evidence;    // ō ∘ M1(π)
  std::vector<double> future_fit;  // C ∘ (M2 after the Pearl posterior)(π)
  std::vector<double> plan;
  Morphism posterior;              // Pearl update of M1 by ō, P -> S
  std::optional<std::vector<double>> oracle;  // full-joint Pearl update
  bool oracle_skipped = false;
};

struct ApproxPlan {
  std::vector<ExtendedReal> vfe;  // F(π)
  std::vector<ExtendedReal> efe;  // G(π)
  std::vector<double> plan;
  Morphism perception;            // VFE update of M1 by ō, P -> S
};

struct PlanReport {
  std::string policy_wire;
  std::vector<std::string> policies;
  std::vector<double> habits;
  std::optional<ExactPlan> exact;
  std::optional<ApproxPlan> approx;
  std::optional<double> tv_gap;  // total variation between exact and approx plans
  std::vector<std::string> notes;
};

/// Joint sizes above this skip the full-joint oracle.
inline constexpr std::size_t kOracleLimit = 1'000'000;

/// Pearl-style exact planning. EmptyResult when the total evidence is at most
/// tol.zero.
PlanReport exact_active_inference(const ActinfModel& m, const Observation& obs,
                                  const Observation& preference, const Tolerances& tol = {});

/// Experimental: Jeffrey update of the (O, F) joint by ō ⊗ C, marginal on P.
std::vector<double> experimental_jeffrey_plan(const ActinfModel& m, const Observation& obs,
                                              const Observation& preference,
                                              const Tolerances& tol = {});

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace catinf
