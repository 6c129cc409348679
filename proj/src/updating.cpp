#include "catinf/updating.hpp"

#include <cmath>

#include "joint_view.hpp"

namespace catinf {

using detail::JointView;

Observation Observation::sharp(const Shape& target, const std::vector<std::string>& labels) {
  const std::size_t idx = target.index_of_labels(labels);
  return Observation(Morphism::point(target, idx), idx);
}

Observation Observation::soft(const Morphism& distribution, const Tolerances& tol) {
  if (!distribution.is_state()) {
    fail(ErrorCode::InvalidArgument, "an observation must be a state, not a channel");
  }
  const auto flag = is_channel(distribution, tol);
  if (!flag.is_channel) {
    fail(ErrorCode::InvalidArgument,
         "observation is not normalised (defect " + std::to_string(flag.max_row_defect) + ")");
  }
  // A soft observation that happens to be a point mass behaves as a sharp one.
  // Rounding in the surviving entry (a marginal of a point mass, say) is
  // snapped back to exactly 1.
  std::optional<std::size_t> point;
  const auto e = distribution.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0.0) continue;
    if (point) return Observation(distribution, std::nullopt);
    point = i;
  }
  return Observation(Morphism::point(distribution.cod(), *point), point);
}

Observation product(const Observation& a, const Observation& b) {
  // Products of point masses are point masses again, so soft() keeps sharpness.
  return Observation::soft(tensor(a.distribution(), b.distribution()));
}

std::string_view to_string(UpdateMethod m) {
  switch (m) {
    case UpdateMethod::Sharp: return "sharp";
    case UpdateMethod::Jeffrey: return "jeffrey";
    case UpdateMethod::Pearl: return "pearl";
    case UpdateMethod::Vfe: return "vfe";
  }
  return "?";
}

Morphism minimal_conditional(const Morphism& f, const std::vector<std::string>& over,
                             const Tolerances& tol) {
  const JointView j = JointView::of(f, over);
  std::vector<double> out(j.ni * j.no * j.ns, 0.0);
  for (std::size_t i = 0; i < j.ni; ++i) {
    for (std::size_t o = 0; o < j.no; ++o) {
      const double mass = j.column_mass(i, o);
      if (mass <= tol.zero) continue;
      for (std::size_t s = 0; s < j.ns; ++s) out[(i * j.no + o) * j.ns + s] = j.at(i, s, o) / mass;
    }
  }
  return Morphism(j.input + j.observed, j.hidden, std::move(out));
}

Morphism bayesian_inverse(const OpenModel& m, const std::vector<std::string>& observed,
                          const Tolerances& tol) {
  if (!m.closed()) fail(ErrorCode::InvalidModel, "Bayesian inverse needs a closed model");
  return minimal_conditional(total_channel(m), observed.empty() ? m.diagram().outputs : observed,
                             tol);
}

namespace {

void require_some_row(const UpdateDiagnostics& d, std::size_t rows, const char* what) {
  if (d.zero_rows.size() == rows) {
    fail(ErrorCode::EmptyResult, std::string(what) + " update is the zero state");
  }
}

void note_excluded(const JointView& j, const Observation& o, std::size_t i, double zero,
                   UpdateDiagnostics& d) {
  for (std::size_t k = 0; k < j.no; ++k) {
    if (o[k] > 0.0 && j.column_mass(i, k) <= zero) {
      const auto label = j.observed.label_of(k);
      bool seen = false;
      for (const auto& e : d.excluded_observations) seen = seen || e == label;
      if (!seen) d.excluded_observations.push_back(label);
    }
  }
}

}  // namespace

Posterior sharp_update(const Morphism& joint, const Observation& o, const Tolerances& tol) {
  if (!o.is_sharp()) fail(ErrorCode::InvalidArgument, "sharp update needs a point observation");
  const JointView j = JointView::of(joint, o.target());
  j.require_observed(o.shape());
  const std::size_t at = *o.point();
  Posterior post{Morphism(j.input, j.hidden), UpdateMethod::Sharp, {}};
  std::vector<double> out(j.ni * j.ns, 0.0);
  for (std::size_t i = 0; i < j.ni; ++i) {
    const double mass = j.column_mass(i, at);
    post.diagnostics.normalizers.push_back(mass);
    if (mass <= tol.zero) {
      post.diagnostics.zero_rows.push_back(i);
      post.diagnostics.out_of_support = true;
      continue;
    }
    for (std::size_t s = 0; s < j.ns; ++s) out[i * j.ns + s] = j.at(i, s, at) / mass;
  }
  if (post.diagnostics.out_of_support) {
    post.diagnostics.excluded_observations.push_back(j.observed.label_of(at));
  }
  post.morphism = j.hidden_morphism(std::move(out));
  return post;
}

Posterior jeffrey_update(const Morphism& joint, const Observation& o, const Tolerances& tol) {
  const JointView j = JointView::of(joint, o.target());
  j.require_observed(o.shape());
  Posterior post{Morphism(j.input, j.hidden), UpdateMethod::Jeffrey, {}};
  std::vector<double> out(j.ni * j.ns, 0.0);
  for (std::size_t i = 0; i < j.ni; ++i) {
    double* row = out.data() + i * j.ns;
    for (std::size_t k = 0; k < j.no; ++k) {
      if (o[k] == 0.0) continue;
      const double mass = j.column_mass(i, k);
      if (mass <= tol.zero) continue;  // the minimal conditional is zero here
      for (std::size_t s = 0; s < j.ns; ++s) row[s] += o[k] * (j.at(i, s, k) / mass);
    }
    note_excluded(j, o, i, tol.zero, post.diagnostics);
    double total = 0.0;
    for (std::size_t s = 0; s < j.ns; ++s) total += row[s];
    post.diagnostics.normalizers.push_back(total);
    if (total <= tol.zero) {
      std::fill(row, row + j.ns, 0.0);
      post.diagnostics.zero_rows.push_back(i);
      continue;
    }
    // Only a partial result (dropped ō mass) is renormalised.
    if (std::abs(total - 1.0) > tol.channel) {
      for (std::size_t s = 0; s < j.ns; ++s) row[s] /= total;
    }
  }
  post.diagnostics.out_of_support = !post.diagnostics.excluded_observations.empty();
  require_some_row(post.diagnostics, j.ni, "Jeffrey");
  post.morphism = j.hidden_morphism(std::move(out));
  return post;
}

Posterior pearl_update(const Morphism& joint, const Observation& o, const Tolerances& tol) {
  const JointView j = JointView::of(joint, o.target());
  j.require_observed(o.shape());
  Posterior post{Morphism(j.input, j.hidden), UpdateMethod::Pearl, {}};
  std::vector<double> out(j.ni * j.ns, 0.0);
  for (std::size_t i = 0; i < j.ni; ++i) {
    double* row = out.data() + i * j.ns;
    double evidence = 0.0;
    for (std::size_t s = 0; s < j.ns; ++s) {
      double acc = 0.0;
      for (std::size_t k = 0; k < j.no; ++k) acc += j.at(i, s, k) * o[k];
      row[s] = acc;
      evidence += acc;
    }
    note_excluded(j, o, i, tol.zero, post.diagnostics);
    post.diagnostics.normalizers.push_back(evidence);
    if (evidence <= tol.zero) {
      std::fill(row, row + j.ns, 0.0);
      post.diagnostics.zero_rows.push_back(i);
      continue;
    }
    for (std::size_t s = 0; s < j.ns; ++s) row[s] /= evidence;
  }
  post.diagnostics.out_of_support = !post.diagnostics.excluded_observations.empty();
  require_some_row(post.diagnostics, j.ni, "Pearl");
  post.morphism = j.hidden_morphism(std::move(out));
  return post;
}

namespace {

std::vector<std::string> labels_of(const WireType& w) { return w.values; }

void require_target(const Observation& o, const std::string& wire, const char* role) {
  const auto t = o.target();
  if (t.size() != 1 || t[0] != wire) {
    fail(ErrorCode::ShapeMismatch, std::string(role) + " must be a distribution over '" + wire +
                                       "', got " + describe(o.shape()));
  }
}

}  // namespace

PlanReport exact_active_inference(const ActinfModel& m, const Observation& obs,
                                  const Observation& preference, const Tolerances& tol) {
  require_target(obs, m.observation, "observation");
  require_target(preference, m.future_observation, "preference");
  const Morphism e = m.habits();
  const JointView present = JointView::of(m.present_channel(), {m.observation});
  present.require_observed(obs.shape());
  const JointView future = JointView::of(m.future_channel(), {m.future_observation});
  future.require_observed(preference.shape());

  const std::size_t np = present.ni, ns = present.ns, no = present.no, nf = future.no;
  const std::size_t nsp = future.ns;

  ExactPlan ex{{}, {}, {}, Morphism(present.input, present.hidden), std::nullopt, false};
  std::vector<double> post(np * ns, 0.0);
  std::vector<double> weight(np, 0.0);
  double total = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double evidence = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (std::size_t o = 0; o < no; ++o) acc += present.at(p, s, o) * obs[o];
      post[p * ns + s] = acc;
      evidence += acc;
    }
    double fit = 0.0;
    if (evidence > tol.zero) {
      for (std::size_t s = 0; s < ns; ++s) {
        post[p * ns + s] /= evidence;
        // future channel rows are indexed by (s, p)
        const std::size_t row = s * np + p;
        double pref = 0.0;
        for (std::size_t sp = 0; sp < nsp; ++sp) {
          for (std::size_t f = 0; f < nf; ++f) pref += future.at(row, sp, f) * preference[f];
        }
        fit += post[p * ns + s] * pref;
      }
    } else {
      std::fill(post.begin() + static_cast<std::ptrdiff_t>(p * ns),
                post.begin() + static_cast<std::ptrdiff_t>((p + 1) * ns), 0.0);
    }
    ex.evidence.push_back(evidence);
    ex.future_fit.push_back(fit);
    weight[p] = e.at(p) * evidence * fit;
    total += weight[p];
  }
  if (total <= tol.zero) {
    fail(ErrorCode::EmptyResult, "no policy is consistent with the observation and preferences");
  }
  for (double& w : weight) w /= total;
  ex.plan = std::move(weight);
  ex.posterior = present.hidden_morphism(std::move(post));

  const std::size_t joint_size = np * ns * no * nsp * nf;
  if (joint_size <= kOracleLimit) {
    const Morphism joint = total_channel(m.model);
    const Posterior p = pearl_update(joint, product(obs, preference), tol);
    const Morphism on_policy = marginal(p.morphism, {m.policy});
    ex.oracle = std::vector<double>(on_policy.entries().begin(), on_policy.entries().end());
  } else {
    ex.oracle_skipped = true;
  }

  PlanReport r;
  r.policy_wire = m.policy;
  r.policies = labels_of(e.cod().wire(0));
  r.habits.assign(e.entries().begin(), e.entries().end());
  if (ex.oracle_skipped) r.notes.push_back("full-joint oracle skipped: joint too large");
  r.exact = std::move(ex);
  return r;
}

std::vector<double> experimental_jeffrey_plan(const ActinfModel& m, const Observation& obs,
                                              const Observation& preference,
                                              const Tolerances& tol) {
  require_target(obs, m.observation, "observation");
  require_target(preference, m.future_observation, "preference");
  const Posterior p = jeffrey_update(total_channel(m.model), product(obs, preference), tol);
  const Morphism on_policy = marginal(p.morphism, {m.policy});
  return {on_policy.entries().begin(), on_policy.entries().end()};
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorCode::ShapeMismatch, "total variation of unequal lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace catinf
