#include "catinf/free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "joint_view.hpp"

namespace catinf {

using detail::JointView;

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

void require_state(const Morphism& m, const char* what) {
  if (!m.is_state()) fail(ErrorCode::ShapeMismatch, std::string(what) + " must be a state");
}

void require_same(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) {
    fail(ErrorCode::ShapeMismatch, std::string(what) + ": " + describe(a) + " vs " + describe(b));
  }
}

bool agrees(ExtendedReal a, ExtendedReal b) {
  const double scale = a.is_finite() ? std::max(1.0, std::abs(a.value())) : 1.0;
  return same_extended(a, b, 1e-9 * scale);
}

// -log M(s | o) from a joint view, +inf off the support.
ExtendedReal neg_log_conditional(const JointView& j, std::size_t i, std::size_t s, std::size_t o,
                                 double zero) {
  const double joint = j.at(i, s, o);
  const double mass = j.column_mass(i, o);
  if (joint <= zero || mass <= zero) return ExtendedReal::infinity();
  return neg_log(joint / mass, 0.0);
}

}  // namespace

LogEffect LogEffect::of(const Morphism& effect, const Tolerances& tol) {
  if (!effect.is_effect()) fail(ErrorCode::ShapeMismatch, "log-box needs an effect");
  LogEffect out{effect, {}};
  out.values.reserve(effect.rows());
  for (double x : effect.entries()) out.values.push_back(neg_log(x, tol.zero));
  return out;
}

LogEffect log_product(const LogEffect& d, const LogEffect& e) {
  require_same(d.shape(), e.shape(), "log_product");
  std::vector<double> prod(d.values.size());
  LogEffect out{d.base, d.values};
  for (std::size_t x = 0; x < prod.size(); ++x) {
    prod[x] = d.base.at(x) * e.base.at(x);
    out.values[x] = d.values[x] + e.values[x];
  }
  out.base = Morphism::effect(d.shape(), std::move(prod));
  return out;
}

LogEffect log_tensor(const LogEffect& d, const LogEffect& e) {
  LogEffect out{tensor(d.base, e.base), {}};
  out.values.reserve(d.values.size() * e.values.size());
  for (const auto& a : d.values) {
    for (const auto& b : e.values) out.values.push_back(a + b);
  }
  return out;
}

LogEffect log_substitute(const LogEffect& d, std::size_t prefix, std::size_t index) {
  const Shape& sh = d.shape();
  if (prefix > sh.rank()) fail(ErrorCode::ShapeMismatch, "substitution prefix exceeds rank");
  std::vector<std::size_t> head, tail;
  for (std::size_t k = 0; k < sh.rank(); ++k) (k < prefix ? head : tail).push_back(k);
  const Shape hs = sh.select(head), ts = sh.select(tail);
  if (index >= hs.cardinality()) fail(ErrorCode::InvalidArgument, "substituted point out of range");
  const std::size_t n = ts.cardinality();
  std::vector<double> base(d.base.entries().begin() + static_cast<std::ptrdiff_t>(index * n),
                           d.base.entries().begin() + static_cast<std::ptrdiff_t>((index + 1) * n));
  LogEffect out{Morphism::effect(ts, std::move(base)), {}};
  out.values.assign(d.values.begin() + static_cast<std::ptrdiff_t>(index * n),
                    d.values.begin() + static_cast<std::ptrdiff_t>((index + 1) * n));
  return out;
}

ExtendedReal expect(const LogEffect& d, const Morphism& state) {
  require_state(state, "expectation weight");
  require_same(state.cod(), d.shape(), "expect");
  ExtendedReal acc = 0.0;
  for (std::size_t x = 0; x < d.values.size(); ++x) {
    const double w = state.at(x);
    if (w == 0.0) continue;
    if (d.values[x].is_infinite()) return ExtendedReal::infinity();
    acc += w * d.values[x].value();
  }
  return acc;
}

ExtendedReal cross_surprise(const Morphism& omega, const Morphism& sigma, const Tolerances& tol) {
  require_state(omega, "cross_surprise weight");
  require_state(sigma, "cross_surprise model");
  return expect(LogEffect::of(state_to_effect(sigma), tol), omega);
}

double entropy(const Morphism& omega) {
  require_state(omega, "entropy argument");
  double h = 0.0;
  for (double p : omega.entries()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

ExtendedReal kl(const Morphism& omega, const Morphism& sigma, const Tolerances& tol) {
  return cross_surprise(omega, sigma, tol) - entropy(omega);
}

ExtendedReal sum(const std::vector<Term>& terms) {
  ExtendedReal acc = 0.0;
  for (const auto& t : terms) acc += t.value;
  return acc;
}

FreeEnergyReport free_energy(const Morphism& q_joint, const Morphism& m,
                             const std::vector<std::string>& observed, const Tolerances& tol) {
  require_state(q_joint, "Q");
  require_state(m, "M");
  require_same(q_joint.cod(), m.cod(), "free_energy");
  const JointView jm = JointView::of(m, observed);
  const JointView jq = JointView::of(q_joint, observed);
  const Morphism q_s = Morphism::state(jq.hidden, [&] {
    std::vector<double> v(jq.ns, 0.0);
    for (std::size_t s = 0; s < jq.ns; ++s) {
      for (std::size_t o = 0; o < jq.no; ++o) v[s] += jq.at(0, s, o);
    }
    return v;
  }());
  const double h = entropy(q_s);

  FreeEnergyReport r;
  const ExtendedReal cs = cross_surprise(q_joint, m, tol);
  r.total = cs - h;
  r.terms = {{"cross_surprise", cs}, {"neg_entropy", -h}};

  ExtendedReal conditional = 0.0;
  std::vector<double> q_o(jq.no, 0.0), m_o(jm.no, 0.0);
  for (std::size_t o = 0; o < jq.no; ++o) {
    q_o[o] = jq.column_mass(0, o);
    m_o[o] = jm.column_mass(0, o);
    for (std::size_t s = 0; s < jq.ns; ++s) {
      const double w = jq.at(0, s, o);
      if (w == 0.0) continue;
      const ExtendedReal v = neg_log_conditional(jm, 0, s, o, tol.zero);
      conditional += v.is_infinite() ? v : ExtendedReal(w * v.value());
    }
  }
  const ExtendedReal marginal_surprise = cross_surprise(Morphism::state(jq.observed, q_o),
                                                        Morphism::state(jm.observed, m_o), tol);
  r.alternative = {{"conditional_surprise", conditional},
                   {"marginal_surprise", marginal_surprise},
                   {"neg_entropy", -h}};
  r.consistent = agrees(r.total, sum(r.terms)) && agrees(r.total, sum(r.alternative));
  return r;
}

FreeEnergyReport vfe(const Morphism& q, const Morphism& m, const Observation& obs,
                     const Tolerances& tol) {
  require_state(q, "q");
  require_state(m, "M");
  const JointView j = JointView::of(m, obs.target());
  j.require_observed(obs.shape());
  require_same(q.cod(), j.hidden, "q must live on the model's hidden wires");

  const Morphism joint = reorder_cod(tensor(q, obs.distribution()), m.cod().names());
  FreeEnergyReport r = free_energy(joint, m, obs.target(), tol);

  std::vector<double> m_o(j.no, 0.0), mixture(j.ns, 0.0);
  ExtendedReal expected_kl = 0.0;
  for (std::size_t o = 0; o < j.no; ++o) {
    m_o[o] = j.column_mass(0, o);
    if (obs[o] == 0.0) continue;
    std::vector<double> column(j.ns, 0.0);
    if (m_o[o] > tol.zero) {
      for (std::size_t s = 0; s < j.ns; ++s) column[s] = j.at(0, s, o) / m_o[o];
    }
    for (std::size_t s = 0; s < j.ns; ++s) mixture[s] += obs[o] * column[s];
    const ExtendedReal d = kl(q, Morphism::state(j.hidden, column), tol);
    expected_kl += d.is_infinite() ? d : ExtendedReal(obs[o] * d.value());
  }
  const ExtendedReal surprise = cross_surprise(obs.distribution(), Morphism::state(j.observed, m_o), tol);
  r.alternative = {{"expected_kl", expected_kl}, {"observation_surprise", surprise}};
  r.lower_bound = kl(q, Morphism::state(j.hidden, mixture), tol) + surprise;
  r.consistent = agrees(r.total, sum(r.terms)) && agrees(r.total, sum(r.alternative));
  return r;
}

std::vector<double> softmax(const std::vector<double>& scores) {
  double top = kMinusInf;
  for (double s : scores) {
    if (std::isnan(s) || s == std::numeric_limits<double>::infinity()) {
      fail(ErrorCode::InvalidArgument, "softmax score must be finite or -inf");
    }
    top = std::max(top, s);
  }
  if (top == kMinusInf) fail(ErrorCode::AllMinusInfinity, "every softmax score is -inf");
  std::vector<double> w(scores.size(), 0.0);
  double z = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] == kMinusInf) continue;
    w[k] = std::exp(scores[k] - top);
    z += w[k];
  }
  for (double& x : w) x /= z;
  return w;
}

Posterior vfe_update(const Morphism& m, const Observation& obs, const Tolerances& tol) {
  const JointView j = JointView::of(m, obs.target());
  j.require_observed(obs.shape());
  Posterior post{Morphism(j.input, j.hidden), UpdateMethod::Vfe, {}};
  std::vector<double> out(j.ni * j.ns, 0.0);
  for (std::size_t i = 0; i < j.ni; ++i) {
    std::vector<double> score(j.ns, 0.0);
    bool any_column = false;
    for (std::size_t o = 0; o < j.no; ++o) {
      if (obs[o] == 0.0) continue;
      const double mass = j.column_mass(i, o);
      if (mass <= tol.zero) {
        const auto label = j.observed.label_of(o);
        if (std::find(post.diagnostics.excluded_observations.begin(),
                      post.diagnostics.excluded_observations.end(),
                      label) == post.diagnostics.excluded_observations.end()) {
          post.diagnostics.excluded_observations.push_back(label);
        }
        continue;
      }
      any_column = true;
      for (std::size_t s = 0; s < j.ns; ++s) {
        const double v = j.at(i, s, o);
        score[s] = (v <= tol.zero || score[s] == kMinusInf) ? kMinusInf
                                                             : score[s] + obs[o] * std::log(v / mass);
      }
    }
    const bool degenerate =
        !any_column || std::all_of(score.begin(), score.end(), [](double x) { return x == kMinusInf; });
    if (degenerate) {
      post.diagnostics.zero_rows.push_back(i);
      post.diagnostics.normalizers.push_back(0.0);
      continue;
    }
    const double top = *std::max_element(score.begin(), score.end());
    double z = 0.0;
    for (double s : score) z += s == kMinusInf ? 0.0 : std::exp(s - top);
    post.diagnostics.normalizers.push_back(std::exp(top) * z);
    const auto w = softmax(score);
    std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(i * j.ns));
  }
  post.diagnostics.out_of_support = !post.diagnostics.excluded_observations.empty();
  if (post.diagnostics.zero_rows.size() == j.ni) {
    fail(ErrorCode::AllMinusInfinity, "VFE update: every state has score -inf");
  }
  post.morphism = j.hidden_morphism(std::move(out));
  return post;
}

FreeEnergyReport efe(const Morphism& m, const Observation& preference, const Tolerances& tol) {
  require_state(m, "M");
  const JointView j = JointView::of(m, preference.target());
  j.require_observed(preference.shape());

  std::vector<double> m_s(j.ns, 0.0), m_o(j.no, 0.0);
  for (std::size_t s = 0; s < j.ns; ++s) {
    for (std::size_t o = 0; o < j.no; ++o) {
      m_s[s] += j.at(0, s, o);
      m_o[o] += j.at(0, s, o);
    }
  }
  const double h_s = entropy(Morphism::state(j.hidden, m_s));

  // Definitional form: FE of M against M~(s, o) = M(s|o) C(o).
  ExtendedReal cs = 0.0;
  for (std::size_t s = 0; s < j.ns; ++s) {
    for (std::size_t o = 0; o < j.no; ++o) {
      const double w = j.at(0, s, o);
      if (w == 0.0) continue;
      const ExtendedReal v = neg_log_conditional(j, 0, s, o, tol.zero) + neg_log(preference[o], tol.zero);
      cs += v.is_infinite() ? v : ExtendedReal(w * v.value());
    }
  }

  double ambiguity = 0.0;
  for (std::size_t s = 0; s < j.ns; ++s) {
    if (m_s[s] <= 0.0) continue;
    std::vector<double> row(j.no);
    for (std::size_t o = 0; o < j.no; ++o) row[o] = j.at(0, s, o) / m_s[s];
    ambiguity += m_s[s] * entropy(Morphism::state(j.observed, row));
  }
  const Morphism marginal_o = Morphism::state(j.observed, m_o);
  const ExtendedReal risk = kl(marginal_o, preference.distribution(), tol);

  FreeEnergyReport r;
  r.total = cs - h_s;
  r.terms = {{"ambiguity", ambiguity}, {"risk", risk}};
  r.alternative = {{"cross_surprise", cs}, {"neg_entropy", -h_s}};
  r.upper_bound = cross_surprise(marginal_o, preference.distribution(), tol);
  r.consistent = agrees(r.total, sum(r.terms));
  return r;
}

ExtendedReal open_vfe(const Morphism& m, const Morphism& q, const Observation& obs,
                      const Tolerances& tol) {
  require_state(q, "q");
  const JointView j = JointView::of(m, obs.target());
  j.require_observed(obs.shape());
  auto order = j.input.names();
  for (const auto& n : j.hidden.names()) order.push_back(n);
  if (q.cod().rank() != order.size()) {
    fail(ErrorCode::ShapeMismatch, "q must range over " + describe(j.input + j.hidden));
  }
  const Morphism qa = reorder_cod(q, order);
  require_same(qa.cod(), j.input + j.hidden, "open VFE belief");

  ExtendedReal acc = 0.0;
  for (std::size_t i = 0; i < j.ni; ++i) {
    for (std::size_t s = 0; s < j.ns; ++s) {
      const double qi = qa.at(i * j.ns + s);
      if (qi == 0.0) continue;
      for (std::size_t o = 0; o < j.no; ++o) {
        const double w = qi * obs[o];
        if (w == 0.0) continue;
        const ExtendedReal v = neg_log(j.at(i, s, o), tol.zero);
        if (v.is_infinite()) return v;
        acc += w * (std::log(qi) + v.value());
      }
    }
  }
  return acc;
}

Observation induced_observation(const Morphism& m2, const Morphism& q2, const Tolerances& tol) {
  require_state(q2, "q2");
  const auto names = m2.dom().names();
  const Morphism down = marginal(q2, names);
  require_same(down.cod(), m2.dom(), "induced observation");
  return Observation::soft(down, tol);
}

PlanReport approx_active_inference(const ActinfModel& m, const Observation& obs,
                                   const Observation& preference, const Tolerances& tol) {
  if (obs.target() != std::vector<std::string>{m.observation} ||
      preference.target() != std::vector<std::string>{m.future_observation}) {
    fail(ErrorCode::ShapeMismatch, "observation must be over '" + m.observation +
                                       "' and preference over '" + m.future_observation + "'");
  }
  const Morphism e = m.habits();
  const Morphism m1 = m.present_channel();
  const Morphism m2 = m.future_channel();
  const std::size_t np = m1.rows();
  const JointView j1 = JointView::of(m1, {m.observation});

  Posterior perception = [&] {
    try {
      return vfe_update(m1, obs, tol);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::AllMinusInfinity) {
        fail(ErrorCode::AllMinusInfinity, "every policy is inconsistent with the observation");
      }
      throw;
    }
  }();
  const auto& zero = perception.diagnostics.zero_rows;

  ApproxPlan ap{{}, {}, {}, perception.morphism};
  std::vector<double> scores(np, kMinusInf);
  for (std::size_t p = 0; p < np; ++p) {
    if (std::find(zero.begin(), zero.end(), p) != zero.end()) {
      ap.vfe.push_back(ExtendedReal::infinity());
      ap.efe.push_back(ExtendedReal::infinity());
      continue;
    }
    const auto qrow = perception.morphism.row(p);
    const Morphism q = Morphism::state(j1.hidden, {qrow.begin(), qrow.end()});
    const auto mrow = m1.row(p);
    const Morphism present = Morphism::state(m1.cod(), {mrow.begin(), mrow.end()});
    const ExtendedReal f = vfe(q, present, obs, tol).total;

    std::vector<double> predicted(m2.cols(), 0.0);
    for (std::size_t s = 0; s < q.cols(); ++s) {
      const double w = q.at(s);
      if (w == 0.0) continue;
      const auto row = m2.row(s * np + p);
      for (std::size_t c = 0; c < predicted.size(); ++c) predicted[c] += w * row[c];
    }
    const ExtendedReal g = efe(Morphism::state(m2.cod(), std::move(predicted)), preference, tol).total;
    ap.vfe.push_back(f);
    ap.efe.push_back(g);
    if (e.at(p) > 0.0 && f.is_finite() && g.is_finite()) {
      scores[p] = std::log(e.at(p)) - f.value() - g.value();
    }
  }
  try {
    ap.plan = softmax(scores);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::AllMinusInfinity) {
      fail(ErrorCode::AllMinusInfinity, "every policy has log E - F - G = -inf");
    }
    throw;
  }

  PlanReport r;
  try {
    r = exact_active_inference(m, obs, preference, tol);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::EmptyResult) throw;
    r.policy_wire = m.policy;
    r.policies = e.cod().wire(0).values;
    r.habits.assign(e.entries().begin(), e.entries().end());
    r.notes.push_back(std::string("exact plan undefined: ") + err.what());
  }
  if (!perception.diagnostics.excluded_observations.empty()) {
    r.notes.push_back("perception ignored observation values without model mass");
  }
  if (r.exact) r.tv_gap = total_variation(r.exact->plan, ap.plan);
  r.approx = std::move(ap);
  return r;
}

}  // namespace catinf
