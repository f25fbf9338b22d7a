#include "tunebench/calculi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tunebench {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double clamp_p(double p) { return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp); }

double odds(double p) { return p / (1.0 - p); }

constexpr std::string_view kLinearNames[] = {"a", "b1", "b2"};
constexpr std::string_view kIndependenceNames[] = {"q00", "q10", "q01", "q11"};
constexpr std::string_view kMycinNames[] = {"prior_e1", "prior_e2", "prior_c", "cf1", "cf2"};
constexpr std::string_view kProspectorNames[] = {"prior_e1", "prior_e2", "prior_c", "like1_t",
                                                 "like1_f",  "like2_t",  "like2_f"};

double mycin_certainty(double p, double prior, MycinPremise premise) {
  const double u = p >= prior ? (p - prior) / (1.0 - prior) : (p - prior) / prior;
  return premise == MycinPremise::Clamped ? std::max(0.0, u) : u;
}

// Posterior of C after one piece of PROSPECTOR evidence observed with
// probability p.
double prospector_single(double p, double prior_e, double prior_c, double like_t, double like_f) {
  const double p_true = clamp_p(like_t * prior_c / (like_t * prior_c + like_f * (1.0 - prior_c)));
  const double p_false = clamp_p((1.0 - like_t) * prior_c /
                                 ((1.0 - like_t) * prior_c + (1.0 - like_f) * (1.0 - prior_c)));
  if (p <= prior_e) return clamp_p(p_false + (p / prior_e) * (prior_c - p_false));
  return clamp_p(prior_c + ((p - prior_e) / (1.0 - prior_e)) * (p_true - prior_c));
}

double base_rate(const JointTable& table, Variable variable) {
  const double p = marginal(table, variable);
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("base rate must lie strictly inside (0,1), got " +
                                std::to_string(p));
  }
  return p;
}

// Certainty factor of C given evidence from P(C|E) and P(C).
double certainty_factor(double p_c_given_e, double p_c) {
  const double delta = p_c_given_e - p_c;
  return delta >= 0.0 ? delta / (1.0 - p_c) : delta / p_c;
}

}  // namespace

std::string_view to_string(Calculus calculus) {
  switch (calculus) {
    case Calculus::Linear: return "linear";
    case Calculus::Independence: return "independence";
    case Calculus::Mycin: return "mycin";
    case Calculus::Prospector: return "prospector";
  }
  return "?";
}

Calculus parse_calculus(std::string_view name) {
  for (Calculus c : kAllCalculi) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown calculus '" + std::string(name) + "'");
}

double linear_eval(const LinearParams& params, EvidenceProbe probe) {
  return params.a + params.b1 * probe.p1 + params.b2 * probe.p2;
}

double independence_eval(const IndependenceParams& params, EvidenceProbe probe) {
  const double n1 = 1.0 - probe.p1;
  const double n2 = 1.0 - probe.p2;
  return n1 * n2 * params.q00 + probe.p1 * n2 * params.q10 + n1 * probe.p2 * params.q01 +
         probe.p1 * probe.p2 * params.q11;
}

double mycin_eval(const MycinParams& params, EvidenceProbe probe, MycinPremise premise) {
  const double prior_c = clamp_p(params.prior_c);
  const double c1 = std::clamp(params.cf1, -1.0, 1.0) *
                    mycin_certainty(probe.p1, clamp_p(params.prior_e1), premise);
  const double c2 = std::clamp(params.cf2, -1.0, 1.0) *
                    mycin_certainty(probe.p2, clamp_p(params.prior_e2), premise);
  double c;
  if (c1 >= 0.0 && c2 >= 0.0) {
    c = c1 + c2 - c1 * c2;
  } else if (c1 <= 0.0 && c2 <= 0.0) {
    c = c1 + c2 + c1 * c2;
  } else {
    const double denom = 1.0 - std::min(std::abs(c1), std::abs(c2));
    if (denom == 0.0) return prior_c;
    c = (c1 + c2) / denom;
  }
  return c >= 0.0 ? prior_c + c * (1.0 - prior_c) : prior_c * (1.0 + c);
}

double prospector_eval(const ProspectorParams& params, EvidenceProbe probe) {
  const double prior_c = clamp_p(params.prior_c);
  const double post1 = prospector_single(probe.p1, clamp_p(params.prior_e1), prior_c,
                                         clamp_p(params.like1_t), clamp_p(params.like1_f));
  const double post2 = prospector_single(probe.p2, clamp_p(params.prior_e2), prior_c,
                                         clamp_p(params.like2_t), clamp_p(params.like2_f));
  const double prior_odds = odds(prior_c);
  const double lambda1 = odds(post1) / prior_odds;
  const double lambda2 = odds(post2) / prior_odds;
  const double combined = prior_odds * lambda1 * lambda2;
  return combined / (1.0 + combined);
}

double evaluate(const CalculusParams& params, EvidenceProbe probe, const EvalOptions& options) {
  return std::visit(
      Overloaded{
          [&](const LinearParams& p) { return linear_eval(p, probe); },
          [&](const IndependenceParams& p) { return independence_eval(p, probe); },
          [&](const MycinParams& p) { return mycin_eval(p, probe, options.mycin_premise); },
          [&](const ProspectorParams& p) { return prospector_eval(p, probe); },
      },
      params);
}

Calculus calculus_of(const CalculusParams& params) {
  return kAllCalculi[params.index()];
}

std::span<const std::string_view> parameter_names(Calculus calculus) {
  switch (calculus) {
    case Calculus::Linear: return kLinearNames;
    case Calculus::Independence: return kIndependenceNames;
    case Calculus::Mycin: return kMycinNames;
    case Calculus::Prospector: return kProspectorNames;
  }
  return {};
}

std::size_t parameter_count(Calculus calculus) { return parameter_names(calculus).size(); }

std::vector<double> to_vector(const CalculusParams& params) {
  return std::visit(
      Overloaded{
          [](const LinearParams& p) { return std::vector<double>{p.a, p.b1, p.b2}; },
          [](const IndependenceParams& p) {
            return std::vector<double>{p.q00, p.q10, p.q01, p.q11};
          },
          [](const MycinParams& p) {
            return std::vector<double>{p.prior_e1, p.prior_e2, p.prior_c, p.cf1, p.cf2};
          },
          [](const ProspectorParams& p) {
            return std::vector<double>{p.prior_e1, p.prior_e2, p.prior_c, p.like1_t,
                                       p.like1_f,  p.like2_t,  p.like2_f};
          },
      },
      params);
}

CalculusParams from_vector(Calculus calculus, std::span<const double> v) {
  if (v.size() != parameter_count(calculus)) {
    throw std::invalid_argument(std::string(to_string(calculus)) + " expects " +
                                std::to_string(parameter_count(calculus)) + " parameters, got " +
                                std::to_string(v.size()));
  }
  switch (calculus) {
    case Calculus::Linear: return LinearParams{v[0], v[1], v[2]};
    case Calculus::Independence: return IndependenceParams{v[0], v[1], v[2], v[3]};
    case Calculus::Mycin: return MycinParams{v[0], v[1], v[2], v[3], v[4]};
    case Calculus::Prospector: return ProspectorParams{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  throw std::invalid_argument("unknown calculus");
}

CalculusParams theoretical_init(const JointTable& table, Calculus calculus) {
  switch (calculus) {
    case Calculus::Linear: {
      const double q00 = conditional_c(table, 0, 0);
      return LinearParams{q00, conditional_c(table, 1, 0) - q00, conditional_c(table, 0, 1) - q00};
    }
    case Calculus::Independence:
      return IndependenceParams{conditional_c(table, 0, 0), conditional_c(table, 1, 0),
                                conditional_c(table, 0, 1), conditional_c(table, 1, 1)};
    case Calculus::Mycin: {
      // Slices must be non-degenerate for the model to be meaningful at all.
      (void)conditional_profile(table);
      const double p_e1 = base_rate(table, Variable::E1);
      const double p_e2 = base_rate(table, Variable::E2);
      const double p_c = base_rate(table, Variable::C);
      const double c_given_e1 = (table.at(1, 0, 1) + table.at(1, 1, 1)) / p_e1;
      const double c_given_e2 = (table.at(0, 1, 1) + table.at(1, 1, 1)) / p_e2;
      return MycinParams{p_e1, p_e2, p_c, certainty_factor(c_given_e1, p_c),
                         certainty_factor(c_given_e2, p_c)};
    }
    case Calculus::Prospector: {
      (void)conditional_profile(table);
      const double p_e1 = base_rate(table, Variable::E1);
      const double p_e2 = base_rate(table, Variable::E2);
      const double p_c = base_rate(table, Variable::C);
      const double e1_and_c = table.at(1, 0, 1) + table.at(1, 1, 1);
      const double e2_and_c = table.at(0, 1, 1) + table.at(1, 1, 1);
      return ProspectorParams{p_e1,
                              p_e2,
                              p_c,
                              e1_and_c / p_c,
                              (p_e1 - e1_and_c) / (1.0 - p_c),
                              e2_and_c / p_c,
                              (p_e2 - e2_and_c) / (1.0 - p_c)};
    }
  }
  throw std::invalid_argument("unknown calculus");
}

CalculusParams swap_evidence(const CalculusParams& params) {
  return std::visit(
      Overloaded{
          [](const LinearParams& p) -> CalculusParams { return LinearParams{p.a, p.b2, p.b1}; },
          [](const IndependenceParams& p) -> CalculusParams {
            return IndependenceParams{p.q00, p.q01, p.q10, p.q11};
          },
          [](const MycinParams& p) -> CalculusParams {
            return MycinParams{p.prior_e2, p.prior_e1, p.prior_c, p.cf2, p.cf1};
          },
          [](const ProspectorParams& p) -> CalculusParams {
            return ProspectorParams{p.prior_e2, p.prior_e1, p.prior_c, p.like2_t,
                                    p.like2_f,  p.like1_t,  p.like1_f};
          },
      },
      params);
}

}  // namespace tunebench
