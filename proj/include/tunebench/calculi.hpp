#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tunebench/joint_table.hpp"
#include "tunebench/mce.hpp"

namespace tunebench {

enum class Calculus { Linear, Independence, Mycin, Prospector };

inline constexpr std::array<Calculus, 4> kAllCalculi{Calculus::Linear, Calculus::Independence,
                                                    Calculus::Mycin, Calculus::Prospector};

std::string_view to_string(Calculus calculus);
/// Accepts the lower-case names used on the command line and in JSON.
/// Throws std::invalid_argument for anything else.
Calculus parse_calculus(std::string_view name);

/// Clamp applied to probabilities inside the MYCIN and PROSPECTOR formulas.
inline constexpr double kProbabilityClamp = 1e-9;

/// P'(C) = a + b1 P'(E1) + b2 P'(E2).
struct LinearParams {
  double a = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

/// The four conditionals P(C|e1,e2); qXY has e1 = X, e2 = Y.
struct IndependenceParams {
  double q00 = 0.0;
  double q10 = 0.0;
  double q01 = 0.0;
  double q11 = 0.0;
  friend bool operator==(const IndependenceParams&, const IndependenceParams&) = default;
};

struct MycinParams {
  double prior_e1 = 0.5;
  double prior_e2 = 0.5;
  double prior_c = 0.5;
  double cf1 = 0.0;
  double cf2 = 0.0;
  friend bool operator==(const MycinParams&, const MycinParams&) = default;
};

/// likeN_t = P(EN|C), likeN_f = P(EN|~C).
struct ProspectorParams {
  double prior_e1 = 0.5;
  double prior_e2 = 0.5;
  double prior_c = 0.5;
  double like1_t = 0.5;
  double like1_f = 0.5;
  double like2_t = 0.5;
  double like2_f = 0.5;
  friend bool operator==(const ProspectorParams&, const ProspectorParams&) = default;
};

using CalculusParams = std::variant<LinearParams, IndependenceParams, MycinParams, ProspectorParams>;

/// How MYCIN attenuates a rule's certainty factor by the evidence certainty.
enum class MycinPremise {
  SignedProduct,  // cf * u, continuous in u
  Clamped,        // cf * max(0, u), the historical convention
};

struct EvalOptions {
  MycinPremise mycin_premise = MycinPremise::Clamped;
};

/// Not clipped to [0,1].
double linear_eval(const LinearParams& params, EvidenceProbe probe);

/// Bilinear interpolation of the four conditionals, weighting each evidence
/// state by the product of the new evidence probabilities.
double independence_eval(const IndependenceParams& params, EvidenceProbe probe);

/// Single-level MYCIN update of C from two rules E1->C and E2->C.
///
/// Evidence certainty is measured against the (tunable) evidence base rate:
/// u = (p - prior)/(1 - prior) above the base rate, (p - prior)/prior below.
/// The rule contributions cf*u are merged with the incremental combination
/// function and mapped back to a probability around prior_c.
double mycin_eval(const MycinParams& params, EvidenceProbe probe,
                  MycinPremise premise = MycinPremise::Clamped);

/// PROSPECTOR update: each evidence moves P(C) along the piecewise-linear
/// curve through (0, P(C|~E)), (prior_e, prior_c), (1, P(C|E)); the two
/// resulting odds multipliers are combined assuming conditional independence.
double prospector_eval(const ProspectorParams& params, EvidenceProbe probe);

double evaluate(const CalculusParams& params, EvidenceProbe probe, const EvalOptions& options = {});

Calculus calculus_of(const CalculusParams& params);

std::size_t parameter_count(Calculus calculus);

/// Field names in declaration order, as used by the JSON format.
std::span<const std::string_view> parameter_names(Calculus calculus);

/// Parameter values in declaration order, and the inverse.
std::vector<double> to_vector(const CalculusParams& params);
CalculusParams from_vector(Calculus calculus, std::span<const double> values);

/// Translation of a joint table into each calculus's parameters through the
/// published definitions. Throws DegenerateSlice for tables with an empty
/// (e1,e2) slice and std::invalid_argument when a needed base rate is 0 or 1.
CalculusParams theoretical_init(const JointTable& table, Calculus calculus);

/// Exchanges every E1-related parameter with its E2 counterpart.
CalculusParams swap_evidence(const CalculusParams& params);

}  // namespace tunebench
