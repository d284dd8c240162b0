#pragma once

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "acp/model.hpp"

namespace acp {

/// The `check` campaign: IC/Jacobiator equivalence, cochain identities on
/// fixed test forms, volume splitting, the coupling-domain equations, the
/// 2-cocycle property and the curvature identity. Residuals are divided by
/// (1 + m)^4 as in equivalence_check; the two residuals containing 1/kappa
/// are further divided by 1 + |d(1/kappa)| |beta|. Suites that need more
/// jet orders than the triple has are skipped with a note.
VerificationReport check_suite(const PoissonTriple& t, const std::vector<Point>& samples, const Tolerances& tol,
                               Execution ex = default_execution());

/// Pass/fail report of the modular field: "bigraded_vs_direct" at every
/// sample, plus "lie_derivative" where the triple has 2-jets.
VerificationReport modular_suite(const PoissonTriple& t, const std::vector<Point>& samples, const Tolerances& tol,
                                 Execution ex = default_execution());

/// JSON report document: tool, version, model, samples, tolerances, checks
/// (id, tol, count, skipped, failures, max, mean, worst, verdict, note),
/// disagreements, notes and the overall verdict.
nlohmann::ordered_json report_json(const std::string& model, const SampleSet& s, const Tolerances& tol,
                                   const VerificationReport& rep);
nlohmann::ordered_json point_json(const Point& p);

/// Built-in examples as model texts.
const std::vector<std::string>& builtin_names();
/// Throws InputError for an unknown name.
const std::string& builtin_text(const std::string& name);
/// A readable file path, else a built-in name.
ModelFile resolve_model(const std::string& path_or_name);

/// Random flat Poisson triple: beta = g grad_y phi (g = 1 for the closed
/// variant), gamma_i = -X_h for a random h along one base direction,
/// kappa0 = a polynomial in x and phi. All fields are polynomials or
/// exponentials of polynomials in the given variables.
struct FlatTripleData {
  Connection gamma;
  DifferentiableField kappa0;
  VerticalOneForm beta{};
};
FlatTripleData random_flat_triple(std::mt19937_64& rng, bool closed_beta);
/// Breaks the Poisson property: a fiber-dependent shift of kappa or a
/// non-Poisson term in gamma.
PoissonTriple perturb(const PoissonTriple& t, std::mt19937_64& rng);

}  // namespace acp
