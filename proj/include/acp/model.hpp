#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "acp/expression.hpp"
#include "acp/gauge.hpp"
#include "acp/modular.hpp"
#include "acp/report.hpp"
#include "acp/strata.hpp"

namespace acp {

/// Contents of a model file. Expressions are kept as ASTs so that saving
/// prints their canonical text.
///
///   [model]        name
///   [connection]   gamma1_1 .. gamma2_3       (default 0)
///   [kappa]        expr
///   [beta]         beta1 beta2 beta3
///   [gauge]        mu1 mu2 c epsilon          (optional)
///   [certificate]  h K kappa0                 (optional; K may be "auto")
///   [sampling]     box generator resolution seed
///   [tolerances]   identity oracle conservation finite_difference
///                  kappa_relative beta_relative
struct ModelFile {
  struct Gauge {
    std::array<Expression, kBaseDim> mu;
    Expression c;
    double epsilon = 1.0;
  };
  struct Certificate {
    std::optional<Expression> h;
    std::optional<Expression> K;  // absent when auto_K
    bool auto_K = false;
    std::optional<Expression> kappa0;
  };

  std::string name;
  std::array<std::array<Expression, kFiberDim>, kBaseDim> gamma;
  Expression kappa;
  std::array<Expression, kFiberDim> beta;
  std::optional<Gauge> gauge;
  std::optional<Certificate> certificate;
  Box box = uniform_box(-1.0, 1.0);
  Generator generator = Generator::Halton;
  int resolution = 1000;  // points for halton, nodes per axis for grid
  std::uint64_t seed = 0;
  Tolerances tol;
};

/// Parses model text. Throws ParseError (with line), MissingSection and
/// BadInterval; expression errors are re-raised as ParseError at the
/// offending line.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);
/// Canonical text: fixed section and key order, canonical expressions.
std::string format_model(const ModelFile& m);
void save_model(const ModelFile& m, const std::string& path);

/// The base triple (connection, kappa, beta) without the gauge block.
PoissonTriple base_triple(const ModelFile& m);
/// The triple the model describes: the gauge family image when a gauge
/// block is present, else the base triple.
PoissonTriple model_triple(const ModelFile& m);
GaugeData gauge_data(const ModelFile& m);
/// Throws MissingCertificate without a [certificate] block. K = auto
/// resolves to 1 / gauge denominator with kappa0 = base kappa, and needs a
/// gauge block.
UnimodularityCertificate model_certificate(const ModelFile& m);
SampleSet model_samples(const ModelFile& m);

}  // namespace acp
