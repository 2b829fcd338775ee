#pragma once

// JSON model files read and written by the command-line tool.
//
//   {"kind": "circle", "z": [re, im], ...common}
//   {"kind": "cw", "group": {...}, "cells": [[id, ...], ...],
//    "boundaries": {id: [[lower_id, "t - 1"], ...]}, "representation": {...}, ...common}
//   {"kind": "random_complex", "n": 3, "dims": [...], "seed": 7,
//    "variant": "chirality" | "selfadjoint", "d": [...]?, "chirality": [...]?, ...common}
//
// common: "euler": {"lifts": {id: word}, "gro": 1}, "rank_e": int, "l_integral": "p/q".
// Matrices are {"rows", "cols", "data": [[re, im], ...]} in row-major order.
// Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "rtor/analytic_models.hpp"
#include "rtor/comb_torsion.hpp"
#include "rtor/complexes.hpp"
#include "rtor/oddsig.hpp"

namespace rtor {

using Json = nlohmann::json;

enum class ModelKind { Circle, CW, RandomComplex };

const char* to_string(ModelKind kind);

struct RandomComplexSpec {
  int n = 1;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  bool selfadjoint = false;
  std::optional<TwistedComplex> complex;
  std::optional<Chirality> chirality;
};

struct ModelFile {
  ModelKind kind = ModelKind::Circle;
  cplx z{};
  std::optional<CWData> cw;
  std::optional<Representation> representation;
  RandomComplexSpec random;
  std::optional<EulerStructure> euler;
  std::optional<int> rank_e;
  std::optional<Rational> l_integral;
};

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);

/// "a", "a/b", "-a/b".
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

/// "2", "0.5+0.5i", "-i", "1e-3-2i".
cplx parse_complex(const std::string& text);

ModelFile parse_model(const Json& j);
ModelFile parse_model_text(const std::string& text);
Json model_to_json(const ModelFile& m);

/// Materializes the complex and chirality of a random_complex model.
GeneratedComplex materialize(const RandomComplexSpec& spec);

/// Built-in models for `generate`.
ModelFile circle_model(cplx z);
ModelFile lens_model(int p, int q, int character);
ModelFile random_model(int n, const std::vector<std::size_t>& dims, std::uint64_t seed, bool selfadjoint);

Json sweep_to_json(const SweepTable& table);

/// Stable text form: two-space indentation, trailing newline.
std::string dump(const Json& j);

}  // namespace rtor
