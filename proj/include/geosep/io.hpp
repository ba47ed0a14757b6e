#pragma once

#include "geosep/certificates.hpp"
#include "geosep/harness.hpp"
#include "geosep/partition.hpp"
#include "geosep/solver.hpp"
#include "geosep/types.hpp"

#include <json.hpp>

#include <string>

namespace geosep {

// Signals serialize as JSON arrays of numbers and as single-column CSV;
// readers auto-detect the format by the first non-space byte.
Vec read_signal(const std::string& path);
Vec signal_from_string(const std::string& text);
void write_signal_csv(const Vec& x, const std::string& path);

// K_SPEC grammar: all | none | list:0,3,5 | block:a,b | random:p,seed
IndexSet parse_known_spec(const std::string& spec, int n);

// {"n": ..., "known": [...]}
nlohmann::json partition_to_json(const CoordinatePartition& p);
CoordinatePartition partition_from_json(const nlohmann::json& j);

// {"delta", "kappa", "kappa_kind", "bound"}; +inf encodes as "inf".
nlohmann::json certificate_to_json(const Certificate& c);

nlohmann::json solve_result_to_json(const SolveResult& r);

// {"lambda1": [...], "lambda2": [...]} with sorted integer arrays.
nlohmann::json supports_to_json(const SupportPair& s);
SupportPair supports_from_json(const nlohmann::json& j);
SupportPair read_supports(const std::string& path);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig read_experiment_config(const std::string& path);

// Fixed-width-free deterministic double formatting shared by every
// serializer ("%.12g"; infinities as "inf"/"-inf").
std::string format_double(double v);

}  // namespace geosep
