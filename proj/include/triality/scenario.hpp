#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

// Single-header bundle first, standard system install second.
#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include "triality/errors.hpp"
#include "triality/state.hpp"

namespace triality {

// A named quanton-detector state with a human-readable description.
struct Scenario {
  std::string name;
  std::string metadata;
  QuantonDetectorState state;
  int detector_dim;  // dimension of explicit detector vectors; 0 when
                     // the detector was given as a Gram matrix
};

namespace detail {

inline double json_number(const nlohmann::json& node, const std::string& path) {
  if (!node.is_number()) {
    throw validation_error(path + ": expected a number");
  }
  const double value = node.get<double>();
  if (!std::isfinite(value)) {
    throw validation_error(path + ": non-finite number");
  }
  return value;
}

// Complex entry, written either as {re, im} or as {mod, phase_rad}.
inline Complex json_complex(const nlohmann::json& node, const std::string& path) {
  if (!node.is_object()) {
    throw validation_error(path + ": expected an object with re/im or mod/phase_rad");
  }
  const bool cartesian = node.contains("re") || node.contains("im");
  const bool polar = node.contains("mod") || node.contains("phase_rad");
  if (cartesian && polar) {
    throw validation_error(path + ": mixes re/im with mod/phase_rad");
  }
  if (!cartesian && !polar) {
    throw validation_error(path + ": expected re/im or mod/phase_rad fields");
  }
  for (const auto& item : node.items()) {
    const std::string& key = item.key();
    if (key != "re" && key != "im" && key != "mod" && key != "phase_rad") {
      throw validation_error(path + ": unknown field '" + key + "'");
    }
  }
  if (cartesian) {
    const double re = node.contains("re") ? json_number(node.at("re"), path + ".re") : 0.0;
    const double im = node.contains("im") ? json_number(node.at("im"), path + ".im") : 0.0;
    return Complex(re, im);
  }
  if (!node.contains("mod")) {
    throw validation_error(path + ": phase_rad without mod");
  }
  const double mod = json_number(node.at("mod"), path + ".mod");
  if (mod < 0.0) {
    throw validation_error(path + ".mod: modulus must be >= 0");
  }
  const double phase =
      node.contains("phase_rad") ? json_number(node.at("phase_rad"), path + ".phase_rad") : 0.0;
  return Complex(mod * std::cos(phase), mod * std::sin(phase));
}

}  // namespace detail

// Parses a scenario document:
//   {
//     "name": "...", "metadata": "...", "n": 2,
//     "amplitudes": [{"re":..,"im":..} | {"mod":..,"phase_rad":..}, ...],
//     "detector": {"vectors": [[{re,im},...],...]}  OR  {"gram": [[{re,im},...],...]}
//   }
// Errors carry the offending field path.  The parsed state passes the
// same validation as programmatically constructed ones.
inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw validation_error(std::string("scenario: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw validation_error("scenario: top level must be an object");
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "name" && key != "metadata" && key != "n" && key != "amplitudes" &&
        key != "detector") {
      throw validation_error("scenario: unknown field '" + key + "'");
    }
  }

  if (!doc.contains("name") || !doc.at("name").is_string()) {
    throw validation_error("scenario: 'name' must be a string");
  }
  const std::string name = doc.at("name").get<std::string>();
  if (name.empty()) throw validation_error("scenario: 'name' must not be empty");

  std::string metadata;
  if (doc.contains("metadata")) {
    if (!doc.at("metadata").is_string()) {
      throw validation_error("scenario: 'metadata' must be a string");
    }
    metadata = doc.at("metadata").get<std::string>();
  }

  if (!doc.contains("n") || !doc.at("n").is_number_integer()) {
    throw validation_error("scenario: 'n' must be an integer");
  }
  const int n = doc.at("n").get<int>();
  if (n < 2) throw validation_error("scenario: 'n' must be >= 2");

  if (!doc.contains("amplitudes") || !doc.at("amplitudes").is_array()) {
    throw validation_error("scenario: 'amplitudes' must be an array");
  }
  const auto& amp_nodes = doc.at("amplitudes");
  if (static_cast<int>(amp_nodes.size()) != n) {
    throw validation_error("scenario: amplitudes has " + std::to_string(amp_nodes.size()) +
                           " entries, n is " + std::to_string(n));
  }
  ComplexVector c(n);
  for (int k = 0; k < n; ++k) {
    c[k] = detail::json_complex(amp_nodes.at(k), "amplitudes[" + std::to_string(k) + "]");
  }
  PathAmplitudes amplitudes(std::move(c));

  if (!doc.contains("detector") || !doc.at("detector").is_object()) {
    throw validation_error("scenario: 'detector' must be an object");
  }
  const auto& det = doc.at("detector");
  const bool has_vectors = det.contains("vectors");
  const bool has_gram = det.contains("gram");
  if (has_vectors == has_gram) {
    throw validation_error("scenario: detector needs exactly one of 'vectors' or 'gram'");
  }
  for (const auto& item : det.items()) {
    const std::string& key = item.key();
    if (key != "vectors" && key != "gram") {
      throw validation_error("scenario: detector: unknown field '" + key + "'");
    }
  }

  if (has_vectors) {
    const auto& vec_nodes = det.at("vectors");
    if (!vec_nodes.is_array() || static_cast<int>(vec_nodes.size()) != n) {
      throw validation_error("scenario: detector.vectors must be an array of n=" +
                             std::to_string(n) + " vectors");
    }
    std::vector<ComplexVector> vectors;
    vectors.reserve(n);
    for (int i = 0; i < n; ++i) {
      const std::string vec_path = "detector.vectors[" + std::to_string(i) + "]";
      const auto& entries = vec_nodes.at(i);
      if (!entries.is_array() || entries.empty()) {
        throw validation_error("scenario: " + vec_path + ": expected a non-empty array");
      }
      ComplexVector v(entries.size());
      for (std::size_t k = 0; k < entries.size(); ++k) {
        v[k] = detail::json_complex(entries.at(k), vec_path + "[" + std::to_string(k) + "]");
      }
      vectors.push_back(std::move(v));
    }
    DetectorVectors dv(std::move(vectors));
    const int dim = dv.dim();
    return Scenario{name, metadata,
                    QuantonDetectorState(std::move(amplitudes), DetectorGram::from_vectors(dv)),
                    dim};
  }

  const auto& gram_nodes = det.at("gram");
  if (!gram_nodes.is_array() || static_cast<int>(gram_nodes.size()) != n) {
    throw validation_error("scenario: detector.gram must be an array of n=" + std::to_string(n) +
                           " rows");
  }
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = gram_nodes.at(i);
    const std::string row_path = "detector.gram[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw validation_error("scenario: " + row_path + ": expected " + std::to_string(n) +
                             " entries");
    }
    for (int j = 0; j < n; ++j) {
      g(i, j) = detail::json_complex(row.at(j), row_path + "[" + std::to_string(j) + "]");
    }
  }
  return Scenario{name, metadata,
                  QuantonDetectorState(std::move(amplitudes), DetectorGram::validated(std::move(g))),
                  0};
}

// Serializes a scenario back to the document format.  The detector is
// always written as its Gram matrix — the canonical representation every
// measure actually consumes — with shortest round-trip numbers, so a
// parse/serialize cycle reproduces the state bit for bit.
inline std::string serialize_scenario(const Scenario& scenario) {
  nlohmann::json doc;
  doc["name"] = scenario.name;
  if (!scenario.metadata.empty()) doc["metadata"] = scenario.metadata;
  const int n = scenario.state.n();
  doc["n"] = n;
  nlohmann::json amps = nlohmann::json::array();
  for (int k = 0; k < n; ++k) {
    const Complex a = scenario.state.amplitudes().coefficient(k);
    amps.push_back({{"re", a.real()}, {"im", a.imag()}});
  }
  doc["amplitudes"] = std::move(amps);
  nlohmann::json gram = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n; ++j) {
      const Complex g = scenario.state.gram().overlap(i, j);
      row.push_back({{"re", g.real()}, {"im", g.imag()}});
    }
    gram.push_back(std::move(row));
  }
  doc["detector"] = {{"gram", std::move(gram)}};
  return doc.dump(2) + "\n";
}

// The built-in scenario library: the classic textbook configurations
// every report and test suite refers to by name.
inline const std::vector<Scenario>& canonical_scenarios() {
  static const std::vector<Scenario> kScenarios = [] {
    std::vector<Scenario> list;

    {
      // Two-path interferometer with a spin-1/2 path marker whose two
      // marker states overlap by 1/2.
      ComplexVector c(2);
      c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      ComplexVector d1(2), d2(2);
      d1 << 1.0, 0.0;
      d2 << 0.5, std::sqrt(3.0) / 2.0;
      DetectorVectors dv({d1, d2});
      list.push_back({"neutron-spin-two-path",
                      "Equal two-path interference with a spin-1/2 path marker; the marker "
                      "states overlap by 0.5, trading half the coherence for path knowledge.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)),
                                           DetectorGram::from_vectors(dv)),
                      2});
    }
    {
      // The worked reference point: populations (0.8, 0.2), overlap 1/2.
      ComplexVector c(2);
      c << std::sqrt(0.8), std::sqrt(0.2);
      list.push_back({"asymmetric-two-path",
                      "Unbalanced two-path state, populations (0.8, 0.2), detector overlap 0.5; "
                      "the worked example whose measures are all simple closed numbers.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)),
                                           DetectorGram::uniform_overlap(2, 0.5)),
                      0});
    }
    {
      ComplexVector c(3);
      c.setConstant(1.0 / std::sqrt(3.0));
      list.push_back({"max-entangled-n3",
                      "Three equal paths with mutually orthogonal detector states: maximal "
                      "quanton-detector entanglement, no coherence left.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)), DetectorGram::identity(3)),
                      0});
    }
    {
      ComplexVector c(3);
      c.setConstant(1.0 / std::sqrt(3.0));
      list.push_back({"disentangled-n3",
                      "Three equal paths with identical detector states: the detector learns "
                      "nothing and full coherence survives.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)), DetectorGram::all_ones(3)),
                      0});
    }
    {
      ComplexVector c(3);
      c << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
      list.push_back({"biased-n3",
                      "Three unequal paths (populations 0.5, 0.3, 0.2) with identical detector "
                      "states: nonzero predictability, coherence carries the rest.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)), DetectorGram::all_ones(3)),
                      0});
    }
    {
      ComplexVector c(2);
      c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      list.push_back({"disentangled-n2",
                      "Equal two-path state with identical detector states: the bare duality "
                      "configuration with full fringe visibility.",
                      QuantonDetectorState(PathAmplitudes(std::move(c)), DetectorGram::all_ones(2)),
                      0});
    }
    return list;
  }();
  return kScenarios;
}

// Canonical scenario by name; null when no such scenario exists.
inline const Scenario* find_canonical(const std::string& name) {
  for (const auto& scenario : canonical_scenarios()) {
    if (scenario.name == name) return &scenario;
  }
  return nullptr;
}

}  // namespace triality
