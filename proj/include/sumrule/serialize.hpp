#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sumrule/ensembles.hpp"
#include "sumrule/jacobi.hpp"
#include "sumrule/ldp.hpp"
#include "sumrule/measures.hpp"
#include "sumrule/sumrules.hpp"

namespace sr::io {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a over the canonical (sorted-key, compact) dump
std::string config_hash(const nlohmann::json& config);

struct FileHeader {
  std::string version = kToolVersion;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string generated_at;  // excluded from golden comparisons
};
FileHeader make_header(const nlohmann::json& config, std::uint64_t seed);
nlohmann::json to_json(const FileHeader& h);
// "# sumrule <version> config=<hash> seed=<seed> generated_at=<ts>"
std::string csv_header_line(const FileHeader& h);

nlohmann::json to_json(const jacobi::JacobiCoefficients& j);
jacobi::JacobiCoefficients coefficients_from_json(const nlohmann::json& js);
std::string to_csv(const jacobi::JacobiCoefficients& j);

// measures serialize by family kind + parameters + atoms (evaluators are
// reconstructed from the named family)
nlohmann::json measure_descriptor(const MeasureS1& mu, const nlohmann::json& params);
MeasureS1 measure_from_json(const nlohmann::json& js);

nlohmann::json to_json(const SumRuleReport& rep);
std::string to_csv_row(const SumRuleReport& rep);

nlohmann::json to_json(const ensembles::SampledSpectralData& data);
std::string to_csv(const ensembles::SampledSpectralData& data, const FileHeader& h);

nlohmann::json to_json(const ldp::RateProbeReport& rep);
std::string to_csv(const ldp::RateProbeReport& rep, const FileHeader& h);

std::string to_csv(const std::vector<ldp::RateCurveRow>& rows, const FileHeader& h);
nlohmann::json to_json(const std::vector<ldp::RateCurveRow>& rows);

// doubles render with enough digits to round-trip
std::string fmt(double x);

}  // namespace sr::io
