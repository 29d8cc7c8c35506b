#pragma once

// Versioned JSON formats and CSV curves. Output is canonical: object keys
// sorted, floats printed with 17 significant digits, no whitespace, so equal
// inputs give byte-identical files.

#include <optional>
#include <span>
#include <string>

#include "json.hpp"

#include "fockseq/chaos.hpp"
#include "fockseq/functional.hpp"
#include "fockseq/sequence.hpp"

namespace fockseq::io {

using Json = nlohmann::json;

inline constexpr const char* kFunctionalFormat = "fock-coefficients/v1";
inline constexpr const char* kRandomFunctionalFormat = "random-functional/v1";
inline constexpr const char* kSequenceFormat = "fock-sequence/v1";
inline constexpr const char* kVerdictFormat = "convergence-verdict/v1";
inline constexpr const char* kMartingaleCheckFormat = "martingale-check/v1";

std::string format_double(double value);
std::string canonical_dump(const Json& value);

/// Throws ParseError on malformed text.
Json parse(const std::string& text);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json subset_to_json(FiniteSubset sigma);
/// Ascending array of indices; throws ParseError otherwise.
FiniteSubset subset_from_json(const Json& value);

/// Rule-backed functionals need a domain to restrict to.
Json functional_to_json(const FockCoefficients& phi,
                        const std::optional<TruncatedDomain>& restrict_to = std::nullopt);
FockCoefficients functional_from_json(const Json& value);

Json random_functional_to_json(const RandomFunctional& f);
RandomFunctional random_functional_from_json(const Json& value);

/// {"format":"fock-sequence/v1","terms":[...]}. The reader also accepts an
/// array whose first element is the format header.
Json sequence_to_json(const FunctionalSequence& seq,
                      const std::optional<TruncatedDomain>& restrict_to = std::nullopt);
FunctionalSequence sequence_from_json(const Json& value);

Json certificate_to_json(const GrowthCertificate& cert);
Json martingale_check_to_json(const MartingaleCheck& check, const TruncatedDomain& domain, double tol);
Json verdict_to_json(const ConvergenceVerdict& verdict);

/// sigma,stabilization_index,sup_abs,certificate_margin
std::string verdict_to_csv(const ConvergenceVerdict& verdict);
/// n,residual
std::string residual_curve_to_csv(std::span<const double> curve);

}  // namespace fockseq::io
