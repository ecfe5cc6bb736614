#pragma once

#include "bubblecorr/balance.hpp"
#include "bubblecorr/integrals.hpp"
#include "bubblecorr/polynomial.hpp"
#include "bubblecorr/profile.hpp"
#include "bubblecorr/reduction.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace bc {

using Json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json solution_to_json(const CorrectionSolution& s);
Json table_to_json(const CoefficientTable& t);
Json integral_to_json(const IntegralResult& r);
Json violation_to_json(const ViolationReport& v);
Json residual_report_to_json(const ResidualReport& r);
Json green_report_to_json(const GreenCheckReport& r);

BlowupConfiguration configuration_from_json(const Json& j);
Json configuration_to_json(const BlowupConfiguration& c);

// Reads the spec; "gamma" may be given directly, or "polynomial" is solved for it.
RefinedProfileSpec profile_spec_from_json(const Json& j);

// Serializes with every float printed to 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);

Json read_json_file(const std::string& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bc
