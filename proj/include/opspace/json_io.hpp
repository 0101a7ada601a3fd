#pragma once

#include "opspace/factorization.hpp"
#include "opspace/opspace_norms.hpp"
#include "opspace/strip_quotient.hpp"
#include "opspace/subspace_geometry.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace opspace {

using Json = nlohmann::ordered_json;

// {"rows": m, "cols": n, "data": [[re, im], ...]} row-major.
Json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const Json& j);

// {"variant": "rtheta", "n": 3, "theta": 0.5}, with "weights", "orientation", "summands" where needed.
Json descriptor_to_json(const OpSpaceDescriptor& d);
OpSpaceDescriptor descriptor_from_json(const Json& j);

// {"space": descriptor, "coefficients": [matrix, ...]}.
Json element_to_json(const MatrixElement& x);
MatrixElement element_from_json(const Json& j);

Json certificate_to_json(const StateCertificate& c);
StateCertificate certificate_from_json(const Json& j);

// {"N": N, "theta": t, "u": matrix, "basis": [matrix, ...], "exactness": c} or
// {"functionals": [matrix, ...], "theta": t}.
Json map_spec_to_json(const CbMapSpec& s);
CbMapSpec map_spec_from_json(const Json& j);

Json quadrature_to_json(const StripQuadrature& q);
Json hardy_basis_to_json(const HardyBasis& b);

Json check_rows_to_json(const std::vector<CheckRow>& rows);

Json real_list(const RealVector& v);
std::vector<double> double_list(const Json& j);

// Whole file or stdin when path is "-".
std::string read_text(const std::string& path);
// Whole file or stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace opspace
