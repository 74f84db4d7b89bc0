#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "ricperp/certifier.hpp"
#include "ricperp/cspace.hpp"
#include "ricperp/projbundle.hpp"

namespace ricperp::io {

using Json = nlohmann::ordered_json;

/// Seventeen significant digits, negative zero printed as 0.
std::string format_double(double v);

/// Canonical tensor document: {"n", "metric" (omitted for identity), "R"}.
std::string tensor_to_json(const KahlerTensor& R, const HermitianForm& g);
/// Throws Parse for malformed documents, then the usual validation errors.
CurvaturePoint tensor_from_json(std::string_view text);

std::string read_file(const std::string& path);
/// Writes through a temporary file and renames, so failures leave nothing behind.
void write_file(const std::string& path, std::string_view contents);

CurvaturePoint load_tensor(const std::string& path);
void save_tensor(const std::string& path, const CurvaturePoint& cp);

/// Bundle input document: n, r, lambda, optional Rg (default Fubini–Study),
/// Rh (r×r×n×n of [re, im]) or degrees, optional fiber_point, d3, d3_mixed, d4.
/// Without derivative arrays the data are adapted to the fiber point;
/// with them the data must already be adapted.
projbundle::ProjBundleInput bundle_input_from_json(const Json& doc);

Json complex_json(Complex c);
Json vector_json(const CVector& v);
Json matrix_json(const CMatrix& m);

Json report_json(const PositivityReport& rep);
Json flat_json(const FlatReport& rep);
Json einstein_json(const EinsteinResult& res);
Json record_json(const cspace::ClassificationRecord& rec);
Json margin_json(const projbundle::MarginReport& rep);
Json lambda_search_json(const projbundle::LambdaSearchReport& rep);
Json ricci_split_json(const projbundle::RicciSplit& rs);
Json phi_json(const projbundle::PhiBreakdown& phi);

}  // namespace ricperp::io
