#include "ricperp/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ricperp/curvature.hpp"
#include "ricperp/error.hpp"
#include "ricperp/models.hpp"

namespace ricperp::io {

std::string format_double(double v) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "cannot serialize a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double clean(double v) { return v == 0.0 ? 0.0 : v; }

void put_complex(std::string& out, Complex c) {
  out += '[';
  out += format_double(c.real());
  out += ", ";
  out += format_double(c.imag());
  out += ']';
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

Complex complex_from(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail(std::string(where) + ": expected [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const Json& sized_array(const Json& j, std::size_t n, const char* where) {
  if (!j.is_array() || j.size() != n) {
    parse_fail(std::string(where) + ": expected array of length " + std::to_string(n));
  }
  return j;
}

CMatrix matrix_from(const Json& j, int rows, int cols, const char* where) {
  CMatrix m(rows, cols);
  sized_array(j, rows, where);
  for (int i = 0; i < rows; ++i) {
    sized_array(j[i], cols, where);
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from(j[i][k], where);
  }
  return m;
}

TensorBuffer buffer_from(const Json& j, int n, const char* where) {
  TensorBuffer buf(n);
  sized_array(j, n, where);
  for (int a = 0; a < n; ++a) {
    sized_array(j[a], n, where);
    for (int b = 0; b < n; ++b) {
      sized_array(j[a][b], n, where);
      for (int c = 0; c < n; ++c) {
        sized_array(j[a][b][c], n, where);
        for (int d = 0; d < n; ++d) buf(a, b, c, d) = complex_from(j[a][b][c][d], where);
      }
    }
  }
  return buf;
}

int positive_int(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    parse_fail(std::string("field '") + key + "' must be an integer");
  }
  const long v = doc[key].get<long>();
  if (v < 1 || v > 64) parse_fail(std::string("field '") + key + "' out of range");
  return static_cast<int>(v);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string tensor_to_json(const KahlerTensor& R, const HermitianForm& g) {
  const int n = R.dim();
  if (g.dim() != n) throw Error(ErrorCode::DimensionMismatch, "tensor and metric dimensions differ");
  std::string out = "{\n  \"n\": " + std::to_string(n) + ",\n";
  if (!g.is_identity()) {
    out += "  \"metric\": [\n";
    for (int i = 0; i < n; ++i) {
      out += "    [";
      for (int j = 0; j < n; ++j) {
        if (j) out += ", ";
        put_complex(out, g(i, j));
      }
      out += i + 1 < n ? "],\n" : "]\n";
    }
    out += "  ],\n";
  }
  out += "  \"R\": [\n";
  for (int i = 0; i < n; ++i) {
    out += "    [\n";
    for (int j = 0; j < n; ++j) {
      out += "      [\n";
      for (int k = 0; k < n; ++k) {
        out += "        [";
        for (int l = 0; l < n; ++l) {
          if (l) out += ", ";
          put_complex(out, R(i, j, k, l));
        }
        out += k + 1 < n ? "],\n" : "]\n";
      }
      out += j + 1 < n ? "      ],\n" : "      ]\n";
    }
    out += i + 1 < n ? "    ],\n" : "    ]\n";
  }
  out += "  ]\n}\n";
  return out;
}

CurvaturePoint tensor_from_json(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) parse_fail("tensor document must be an object");
  const int n = positive_int(doc, "n");
  if (!doc.contains("R")) parse_fail("field 'R' is missing");
  HermitianForm g = HermitianForm::identity(n);
  if (doc.contains("metric")) {
    g = HermitianForm::from_matrix(matrix_from(doc["metric"], n, n, "metric"), kValidationTol);
    orthonormal_frame(g);
  }
  KahlerTensor R = KahlerTensor::validated(buffer_from(doc["R"], n, "R"));
  return {std::move(R), std::move(g)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw Error(ErrorCode::Io, "write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::Io, "cannot write '" + path + "': " + ec.message());
  }
}

CurvaturePoint load_tensor(const std::string& path) { return tensor_from_json(read_file(path)); }

void save_tensor(const std::string& path, const CurvaturePoint& cp) {
  write_file(path, tensor_to_json(cp.R, cp.g));
}

projbundle::ProjBundleInput bundle_input_from_json(const Json& doc) {
  if (!doc.is_object()) parse_fail("bundle document must be an object");
  const int n = positive_int(doc, "n");
  if (!doc.contains("lambda") || !doc["lambda"].is_number()) parse_fail("field 'lambda' must be a number");
  const double lambda = doc["lambda"].get<double>();

  KahlerTensor base = fubini_study(n).R;
  if (doc.contains("Rg")) base = KahlerTensor::validated(buffer_from(doc["Rg"], n, "Rg"));

  int r = 0;
  std::optional<BundleCurvature> rh;
  if (doc.contains("degrees")) {
    if (!doc["degrees"].is_array()) parse_fail("field 'degrees' must be an array");
    SplitBundleModel m{n, {}};
    for (const auto& d : doc["degrees"]) {
      if (!d.is_number_integer()) parse_fail("degrees must be integers");
      m.degrees.push_back(d.get<int>());
    }
    m.check();
    rh = split_bundle_curvature(m);
    r = m.rank();
  } else if (doc.contains("Rh")) {
    r = positive_int(doc, "r");
    BundleCurvature b(r, n);
    const auto& j = sized_array(doc["Rh"], r, "Rh");
    for (int a = 0; a < r; ++a) {
      sized_array(j[a], r, "Rh");
      const auto& row = j[a];
      for (int bb = 0; bb < r; ++bb) {
        const CMatrix m = matrix_from(row[bb], n, n, "Rh");
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) b(a, bb, i, k) = m(i, k);
      }
    }
    rh = std::move(b);
  } else {
    parse_fail("either 'degrees' or 'Rh' must be given");
  }
  if (doc.contains("r") && positive_int(doc, "r") != r) {
    throw Error(ErrorCode::DimensionMismatch, "field 'r' disagrees with the bundle data");
  }

  CVector v = CVector::Unit(r, 0);
  if (doc.contains("fiber_point")) {
    const auto& fp = sized_array(doc["fiber_point"], r, "fiber_point");
    for (int a = 0; a < r; ++a) v(a) = complex_from(fp[a], "fiber_point");
  }

  const bool derivs = doc.contains("d3") || doc.contains("d3_mixed") || doc.contains("d4");
  if (!derivs) return projbundle::adapt(base, *rh, lambda, v);

  for (int a = 0; a < r; ++a) {
    if (std::abs(v(a) - (a == 0 ? Complex(1.0) : Complex(0.0))) > 0.0) {
      throw Error(ErrorCode::InvalidArgument, "derivative arrays require fiber_point = e_1");
    }
  }
  projbundle::ProjBundleInput in(lambda, std::move(base), std::move(*rh));
  if (doc.contains("d3")) {
    const auto& j = sized_array(doc["d3"], n, "d3");
    for (int i = 0; i < n; ++i) {
      const CMatrix m = matrix_from(j[i], n, n, "d3");
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) in.d3[(static_cast<std::size_t>(i) * n + a) * n + c] = m(a, c);
    }
  }
  if (doc.contains("d3_mixed")) {
    const auto& j = sized_array(doc["d3_mixed"], r - 1, "d3_mixed");
    for (int b = 0; b < r - 1; ++b) {
      sized_array(j[b], n, "d3_mixed");
      for (int i = 0; i < n; ++i) {
        const CMatrix m = matrix_from(j[b][i], n, n, "d3_mixed");
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c)
            in.d3_mixed[((static_cast<std::size_t>(b) * n + i) * n + a) * n + c] = m(a, c);
      }
    }
  }
  if (doc.contains("d4")) in.d4 = KahlerTensor::validated(buffer_from(doc["d4"], n, "d4"));
  in.check();
  return in;
}

Json complex_json(Complex c) { return Json::array({clean(c.real()), clean(c.imag())}); }

Json vector_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json matrix_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    out.push_back(std::move(row));
  }
  return out;
}

Json report_json(const PositivityReport& rep) {
  Json out;
  out["quantity"] = std::string(to_string(rep.quantity));
  out["value"] = clean(rep.value);
  if (const auto* x = std::get_if<CVector>(&rep.witness)) {
    out["witness"] = vector_json(*x);
  } else {
    const auto& fw = std::get<FrameAndWeights>(rep.witness);
    Json w;
    w["frame"] = matrix_json(fw.frame);
    Json weights = Json::array();
    for (Eigen::Index i = 0; i < fw.weights.size(); ++i) weights.push_back(clean(fw.weights(i)));
    w["weights"] = std::move(weights);
    out["witness"] = std::move(w);
  }
  out["verdict"] = std::string(to_string(rep.verdict));
  out["margin"] = clean(rep.margin);
  Json m;
  m["seed"] = rep.method.seed;
  m["restarts"] = rep.method.restarts;
  m["converged"] = rep.method.converged;
  m["converged_restarts"] = rep.method.converged_restarts;
  m["algorithm"] = rep.method.algorithm;
  if (rep.method.heuristic) m["heuristic"] = true;
  if (rep.method.grid_value) {
    m["grid_value"] = clean(*rep.method.grid_value);
    m["grid_agrees"] = *rep.method.grid_agrees;
  }
  if (rep.method.nu_bound) m["nu_bound"] = clean(*rep.method.nu_bound);
  out["method"] = std::move(m);
  return out;
}

Json flat_json(const FlatReport& rep) {
  Json out;
  out["quantity"] = "ric_perp_flat";
  out["verdict"] = std::string(to_string(rep.verdict));
  out["max_abs_ric_perp"] = clean(rep.max_abs_ric_perp);
  out["scalar_curvature"] = clean(rep.scalar_curvature);
  out["identity_residual"] = clean(rep.identity_residual);
  out["max_abs_curvature"] = clean(rep.max_abs_curvature);
  out["samples"] = rep.samples;
  out["tol"] = rep.tol;
  return out;
}

Json einstein_json(const EinsteinResult& res) {
  Json out;
  out["einstein"] = res.einstein;
  out["mu"] = clean(res.mu);
  out["residual"] = clean(res.residual);
  return out;
}

namespace {

Json constant_json(const std::optional<cspace::StatedConstant>& c) {
  if (!c) return nullptr;
  Json out;
  if (c->value.den == 1) {
    out["value"] = c->value.num;
  } else {
    out["value"] = std::to_string(c->value.num) + "/" + std::to_string(c->value.den);
  }
  out["upper_bound"] = c->is_upper_bound;
  out["note"] = c->source;
  return out;
}

}  // namespace

Json record_json(const cspace::ClassificationRecord& rec) {
  Json out;
  out["family"] = std::string(cspace::to_string(rec.descriptor.family));
  out["rank"] = rec.descriptor.rank;
  out["node"] = rec.descriptor.node;
  out["label"] = rec.descriptor.label();
  out["dimension"] = rec.dimension;
  out["mu"] = constant_json(rec.mu);
  out["nu"] = constant_json(rec.nu);
  out["qb"] = rec.qb ? Json(std::string(cspace::to_string(*rec.qb))) : Json(nullptr);
  Json rp;
  rp["verdict"] = std::string(cspace::to_string(rec.ricperp.verdict));
  rp["reason"] = rec.ricperp.reason;
  out["ric_perp"] = std::move(rp);
  out["identification"] = rec.identification.empty() ? Json(nullptr) : Json(rec.identification);
  return out;
}

Json margin_json(const projbundle::MarginReport& rep) {
  Json out;
  out["quantity"] = "condition_margin";
  out["value"] = clean(rep.value);
  out["verdict"] = std::string(to_string(verdict_for(rep.value)));
  out["margin"] = clean(rep.value);
  Json w;
  w["fiber"] = vector_json(rep.fiber);
  w["direction"] = vector_json(rep.direction);
  out["witness"] = std::move(w);
  Json m;
  m["restarts"] = rep.restarts;
  m["converged"] = rep.converged;
  m["algorithm"] = "alternating_fiber_eigen_base_gradient";
  out["method"] = std::move(m);
  return out;
}

Json lambda_search_json(const projbundle::LambdaSearchReport& rep) {
  Json out;
  out["quantity"] = "lambda_search";
  Json pts = Json::array();
  for (const auto& p : rep.points) {
    Json j;
    j["lambda"] = clean(p.lambda);
    j["min_ric_perp"] = clean(p.min_ric_perp);
    j["verdict"] = std::string(to_string(p.verdict));
    j["fiber_index"] = p.fiber_index;
    j["witness"] = vector_json(p.witness);
    j["vertical_margin"] = p.vertical_margin ? Json(clean(*p.vertical_margin)) : Json(nullptr);
    j["converged"] = p.converged;
    pts.push_back(std::move(j));
  }
  out["points"] = std::move(pts);
  out["first_positive_lambda"] = rep.first_positive ? Json(*rep.first_positive) : Json(nullptr);
  out["stays_positive"] = rep.stays_positive;
  out["scope"] = "certified at one point of the total space; global claims rest on homogeneity";
  return out;
}

Json ricci_split_json(const projbundle::RicciSplit& rs) {
  Json out;
  out["yy"] = matrix_json(rs.yy);
  out["ys"] = matrix_json(rs.ys);
  out["ss"] = matrix_json(rs.ss);
  return out;
}

Json phi_json(const projbundle::PhiBreakdown& phi) {
  Json out;
  out["phi"] = clean(phi.total);
  out["phi0"] = clean(phi.phi0);
  out["phi1"] = complex_json(phi.phi1);
  out["phi2"] = clean(phi.phi2);
  out["phi3"] = complex_json(phi.phi3);
  out["phi4"] = clean(phi.phi4);
  out["direct"] = clean(phi.direct);
  out["ric_perp"] = clean(phi.ric_perp());
  return out;
}

}  // namespace ricperp::io
