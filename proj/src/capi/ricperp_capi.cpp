#include "ricperp/ricperp.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <new>
#include <sstream>
#include <string>

#include "ricperp/certifier.hpp"
#include "ricperp/cspace.hpp"
#include "ricperp/error.hpp"
#include "ricperp/io.hpp"
#include "ricperp/models.hpp"
#include "ricperp/projbundle.hpp"

struct rp_tensor {
  ricperp::CurvaturePoint cp;
};

namespace {

using namespace ricperp;

thread_local std::string last_error;

rp_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return RP_ERR_INVALID_ARGUMENT;
    case ErrorCode::SymmetryViolation: return RP_ERR_SYMMETRY_VIOLATION;
    case ErrorCode::NonFinite: return RP_ERR_NON_FINITE;
    case ErrorCode::DimensionMismatch: return RP_ERR_DIMENSION_MISMATCH;
    case ErrorCode::SingularMetric: return RP_ERR_SINGULAR_METRIC;
    case ErrorCode::ZeroVector: return RP_ERR_ZERO_VECTOR;
    case ErrorCode::NonUnitaryFrame: return RP_ERR_NON_UNITARY_FRAME;
    case ErrorCode::UnsupportedFamilyRank: return RP_ERR_UNSUPPORTED_FAMILY_RANK;
    case ErrorCode::OutOfTheoremRange: return RP_ERR_OUT_OF_THEOREM_RANGE;
    case ErrorCode::LambdaTooSmall: return RP_ERR_LAMBDA_TOO_SMALL;
    case ErrorCode::EmptyGrid: return RP_ERR_EMPTY_GRID;
    case ErrorCode::IndexOutOfRange: return RP_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::Parse: return RP_ERR_PARSE;
    case ErrorCode::Io: return RP_ERR_IO;
  }
  return RP_ERR_INTERNAL;
}

rp_status guarded(const std::function<void()>& body) {
  try {
    body();
    last_error.clear();
    return RP_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return RP_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const io::Json& j) {
  if (out) *out = dup_string(j.dump(2) + "\n");
}

rp_tensor* wrap(CurvaturePoint cp) { return new rp_tensor{std::move(cp)}; }

CertifyOptions to_options(const rp_certify_options* o) {
  CertifyOptions c;
  if (o) {
    c.restarts = o->restarts;
    c.max_iters = o->max_iters;
    c.step_tol = o->step_tol;
    c.seed = o->seed;
    c.grid_oracle = o->grid_oracle != 0;
    c.threads = o->threads;
  }
  c.check();
  return c;
}

rp_verdict to_c(Verdict v) {
  switch (v) {
    case Verdict::Positive: return RP_VERDICT_POSITIVE;
    case Verdict::NonnegativeBoundary: return RP_VERDICT_NONNEGATIVE_BOUNDARY;
    case Verdict::Fails: return RP_VERDICT_FAILS;
  }
  return RP_VERDICT_FAILS;
}

CVector read_vector(int n, const double* re_im) {
  require(re_im != nullptr, "vector pointer is null");
  CVector x(n);
  for (int i = 0; i < n; ++i) x(i) = Complex(re_im[2 * i], re_im[2 * i + 1]);
  return x;
}

SplitBundleModel split_model(int base_dim, const int* degrees, int r) {
  require(r >= 1 && degrees != nullptr, "degrees must be a nonempty array");
  SplitBundleModel m{base_dim, std::vector<int>(degrees, degrees + r)};
  std::sort(m.degrees.begin(), m.degrees.end(), std::greater<int>());
  m.check();
  return m;
}

io::Json model_json(const SplitBundleModel& m) {
  io::Json j;
  j["base_dim"] = m.base_dim;
  j["degrees"] = m.degrees;
  return j;
}

}  // namespace

extern "C" {

const char* rp_last_error(void) { return last_error.c_str(); }

const char* rp_status_name(rp_status status) {
  switch (status) {
    case RP_OK: return "ok";
    case RP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RP_ERR_SYMMETRY_VIOLATION: return "symmetry_violation";
    case RP_ERR_NON_FINITE: return "non_finite";
    case RP_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case RP_ERR_SINGULAR_METRIC: return "singular_metric";
    case RP_ERR_ZERO_VECTOR: return "zero_vector";
    case RP_ERR_NON_UNITARY_FRAME: return "non_unitary_frame";
    case RP_ERR_UNSUPPORTED_FAMILY_RANK: return "unsupported_family_rank";
    case RP_ERR_OUT_OF_THEOREM_RANGE: return "out_of_theorem_range";
    case RP_ERR_LAMBDA_TOO_SMALL: return "lambda_too_small";
    case RP_ERR_EMPTY_GRID: return "empty_grid";
    case RP_ERR_INDEX_OUT_OF_RANGE: return "index_out_of_range";
    case RP_ERR_PARSE: return "parse";
    case RP_ERR_IO: return "io";
    case RP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void rp_string_free(char* s) { std::free(s); }

void rp_certify_options_default(rp_certify_options* opts) {
  if (!opts) return;
  const CertifyOptions d;
  opts->restarts = d.restarts;
  opts->max_iters = d.max_iters;
  opts->step_tol = d.step_tol;
  opts->seed = d.seed;
  opts->grid_oracle = d.grid_oracle ? 1 : 0;
  opts->threads = d.threads;
}

rp_status rp_tensor_from_components(int n, const double* r_re_im, const double* metric_re_im, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr && r_re_im != nullptr, "null pointer argument");
    require(n >= 1, "n must be >= 1");
    TensorBuffer buf(n);
    auto data = buf.data();
    for (std::size_t t = 0; t < data.size(); ++t) data[t] = Complex(r_re_im[2 * t], r_re_im[2 * t + 1]);
    HermitianForm g = HermitianForm::identity(n);
    if (metric_re_im) {
      CMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const std::size_t t = static_cast<std::size_t>(i) * n + j;
          m(i, j) = Complex(metric_re_im[2 * t], metric_re_im[2 * t + 1]);
        }
      g = HermitianForm::from_matrix(m, kValidationTol);
      orthonormal_frame(g);
    }
    *out = wrap({KahlerTensor::validated(std::move(buf)), std::move(g)});
  });
}

rp_status rp_tensor_from_json(const char* text, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr && text != nullptr, "null pointer argument");
    *out = wrap(io::tensor_from_json(text));
  });
}

rp_status rp_tensor_load(const char* path, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null pointer argument");
    *out = wrap(io::load_tensor(path));
  });
}

rp_status rp_tensor_save(const rp_tensor* t, const char* path) {
  return guarded([&] {
    require(t != nullptr && path != nullptr, "null pointer argument");
    io::save_tensor(path, t->cp);
  });
}

rp_status rp_tensor_to_json(const rp_tensor* t, char** out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null pointer argument");
    *out = dup_string(io::tensor_to_json(t->cp.R, t->cp.g));
  });
}

int rp_tensor_dim(const rp_tensor* t) { return t ? t->cp.R.dim() : 0; }

void rp_tensor_free(rp_tensor* t) { delete t; }

rp_status rp_model_fubini_study(int n, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    *out = wrap(fubini_study(n));
  });
}

rp_status rp_model_grassmannian_dual(int p, int q, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    *out = wrap(type_I_dual(p, q));
  });
}

rp_status rp_model_symmetric_dual(int r, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    *out = wrap(type_III_dual(r));
  });
}

rp_status rp_model_curve_product(double k1, double k2, rp_tensor** out) {
  return guarded([&] {
    require(out != nullptr, "null pointer argument");
    *out = wrap(curve_product(k1, k2));
  });
}

rp_status rp_model_product(const rp_tensor* a, const rp_tensor* b, rp_tensor** out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null pointer argument");
    auto [R, g] = product_tensor(a->cp.R, a->cp.g, b->cp.R, b->cp.g);
    *out = wrap({std::move(R), std::move(g)});
  });
}

rp_status rp_ric_perp(const rp_tensor* t, const double* x_re_im, double* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null pointer argument");
    *out = ric_perp(t->cp.R, t->cp.g, read_vector(t->cp.R.dim(), x_re_im));
  });
}

rp_status rp_holo_sect(const rp_tensor* t, const double* x_re_im, double* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null pointer argument");
    *out = holo_sect(t->cp.R, t->cp.g, read_vector(t->cp.R.dim(), x_re_im));
  });
}

rp_status rp_nu_max(const rp_tensor* t, double* out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null pointer argument");
    *out = nu_max(t->cp.R, t->cp.g);
  });
}

rp_status rp_einstein_check(const rp_tensor* t, double tol, int* is_einstein, double* mu) {
  return guarded([&] {
    require(t != nullptr, "null pointer argument");
    const EinsteinResult e = einstein_check(t->cp.R, t->cp.g, tol);
    if (is_einstein) *is_einstein = e.einstein ? 1 : 0;
    if (mu) *mu = e.mu;
  });
}

rp_status rp_certify(const rp_tensor* t, rp_quantity q, const rp_certify_options* opts, char** report_json,
                     double* value, rp_verdict* verdict) {
  return guarded([&] {
    require(t != nullptr, "null pointer argument");
    const CertifyOptions o = to_options(opts);
    PositivityReport rep = [&] {
      switch (q) {
        case RP_QUANTITY_RIC_PERP_MIN: return min_ric_perp(t->cp.R, t->cp.g, o);
        case RP_QUANTITY_H_MAX: return max_holo_sect(t->cp.R, t->cp.g, o);
        case RP_QUANTITY_QB_MIN: return min_qb(to_orthonormal(t->cp.R, t->cp.g), o);
        case RP_QUANTITY_NU: return nu_report(t->cp.R, t->cp.g);
      }
      throw Error(ErrorCode::InvalidArgument, "unknown quantity");
    }();
    if (value) *value = rep.value;
    if (verdict) *verdict = to_c(rep.verdict);
    emit(report_json, io::report_json(rep));
  });
}

rp_status rp_flat_classify(const rp_tensor* t, double tol, uint64_t seed, char** report_json) {
  return guarded([&] {
    require(t != nullptr && report_json != nullptr, "null pointer argument");
    emit(report_json, io::flat_json(flat_ric_perp_classify(t->cp.R, t->cp.g, tol, seed)));
  });
}

rp_status rp_cspace_classify(const char* family, int rank, int node, char** record_json) {
  return guarded([&] {
    require(family != nullptr && record_json != nullptr, "null pointer argument");
    const cspace::CSpaceDescriptor d{cspace::parse_family(family), rank, node};
    emit(record_json, io::record_json(cspace::classify(d)));
  });
}

rp_status rp_cspace_table(const char* families_csv, int max_rank, char** table_json) {
  return guarded([&] {
    require(families_csv != nullptr && table_json != nullptr, "null pointer argument");
    std::vector<cspace::Family> fams;
    std::stringstream ss(families_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) fams.push_back(cspace::parse_family(item));
    }
    require(!fams.empty(), "no families given");
    io::Json rows = io::Json::array();
    for (const auto& rec : cspace::classify_range(fams, max_rank)) rows.push_back(io::record_json(rec));
    emit(table_json, rows);
  });
}

rp_status rp_projbundle_check(int base_dim, const int* degrees, int r, double lambda,
                              const rp_certify_options* opts, char** report_json, rp_verdict* verdict) {
  return guarded([&] {
    const SplitBundleModel m = split_model(base_dim, degrees, r);
    const CertifyOptions o = to_options(opts);
    const double closed = projbundle::split_condition_margin(m);
    const projbundle::MarginReport sampled =
        projbundle::condition_margin(fubini_study(m.base_dim).R, split_bundle_curvature(m), o);
    const Verdict v = verdict_for(closed);

    io::Json j;
    j["quantity"] = "condition_margin";
    j["model"] = model_json(m);
    j["value"] = closed;
    j["verdict"] = std::string(to_string(v));
    j["margin"] = closed;
    j["sampled"] = io::margin_json(sampled);
    io::Json c1 = io::Json::array();
    for (int i = 1; i <= m.rank(); ++i) c1.push_back(projbundle::section_normal_c1(m.rank(), m.degrees, i));
    j["section_normal_c1"] = std::move(c1);
    if (lambda > 0.0) {
      const auto ls = projbundle::lambda_search(m, {lambda}, o);
      j["at_lambda"] = io::lambda_search_json(ls)["points"][0];
    }
    io::Json method;
    method["seed"] = o.seed;
    method["restarts"] = o.restarts;
    method["converged"] = sampled.converged;
    j["method"] = std::move(method);
    if (verdict) *verdict = to_c(v);
    emit(report_json, j);
  });
}

rp_status rp_projbundle_lambda_search(int base_dim, const int* degrees, int r, const double* grid, int grid_len,
                                      const rp_certify_options* opts, char** report_json) {
  return guarded([&] {
    require(report_json != nullptr, "null pointer argument");
    require(grid_len >= 0 && (grid_len == 0 || grid != nullptr), "grid pointer is null");
    const SplitBundleModel m = split_model(base_dim, degrees, r);
    const CertifyOptions o = to_options(opts);
    const auto rep = projbundle::lambda_search(m, std::vector<double>(grid, grid + grid_len), o);
    io::Json j = io::lambda_search_json(rep);
    j["model"] = model_json(m);
    io::Json method;
    method["seed"] = o.seed;
    method["restarts"] = o.restarts;
    j["method"] = std::move(method);
    emit(report_json, j);
  });
}

rp_status rp_projbundle_curvature(const char* input_json, rp_tensor** out) {
  return guarded([&] {
    require(input_json != nullptr && out != nullptr, "null pointer argument");
    io::Json doc;
    try {
      doc = io::Json::parse(input_json);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
    *out = wrap(projbundle::g_curvature_at_origin(io::bundle_input_from_json(doc)));
  });
}

}  // extern "C"
