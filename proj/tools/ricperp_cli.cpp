#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ricperp/ricperp.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotPositive = 2;

struct Failure {
  std::string message;
};

void check(rp_status s, const std::string& what) {
  if (s != RP_OK) throw Failure{what + ": " + rp_status_name(s) + ": " + rp_last_error()};
}

struct TensorDeleter {
  void operator()(rp_tensor* t) const { rp_tensor_free(t); }
};
using Tensor = std::unique_ptr<rp_tensor, TensorDeleter>;

std::string take(char* s) {
  std::string out(s ? s : "");
  rp_string_free(s);
  return out;
}

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void flatten(const Json& obj, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object() && key != "witness") {
      flatten(*it, key, out);
    } else {
      out.emplace_back(key, cell(*it));
    }
  }
}

std::string markdown(const Json& doc) {
  std::string md;
  if (doc.is_array()) {
    if (doc.empty()) return "(empty)\n";
    std::vector<std::map<std::string, std::string>> rows;
    std::vector<std::string> columns;
    for (const auto& row : doc) {
      std::vector<std::pair<std::string, std::string>> cells;
      flatten(row, "", cells);
      std::map<std::string, std::string> m;
      for (auto& [k, v] : cells) {
        if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
        m[k] = v;
      }
      rows.push_back(std::move(m));
    }
    std::erase_if(columns, [&](const std::string& c) {
      return std::all_of(rows.begin(), rows.end(), [&](const auto& r) { return !r.contains(c) || r.at(c) == "-"; });
    });
    md += "|";
    for (const auto& c : columns) md += " " + c + " |";
    md += "\n|";
    for (std::size_t i = 0; i < columns.size(); ++i) md += "---|";
    md += "\n";
    for (const auto& r : rows) {
      md += "|";
      for (const auto& c : columns) md += " " + (r.contains(c) ? r.at(c) : std::string("-")) + " |";
      md += "\n";
    }
    return md;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(doc, "", rows);
  md += "| field | value |\n|---|---|\n";
  for (const auto& [k, v] : rows) md += "| " + k + " | " + v + " |\n";
  return md;
}

void write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{"cannot write '" + path + "'"};
    out << text;
    if (!out) {
      std::remove(tmp.c_str());
      throw Failure{"write to '" + path + "' failed"};
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Failure{"cannot write '" + path + "'"};
  }
}

struct Output {
  std::string format = "json";
  std::string path;

  void emit(const std::string& json_text) const {
    std::string text = json_text;
    if (format == "md") text = markdown(Json::parse(json_text));
    if (path.empty()) {
      std::cout << text;
    } else {
      write_text(path, text);
    }
  }
};

void add_output_flags(CLI::App* cmd, Output& out) {
  cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "md"}))->capture_default_str();
  cmd->add_option("--report", out.path, "Write the report to a file instead of stdout");
}

struct CertifyFlags {
  int restarts = 64;
  int max_iters = 500;
  std::uint64_t seed = 0;
  bool oracle = false;
  int threads = 0;

  rp_certify_options options() const {
    rp_certify_options o;
    rp_certify_options_default(&o);
    o.restarts = restarts;
    o.max_iters = max_iters;
    o.seed = seed;
    o.grid_oracle = oracle ? 1 : 0;
    o.threads = threads;
    return o;
  }
};

void add_certify_flags(CLI::App* cmd, CertifyFlags& f) {
  cmd->add_option("--restarts", f.restarts, "Random restarts")->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters, "Iterations per restart")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Base seed")->capture_default_str();
  cmd->add_flag("--oracle", f.oracle, "Cross-check with a dense grid (n <= 3)");
  cmd->add_option("--threads", f.threads, "Worker threads (0: RICPERP_THREADS or all cores)")->capture_default_str();
}

int exit_for_verdict(rp_verdict v) { return v == RP_VERDICT_POSITIVE ? kExitOk : kExitNotPositive; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal Ricci curvature toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  // model
  auto* model = app.add_subcommand("model", "Model-space tensors");
  model->require_subcommand(1);
  auto* emit = model->add_subcommand("emit", "Write a model tensor file");
  std::string model_name;
  int mn = 2, mp = 2, mq = 2, mr = 2;
  double k1 = 1.0, k2 = 1.0;
  std::string model_out;
  emit->add_option("name", model_name, "fubini-study | grassmannian-dual | symmetric-dual | curve-product")
      ->required()
      ->check(CLI::IsMember({"fubini-study", "grassmannian-dual", "symmetric-dual", "curve-product"}));
  emit->add_option("-n", mn, "Dimension (fubini-study)")->capture_default_str();
  emit->add_option("-p", mp, "Rows (grassmannian-dual)")->capture_default_str();
  emit->add_option("-q", mq, "Columns (grassmannian-dual)")->capture_default_str();
  emit->add_option("-r", mr, "Matrix size (symmetric-dual)")->capture_default_str();
  emit->add_option("--k1", k1, "First curve curvature (curve-product)")->capture_default_str();
  emit->add_option("--k2", k2, "Second curve curvature (curve-product)")->capture_default_str();
  emit->add_option("-o,--output", model_out, "Output tensor file (stdout if omitted)");
  emit->callback([&] {
    action = [&]() -> int {
      rp_tensor* raw = nullptr;
      if (model_name == "fubini-study") check(rp_model_fubini_study(mn, &raw), "model");
      if (model_name == "grassmannian-dual") check(rp_model_grassmannian_dual(mp, mq, &raw), "model");
      if (model_name == "symmetric-dual") check(rp_model_symmetric_dual(mr, &raw), "model");
      if (model_name == "curve-product") check(rp_model_curve_product(k1, k2, &raw), "model");
      Tensor t(raw);
      if (model_out.empty()) {
        char* s = nullptr;
        check(rp_tensor_to_json(t.get(), &s), "serialize");
        std::cout << take(s);
      } else {
        check(rp_tensor_save(t.get(), model_out.c_str()), "save");
      }
      return kExitOk;
    };
  });

  // cspace
  auto* cs = app.add_subcommand("cspace", "Homogeneous Kahler space catalog");
  cs->require_subcommand(1);
  auto* classify = cs->add_subcommand("classify", "Classify one (family, rank, node)");
  std::string family;
  int rank = 0, node = 0;
  Output cls_out;
  classify->add_option("--family", family, "A B C D E6 E7 E8 F4 G2")->required();
  classify->add_option("--rank", rank, "Rank")->required();
  classify->add_option("--node", node, "Simple root index, 1-based")->required();
  add_output_flags(classify, cls_out);
  classify->callback([&] {
    action = [&]() -> int {
      char* s = nullptr;
      check(rp_cspace_classify(family.c_str(), rank, node, &s), "classify");
      const std::string text = take(s);
      cls_out.emit(text);
      const Json rec = Json::parse(text);
      return rec["ric_perp"]["verdict"] == "positive" ? kExitOk : kExitNotPositive;
    };
  });
  auto* table = cs->add_subcommand("table", "Classify every node up to a rank");
  std::string families = "B,C,D";
  int max_rank = 10;
  Output tab_out;
  table->add_option("--families", families, "Comma-separated families")->capture_default_str();
  table->add_option("--max-rank", max_rank, "Largest rank")->capture_default_str();
  add_output_flags(table, tab_out);
  table->callback([&] {
    action = [&]() -> int {
      char* s = nullptr;
      check(rp_cspace_table(families.c_str(), max_rank, &s), "table");
      tab_out.emit(take(s));
      return kExitOk;
    };
  });

  // certify
  auto* cert = app.add_subcommand("certify", "Certify curvature positivity of a tensor file");
  cert->require_subcommand(1);
  std::string tensor_path;
  CertifyFlags cflags;
  Output cert_out;
  const auto certify_cmd = [&](const char* name, const char* help, rp_quantity q) {
    auto* c = cert->add_subcommand(name, help);
    c->add_option("tensor", tensor_path, "Tensor file")->required();
    add_certify_flags(c, cflags);
    add_output_flags(c, cert_out);
    c->callback([&, q] {
      action = [&, q]() -> int {
        rp_tensor* raw = nullptr;
        check(rp_tensor_load(tensor_path.c_str(), &raw), "load");
        Tensor t(raw);
        const rp_certify_options o = cflags.options();
        char* s = nullptr;
        rp_verdict v = RP_VERDICT_FAILS;
        check(rp_certify(t.get(), q, &o, &s, nullptr, &v), "certify");
        cert_out.emit(take(s));
        return exit_for_verdict(v);
      };
    });
  };
  certify_cmd("ric-perp", "Minimum orthogonal Ricci curvature", RP_QUANTITY_RIC_PERP_MIN);
  certify_cmd("h-max", "Maximum holomorphic sectional curvature", RP_QUANTITY_H_MAX);
  certify_cmd("qb", "Minimum quadratic bisectional curvature (heuristic)", RP_QUANTITY_QB_MIN);
  certify_cmd("nu", "Largest eigenvalue of the curvature operator on S^2T", RP_QUANTITY_NU);
  auto* flat = cert->add_subcommand("flat", "Classify tensors with vanishing orthogonal Ricci curvature");
  double flat_tol = 1e-9;
  flat->add_option("tensor", tensor_path, "Tensor file")->required();
  flat->add_option("--tol", flat_tol, "Flatness tolerance")->capture_default_str();
  flat->add_option("--seed", cflags.seed, "Sampling seed")->capture_default_str();
  add_output_flags(flat, cert_out);
  flat->callback([&] {
    action = [&]() -> int {
      rp_tensor* raw = nullptr;
      check(rp_tensor_load(tensor_path.c_str(), &raw), "load");
      Tensor t(raw);
      char* s = nullptr;
      check(rp_flat_classify(t.get(), flat_tol, cflags.seed, &s), "flat");
      cert_out.emit(take(s));
      return kExitOk;
    };
  });

  // projbundle
  auto* pb = app.add_subcommand("projbundle", "Projectivized split bundles over P^n");
  pb->require_subcommand(1);
  int base_dim = 3;
  std::vector<int> degrees;
  double lambda = 0.0;
  std::vector<double> grid{5, 10, 20, 50, 100};
  CertifyFlags pflags;
  pflags.restarts = 16;
  Output pb_out;
  auto* pcheck = pb->add_subcommand("check", "Evaluate the curvature condition on base and bundle");
  pcheck->add_option("--base-dim", base_dim, "n for the base P^n")->capture_default_str();
  pcheck->add_option("--degrees", degrees, "Splitting degrees")->delimiter(',')->required();
  pcheck->add_option("--lambda", lambda, "Also certify the total space at this scale");
  add_certify_flags(pcheck, pflags);
  add_output_flags(pcheck, pb_out);
  pcheck->callback([&] {
    action = [&]() -> int {
      const rp_certify_options o = pflags.options();
      char* s = nullptr;
      rp_verdict v = RP_VERDICT_FAILS;
      check(rp_projbundle_check(base_dim, degrees.data(), static_cast<int>(degrees.size()), lambda, &o, &s, &v),
            "check");
      pb_out.emit(take(s));
      return exit_for_verdict(v);
    };
  });
  auto* search = pb->add_subcommand("lambda-search", "Certify the total space over a grid of scales");
  search->add_option("--base-dim", base_dim, "n for the base P^n")->capture_default_str();
  search->add_option("--degrees", degrees, "Splitting degrees")->delimiter(',')->required();
  search->add_option("--grid", grid, "Scales to test")->delimiter(',')->capture_default_str();
  add_certify_flags(search, pflags);
  add_output_flags(search, pb_out);
  search->callback([&] {
    action = [&]() -> int {
      const rp_certify_options o = pflags.options();
      char* s = nullptr;
      check(rp_projbundle_lambda_search(base_dim, degrees.data(), static_cast<int>(degrees.size()), grid.data(),
                                        static_cast<int>(grid.size()), &o, &s),
            "lambda-search");
      const std::string text = take(s);
      pb_out.emit(text);
      return Json::parse(text)["first_positive_lambda"].is_null() ? kExitNotPositive : kExitOk;
    };
  });
  auto* curv = pb->add_subcommand("curvature", "Curvature tensor of the total space at a point");
  std::string input_path, curv_out;
  curv->add_option("--input", input_path, "Bundle input document")->required();
  curv->add_option("-o,--output", curv_out, "Output tensor file (stdout if omitted)");
  curv->callback([&] {
    action = [&]() -> int {
      std::ifstream in(input_path, std::ios::binary);
      if (!in) throw Failure{"cannot open '" + input_path + "'"};
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      rp_tensor* raw = nullptr;
      check(rp_projbundle_curvature(text.c_str(), &raw), "curvature");
      Tensor t(raw);
      if (curv_out.empty()) {
        char* s = nullptr;
        check(rp_tensor_to_json(t.get(), &s), "serialize");
        std::cout << take(s);
      } else {
        check(rp_tensor_save(t.get(), curv_out.c_str()), "save");
      }
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  try {
    return action ? action() : kExitError;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
