#include "jspec/tuple_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace jspec {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string serialize_tuple(const TupleFile& file) {
  const MatrixTuple& t = file.tuple;
  std::string out;
  out += "{\n  \"schema_version\": \"";
  out += kTupleSchemaVersion;
  out += "\",\n  \"n\": " + std::to_string(t.n());
  out += ",\n  \"m\": " + std::to_string(t.m());
  out += ",\n  \"matrices\": [";
  for (std::size_t k = 0; k < t.m(); ++k) {
    out += k == 0 ? "\n    [" : ",\n    [";
    for (Eigen::Index i = 0; i < t.n(); ++i) {
      out += i == 0 ? "\n      [" : ",\n      [";
      for (Eigen::Index j = 0; j < t.n(); ++j) {
        if (j > 0) out += ", ";
        out += "[" + format_double(t[k](i, j).real()) + ", " + format_double(t[k](i, j).imag()) + "]";
      }
      out += "]";
    }
    out += "\n    ]";
  }
  out += "\n  ],\n  \"metadata\": ";
  out += file.metadata.is_null() ? "{}" : file.metadata.dump();
  out += "\n}\n";
  return out;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::Parse, "tuple file: " + what);
}

double number_at(const json& v, const char* what) {
  if (!v.is_number()) parse_fail(std::string(what) + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) parse_fail(std::string(what) + " is not finite");
  return x;
}

}  // namespace

TupleFile parse_tuple(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be an object");
  if (!doc.contains("schema_version") || doc["schema_version"] != kTupleSchemaVersion) {
    parse_fail("schema_version must be \"" + std::string(kTupleSchemaVersion) + "\"");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    parse_fail("n must be a positive integer");
  }
  if (!doc.contains("m") || !doc["m"].is_number_integer() || doc["m"].get<long long>() < 1) {
    parse_fail("m must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
  const auto m = static_cast<std::size_t>(doc["m"].get<long long>());
  const json& mats = doc.contains("matrices") ? doc["matrices"] : json();
  if (!mats.is_array() || mats.size() != m) parse_fail("matrices must be an array of m matrices");

  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < m; ++k) {
    const json& rows = mats[k];
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
      parse_fail("matrix " + std::to_string(k + 1) + " must have n rows");
    }
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = rows[i];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
        parse_fail("matrix " + std::to_string(k + 1) + " row " + std::to_string(i + 1) +
                   " must have n entries");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const json& e = row[j];
        if (!e.is_array() || e.size() != 2) parse_fail("entries must be [re, im] pairs");
        a(i, j) = Complex(number_at(e[0], "re"), number_at(e[1], "im"));
      }
    }
    out.push_back(std::move(a));
  }
  TupleFile file{MatrixTuple(std::move(out)), json::object()};
  if (doc.contains("metadata")) file.metadata = doc["metadata"];
  return file;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

void write_tuple_file(const std::filesystem::path& path, const TupleFile& file) {
  write_text_file(path, serialize_tuple(file));
}

TupleFile read_tuple_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_tuple(ss.str());
}

json complex_rows_to_json(const ComplexMatrix& rows) {
  json out = json::array();
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    json row = json::array();
    for (Eigen::Index k = 0; k < rows.cols(); ++k) {
      row.push_back({rows(j, k).real(), rows(j, k).imag()});
    }
    out.push_back(std::move(row));
  }
  return out;
}

json hypotheses_to_json(const HypothesisReport& r) {
  return {
      {"commuting", r.commuting},
      {"max_commutator_norm", r.max_commutator_norm},
      {"commutation_threshold", r.commutation_threshold},
      {"require_normal", r.require_normal},
      {"normal", r.normal},
      {"max_relative_normality_defect", r.max_relative_normality_defect},
      {"require_nonsingular", r.require_nonsingular},
      {"nonsingular", r.nonsingular},
      {"min_singular_value", r.min_singular_value},
      {"min_relative_singular_value", r.min_relative_singular_value},
      {"ok", r.ok()},
  };
}

json tolerances_to_json(const Tolerances& t) {
  return {
      {"commutation", t.commutation},
      {"normality", t.normality},
      {"diagonalization", t.diagonalization},
      {"cluster", t.cluster},
      {"singularity", t.singularity},
      {"max_eigenvector_condition", t.max_eigenvector_condition},
      {"max_retries", t.max_retries},
  };
}

namespace {

json one_based(const Permutation& perm) {
  json out = json::array();
  for (int p : perm) out.push_back(p + 1);
  return out;
}

json real_rows(const RealMatrix& w) {
  json out = json::array();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < w.cols(); ++j) row.push_back(w(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

json birkhoff_to_json(const BirkhoffDecomposition& d, const OverlapMatrix& w) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    terms.push_back({{"weight", t.weight}, {"permutation", one_based(t.permutation)}});
  }
  const double err = (d.reconstruct(w.n()) - w.w).cwiseAbs().maxCoeff();
  return {
      {"overlap", real_rows(w.w)},
      {"stochastic_defect", w.stochastic_defect()},
      {"terms", std::move(terms)},
      {"total_weight", d.total_weight()},
      {"reconstruction_error", err},
  };
}

json report_to_json(const BoundReport& r) {
  json out = {
      {"bound_kind", std::string(to_string(r.kind))},
      {"permutation", one_based(r.permutation)},
      {"lhs", r.lhs},
      {"rhs", r.rhs},
      {"slack", r.slack},
      {"holds", r.holds},
      {"tolerance", r.tolerance},
      {"verification_tolerance", r.verification_tolerance},
      {"sqrt_lhs", r.sqrt_lhs()},
      {"sqrt_rhs", r.sqrt_rhs()},
      {"relative_perturbation", r.relative_perturbation},
      {"kappa_p", r.kappa_p},
      {"kappa_q", r.kappa_q},
      {"hypotheses", {{"a", hypotheses_to_json(r.hypotheses_a)},
                      {"b", hypotheses_to_json(r.hypotheses_b)}}},
      {"tolerances", tolerances_to_json(r.tolerances_used)},
      {"seed", r.seed},
      {"alpha", complex_rows_to_json(r.alpha)},
      {"beta", complex_rows_to_json(r.beta)},
      {"residual_a", r.residual_a},
      {"residual_b", r.residual_b},
  };
  if (r.overlap && r.birkhoff) {
    out["birkhoff"] = birkhoff_to_json(*r.birkhoff, *r.overlap);
  } else {
    out["birkhoff"] = nullptr;
  }
  return out;
}

}  // namespace jspec
