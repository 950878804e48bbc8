#include "addhaz/fit_io.hpp"

#include <fstream>

#include <json.hpp>

#include "addhaz/errors.hpp"

namespace addhaz {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "addhaz-fit/1";

json vectors_to_json(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const Vector& v : vs) {
    json row = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Vector> vectors_from_json(const json& j) {
  std::vector<Vector> out;
  out.reserve(j.size());
  for (const auto& row : j) {
    Vector v(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) v(static_cast<Eigen::Index>(i)) = row[i];
    out.push_back(std::move(v));
  }
  return out;
}

Method method_from_label(const std::string& label) {
  if (label == "ols") return Method::ols;
  if (label == "mle") return Method::mle;
  if (label == "mle-cone") return Method::mle_cone;
  throw ParseError("unknown fit method '" + label + "'");
}

}  // namespace

void save_fit(const FitResult& f, const std::string& path) {
  json doc;
  doc["schema"] = kSchema;
  doc["method"] = method_label(f.coefficients.method);
  doc["covariates"] = f.covariate_names;
  if (f.scale_info) {
    json mins = json::array();
    json maxs = json::array();
    for (const auto& s : *f.scale_info) {
      mins.push_back(s.min);
      maxs.push_back(s.max);
    }
    doc["scale_min"] = std::move(mins);
    doc["scale_max"] = std::move(maxs);
  } else {
    doc["scale_min"] = nullptr;
    doc["scale_max"] = nullptr;
  }
  doc["event_times"] = f.coefficients.event_times;
  doc["jumps"] = vectors_to_json(f.coefficients.jumps);
  doc["cumulative"] = vectors_to_json(f.coefficients.cumulative());
  {
    json rd = json::array();
    json mult = json::array();
    for (const auto& diag : f.diagnostics) {
      rd.push_back(diag.rank_deficient);
      mult.push_back(diag.multiplicity);
    }
    doc["rank_deficient"] = std::move(rd);
    doc["multiplicity"] = std::move(mult);
  }
  if (f.total_loglik) {
    doc["per_time_loglik"] = f.per_time_loglik;
    doc["total_loglik"] = *f.total_loglik;
  } else {
    doc["per_time_loglik"] = nullptr;
    doc["total_loglik"] = nullptr;
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed while writing '" + path + "'");
}

FitResult load_fit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is not a valid fit file: " + e.what());
  }
  try {
    if (doc.at("schema").get<std::string>() != kSchema)
      throw ParseError("'" + path + "' has unsupported schema '" +
                       doc.at("schema").get<std::string>() + "'");
    FitResult f;
    f.coefficients.method = method_from_label(doc.at("method").get<std::string>());
    f.covariate_names = doc.at("covariates").get<std::vector<std::string>>();
    if (!doc.at("scale_min").is_null()) {
      const auto mins = doc.at("scale_min").get<std::vector<double>>();
      const auto maxs = doc.at("scale_max").get<std::vector<double>>();
      std::vector<ColumnScale> scale(mins.size());
      for (std::size_t j = 0; j < mins.size(); ++j) scale[j] = {mins[j], maxs[j]};
      f.scale_info = std::move(scale);
    }
    f.coefficients.event_times = doc.at("event_times").get<std::vector<double>>();
    f.coefficients.jumps = vectors_from_json(doc.at("jumps"));
    const auto rd = doc.at("rank_deficient").get<std::vector<bool>>();
    const auto mult = doc.at("multiplicity").get<std::vector<int>>();
    f.diagnostics.resize(rd.size());
    for (std::size_t k = 0; k < rd.size(); ++k) f.diagnostics[k] = {rd[k], mult[k]};
    if (!doc.at("total_loglik").is_null()) {
      f.per_time_loglik = doc.at("per_time_loglik").get<std::vector<double>>();
      f.total_loglik = doc.at("total_loglik").get<double>();
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is missing fit fields: " + e.what());
  }
}

}  // namespace addhaz
