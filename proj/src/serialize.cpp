/*
 * Copyright 2026 The helmrff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "helmrff/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "helmrff/error.hpp"

namespace helmrff {

namespace {

std::vector<double> to_vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector vector_from(const json& arr) {
  const auto values = arr.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json rows_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_vec(m.row(i).transpose()));
  return out;
}

Matrix rows_from_json(const json& arr, Eigen::Index cols) {
  Matrix out(static_cast<Eigen::Index>(arr.size()), cols);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Vector row = vector_from(arr[i]);
    if (row.size() != cols) throw ParseError("ragged matrix row " + std::to_string(i), 0);
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

// Runs a reader, mapping nlohmann exceptions to ParseError.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what(), 0);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_meta(std::ostringstream& out, const json* meta) {
  if (meta) out << "# " << meta->dump() << '\n';
}

}  // namespace

json to_json(const FeatureBasis& basis) {
  return {{"kind", to_string(basis.kind())},
          {"d", basis.size()},
          {"n", basis.dim()},
          {"sigma", basis.width().value()},
          {"seed", basis.seed()},
          {"weights", rows_to_json(basis.weights())},
          {"phases", to_vec(basis.phases())}};
}

FeatureBasis basis_from_json(const json& doc) {
  return guarded("feature basis", [&] {
    const auto n = doc.at("n").get<Eigen::Index>();
    Matrix weights = rows_from_json(doc.at("weights"), n);
    if (static_cast<std::size_t>(weights.rows()) != doc.at("d").get<std::size_t>()) {
      throw ParseError("feature basis 'd' does not match its weight count", 0);
    }
    return FeatureBasis::from_parts(feature_kind_from_string(doc.at("kind").get<std::string>()),
                                    KernelWidth(doc.at("sigma").get<double>()), doc.at("seed").get<std::uint64_t>(),
                                    std::move(weights), vector_from(doc.at("phases")));
  });
}

json to_json(const Hyperparameters& hyper) {
  return {{"sigma", hyper.sigma.value()},
          {"lambda1", hyper.lambda1},
          {"lambda2", hyper.lambda2},
          {"d", hyper.features}};
}

Hyperparameters hyper_from_json(const json& doc) {
  return guarded("hyperparameters", [&] {
    Hyperparameters h;
    h.sigma = KernelWidth(doc.at("sigma").get<double>());
    h.lambda1 = doc.at("lambda1").get<double>();
    h.lambda2 = doc.at("lambda2").get<double>();
    h.features = doc.at("d").get<std::size_t>();
    h.validate();
    return h;
  });
}

json to_json(const SeedSet& seeds) {
  return {{"master", seeds.master},
          {"noise", seeds.noise},
          {"basis_curl_free", seeds.basis_curl_free},
          {"basis_symplectic", seeds.basis_symplectic},
          {"cv_shuffle", seeds.cv_shuffle},
          {"basis_baseline", seeds.basis_baseline}};
}

SeedSet seeds_from_json(const json& doc) {
  return guarded("seeds", [&] {
    SeedSet s;
    s.master = doc.at("master").get<std::uint64_t>();
    s.noise = doc.at("noise").get<std::uint64_t>();
    s.basis_curl_free = doc.at("basis_curl_free").get<std::uint64_t>();
    s.basis_symplectic = doc.at("basis_symplectic").get<std::uint64_t>();
    s.cv_shuffle = doc.at("cv_shuffle").get<std::uint64_t>();
    s.basis_baseline = doc.at("basis_baseline").get<std::uint64_t>();
    return s;
  });
}

json to_json(const HelmholtzModel& model) {
  return {{"type", "helmholtz"},
          {"hyper", to_json(model.hyper())},
          {"basis_curl_free", to_json(model.curl_free_basis())},
          {"basis_symplectic", to_json(model.symplectic_basis())},
          {"alpha", to_vec(model.alpha())},
          {"beta", to_vec(model.beta())}};
}

HelmholtzModel helmholtz_from_json(const json& doc) {
  return guarded("Helmholtz model", [&] {
    if (doc.at("type").get<std::string>() != "helmholtz") throw ParseError("not a Helmholtz model document", 0);
    return HelmholtzModel(basis_from_json(doc.at("basis_curl_free")), basis_from_json(doc.at("basis_symplectic")),
                          vector_from(doc.at("alpha")), vector_from(doc.at("beta")), hyper_from_json(doc.at("hyper")));
  });
}

json to_json(const BaselineModel& model) {
  return {{"type", "gaussian-separable"},
          {"hyper", to_json(model.hyper())},
          {"basis", to_json(model.basis())},
          {"alpha", to_vec(model.alpha())}};
}

BaselineModel baseline_from_json(const json& doc) {
  return guarded("baseline model", [&] {
    if (doc.at("type").get<std::string>() != "gaussian-separable") {
      throw ParseError("not a baseline model document", 0);
    }
    return BaselineModel(basis_from_json(doc.at("basis")), vector_from(doc.at("alpha")),
                         hyper_from_json(doc.at("hyper")));
  });
}

json to_json(const Dataset& dataset) {
  return {{"n", dataset.dim()},
          {"states", rows_to_json(dataset.states)},
          {"derivatives", rows_to_json(dataset.derivatives)},
          {"times", dataset.times},
          {"trajectory", dataset.trajectory}};
}

Dataset dataset_from_json(const json& doc) {
  return guarded("dataset", [&] {
    const auto n = doc.at("n").get<Eigen::Index>();
    Dataset d;
    d.states = rows_from_json(doc.at("states"), n);
    d.derivatives = rows_from_json(doc.at("derivatives"), n);
    if (doc.contains("times")) d.times = doc.at("times").get<std::vector<double>>();
    if (doc.contains("trajectory")) d.trajectory = doc.at("trajectory").get<std::vector<int>>();
    d.validate();
    return d;
  });
}

json to_json(const EvalReport& report) {
  return {{"system", report.system},
          {"model", report.model},
          {"training_mse", report.training_mse},
          {"test_mse", report.test_mse},
          {"training_residuals", report.training_residuals},
          {"test_residuals", report.test_residuals},
          {"hyper", to_json(report.hyper)},
          {"seeds", to_json(report.seeds)},
          {"d", report.features},
          {"notes", report.notes}};
}

std::string dataset_csv(const Dataset& dataset, const json* meta) {
  require_dim(2, dataset.dim(), "dataset CSV");
  std::ostringstream out;
  write_meta(out, meta);
  out << "t,q,p,qdot,pdot,traj_id\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << fmt(dataset.times.empty() ? 0.0 : dataset.times[i]) << ',' << fmt(dataset.states(r, 0)) << ','
        << fmt(dataset.states(r, 1)) << ',' << fmt(dataset.derivatives(r, 0)) << ','
        << fmt(dataset.derivatives(r, 1)) << ',' << (dataset.trajectory.empty() ? 0 : dataset.trajectory[i]) << '\n';
  }
  return out.str();
}

Dataset dataset_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<std::array<double, 5>> rows;
  std::vector<int> traj;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "t,q,p,qdot,pdot,traj_id") throw ParseError("unexpected dataset CSV header '" + line + "'", line_no);
      header = true;
      continue;
    }
    std::array<double, 5> vals{};
    std::size_t pos = 0;
    for (double& v : vals) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos) throw ParseError("dataset CSV row has too few columns", line_no);
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + comma, v);
      if (ec != std::errc{} || ptr != line.data() + comma) throw ParseError("bad number in dataset CSV", line_no);
      pos = comma + 1;
    }
    int id = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), id);
    if (ec != std::errc{} || ptr != line.data() + line.size()) throw ParseError("bad traj_id in dataset CSV", line_no);
    rows.push_back(vals);
    traj.push_back(id);
  }
  if (!header) throw ParseError("dataset CSV has no header", line_no);
  Dataset d;
  d.states.resize(static_cast<Eigen::Index>(rows.size()), 2);
  d.derivatives.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    d.times.push_back(rows[i][0]);
    d.states.row(r) << rows[i][1], rows[i][2];
    d.derivatives.row(r) << rows[i][3], rows[i][4];
  }
  d.trajectory = std::move(traj);
  d.validate();
  return d;
}

std::string trajectory_csv(const std::vector<Trajectory>& runs, const json* meta) {
  std::ostringstream out;
  write_meta(out, meta);
  out << "traj_id,t,q,p\n";
  for (std::size_t j = 0; j < runs.size(); ++j) {
    require_dim(2, static_cast<std::size_t>(runs[j].states.cols()), "trajectory CSV");
    for (std::size_t k = 0; k < runs[j].size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      out << j << ',' << fmt(runs[j].times[k]) << ',' << fmt(runs[j].states(r, 0)) << ','
          << fmt(runs[j].states(r, 1)) << '\n';
    }
  }
  return out.str();
}

std::string points_csv(const Matrix& points, const Matrix& values, const json* meta) {
  std::ostringstream out;
  write_meta(out, meta);
  out << "q,p,qdot,pdot\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out << fmt(points(i, 0)) << ',' << fmt(points(i, 1)) << ',' << fmt(values(i, 0)) << ',' << fmt(values(i, 1))
        << '\n';
  }
  return out.str();
}

std::string grid_csv(const StreamGrid& grid, const json* meta) { return points_csv(grid.points, grid.values, meta); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Dataset load_dataset(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".csv") return dataset_from_csv(text);
  return guarded("dataset file", [&] { return dataset_from_json(json::parse(text)); });
}

}  // namespace helmrff
