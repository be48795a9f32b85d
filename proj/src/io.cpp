#include "feqo/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "feqo/errors.hpp"
#include "feqo/gates.hpp"

namespace feqo::io {

namespace {

std::string format_number(double v, int digits) {
  if (!std::isfinite(v)) return "null";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void dump(std::ostringstream& out, const Json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{" << nl;
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << "," << nl;
        first = false;
        out << pad << Json(key).dump() << (indent > 0 ? ": " : ":");
        dump(out, item, indent, depth + 1);
      }
      out << nl << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
      out << "[" << (flat ? "" : nl);
      bool first = true;
      for (const auto& item : v) {
        if (!first) out << (flat ? ", " : ",") << (flat ? "" : nl);
        first = false;
        if (!flat) out << pad;
        dump(out, item, indent, depth + 1);
      }
      out << (flat ? "" : nl) << (flat ? "" : close_pad) << "]";
      return;
    }
    case Json::value_t::number_float:
      out << format_number(v.get<double>(), 17);
      return;
    default:
      out << v.dump();
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::ostringstream out;
  dump(out, value, indent, 0);
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& value) { write_text(path, dump_json(value) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return Json::parse(in);
}

std::vector<std::string> trajectory_columns(const BasisSpec& basis) {
  std::vector<std::string> cols{"t_fs"};
  for (int e = 0; e < basis.num_electrons(); ++e)
    for (const auto& n : basis.sidebands()) cols.push_back("pop_e" + std::to_string(e + 1) + "_n" + n.label());
  cols.insert(cols.end(), {"photon_mean", "entropy_nats", "norm"});
  return cols;
}

std::string trajectory_csv(const Trajectory& trajectory, const BasisSpec& basis) {
  std::ostringstream out;
  const auto cols = trajectory_columns(basis);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& s : trajectory.samples) {
    out << format_number(s.t_fs, 9);
    for (const auto& per_electron : s.populations)
      for (double p : per_electron) out << "," << format_number(p, 9);
    out << "," << format_number(s.photon_mean, 9) << "," << format_number(s.entropy_nats, 9) << ","
        << format_number(s.norm, 9) << "\n";
  }
  return out.str();
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory, const BasisSpec& basis) {
  write_text(path, trajectory_csv(trajectory, basis));
}

Json plot_data(const Trajectory& trajectory, const BasisSpec& basis, const std::string& title) {
  Json t = Json::array();
  for (const auto& s : trajectory.samples) t.push_back(s.t_fs);
  Json series = Json::array();
  const auto cols = trajectory_columns(basis);
  std::size_t col = 1;
  for (int e = 0; e < basis.num_electrons(); ++e) {
    for (int slot = 0; slot < basis.sideband_count(); ++slot, ++col) {
      Json y = Json::array();
      for (const auto& s : trajectory.samples) y.push_back(s.populations[e][slot]);
      series.push_back({{"name", cols[col]}, {"y", std::move(y)}});
    }
  }
  Json photons = Json::array(), entropy = Json::array();
  for (const auto& s : trajectory.samples) {
    photons.push_back(s.photon_mean);
    entropy.push_back(s.entropy_nats);
  }
  series.push_back({{"name", "photon_mean"}, {"y", std::move(photons)}});
  series.push_back({{"name", "entropy_nats"}, {"y", std::move(entropy)}});
  return Json{{"title", title},
              {"x_label", "time (fs)"},
              {"y_label", "population"},
              {"x", std::move(t)},
              {"series", std::move(series)}};
}

Json density_matrix_json(const StateVector& state, const std::vector<int>& qubits) {
  const auto& basis = state.basis();
  if (qubits.empty() || qubits.size() > 3) throw DomainError("density-matrix export takes 1 to 3 qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= basis.num_electrons()) throw DomainError("qubit index outside the register");
    if (i > 0 && qubits[i] <= qubits[i - 1]) throw DomainError("qubit indices must be strictly increasing");
  }
  const DensityOperator electrons = partial_trace(state, SubsystemSelector{qubits, false});
  const BasisSpec sub(static_cast<int>(qubits.size()), basis.sidebands(), 0);
  const DensityOperator rho = computational_block(electrons, sub);
  const Index n = rho.dimension();
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < n; ++i) {
    Json row_re = Json::array(), row_im = Json::array();
    for (Index j = 0; j < n; ++j) {
      row_re.push_back(rho.matrix()(i, j).real());
      row_im.push_back(rho.matrix()(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  Json q = Json::array();
  for (int k : qubits) q.push_back(k + 1);
  return Json{{"qubits", std::move(q)},
              {"labels", qubit_labels(static_cast<int>(qubits.size()))},
              {"real", std::move(re)},
              {"imag", std::move(im)}};
}

void export_density_matrix(const StateVector& state, const std::vector<int>& qubits,
                           const std::filesystem::path& path) {
  write_json(path, density_matrix_json(state, qubits));
}

DensityOperator import_density_matrix(const std::filesystem::path& path, double hermiticity_tol) {
  const Json j = read_json(path);
  const auto labels = j.at("labels").get<std::vector<std::string>>();
  const auto re = j.at("real").get<std::vector<std::vector<double>>>();
  const auto im = j.at("imag").get<std::vector<std::vector<double>>>();
  const Index n = static_cast<Index>(labels.size());
  const int num_qubits = static_cast<int>(std::lround(std::log2(static_cast<double>(std::max<Index>(n, 1)))));
  if (n == 0 || (Index{1} << num_qubits) != n || labels != qubit_labels(num_qubits)) {
    throw ConfigError(path.string() + ": labels do not form a qubit basis");
  }
  if (static_cast<Index>(re.size()) != n || static_cast<Index>(im.size()) != n) {
    throw ConfigError(path.string() + ": matrix shape does not match the labels");
  }
  Eigen::MatrixXcd m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(re[i].size()) != n || static_cast<Index>(im[i].size()) != n) {
      throw ConfigError(path.string() + ": ragged matrix row");
    }
    for (Index k = 0; k < n; ++k) m(i, k) = Complex(re[i][k], im[i][k]);
  }
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > hermiticity_tol) {
    throw ToleranceError(path.string() + ": matrix is not Hermitian (defect " + format_number(defect, 3) + ")");
  }
  return DensityOperator("qubits", std::vector<Index>(num_qubits, 2), m);
}

}  // namespace feqo::io
