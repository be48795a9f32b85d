#pragma once

// Serialization of results: summary JSON at 17 significant digits, trajectory
// CSV at 9, plot-data JSON and qubit density-matrix files.

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "feqo/hilbert.hpp"
#include "feqo/propagate.hpp"

namespace feqo::io {

using Json = nlohmann::ordered_json;

// Pretty-printed JSON with every floating-point number at 17 significant digits.
std::string dump_json(const Json& value, int indent = 2);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& value);
Json read_json(const std::filesystem::path& path);

// "t_fs,pop_e1_n-5/2,...,photon_mean,entropy_nats,norm"
std::vector<std::string> trajectory_columns(const BasisSpec& basis);
std::string trajectory_csv(const Trajectory& trajectory, const BasisSpec& basis);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory, const BasisSpec& basis);

// One series per CSV column against time, with axis labels.
Json plot_data(const Trajectory& trajectory, const BasisSpec& basis, const std::string& title);

// Computational-block density matrix of the selected electrons, labels "e..e" first.
Json density_matrix_json(const StateVector& state, const std::vector<int>& qubits);
void export_density_matrix(const StateVector& state, const std::vector<int>& qubits,
                           const std::filesystem::path& path);
// Reads a file written by export_density_matrix; checks shape, labels and Hermiticity.
DensityOperator import_density_matrix(const std::filesystem::path& path, double hermiticity_tol = 1e-10);

}  // namespace feqo::io
