#pragma once

#include <map>
#include <string>
#include <vector>

#include "sospec/enclosure.hpp"
#include "sospec/fem.hpp"
#include "sospec/toy_models.hpp"
#include "sospec/types.hpp"

namespace sospec {

// ---- convergence study -----------------------------------------------------

struct ConvergePointRow {
  std::string potential;
  int order = 0;
  int eig_index = 0;  // 1-based position in the Galerkin spectrum
  int n_elem = 0;
  double h = 0.0;
  Complex z{};
  double residual = 0.0;  // |Im z|
};

struct SlopeFit {
  std::string potential;
  int order = 0;
  int eig_index = 0;
  double slope = 0.0;  // of log10 |Im z| against log10 h
  double r2 = 0.0;
  int n_points = 0;
};

struct ConvergeConfig {
  std::string potential = "zero";
  double x_lo = 0.0;
  double x_hi = 3.141592653589793;
  std::vector<int> orders{3, 4, 5};
  std::vector<int> eig_indices{1, 2, 3, 4, 5};
  std::map<int, std::vector<int>> mesh_sizes;  // keyed by order
  int quad_points = 0;                         // 0 = default for the order
};

struct ConvergeResult {
  std::vector<ConvergePointRow> points;
  std::vector<SlopeFit> fits;
};

ConvergeResult run_converge(const ConvergeConfig& cfg);

// ---- enclosure tables ------------------------------------------------------

struct EnclosureTableRow {
  int j = 0;  // 1-based eigenvalue index
  Complex z{};
  GapInterval gap;
  EnclosureInterval residual;
  EnclosureInterval improved;
};

struct MathieuTable {
  int order = 0;
  int n_elem = 0;
  std::vector<EnclosureTableRow> rows;
};

// Enclosures for the first n_rows eigenvalues of -u'' + 2cos(2x) on (0, pi):
// gap endpoints for eigenvalue j are chained from the certified bounds of its
// neighbours (a_1 = -inf).
MathieuTable run_mathieu_table(int order, int n_elem, int n_rows = 5,
                               int quad_points = 0);

struct CrystalConfig {
  double l = 25.0;   // half width of the domain (-l, l)
  double h = 0.1;    // target element size; n_elem = round(2 l / h)
  int order = 3;
  GapInterval gap;   // spectral-gap interval around the eigenvalue
  int label = 1;
  int quad_points = 0;
};

struct CrystalRow {
  CrystalConfig config;
  int n_elem = 0;
  EnclosureTableRow row;
};

// Enclosure for one gap eigenvalue of -u'' + cos(x) - exp(-x^2) on (-l, l).
CrystalRow run_crystal(const CrystalConfig& cfg);

// ---- toy model report ------------------------------------------------------

struct ToyReport {
  std::string name;
  SecondOrderSpectrum computed;
  std::vector<SpectralPoint> exact;
  std::vector<double> galerkin;
  double max_value_distance = 0.0;
  bool multiplicities_match = false;
};

// Model names: ex12 (n), ex14 (n, r), pollution (spec), rank-rotation
// (n, beta), prescribed (anchors, z, delta).
ToyReport run_toy_diagonal_pair(int n);
ToyReport run_toy_semi_bounded(int n, double r);
ToyReport run_toy_pollution(const PollutionSpec& spec);
ToyReport run_toy_rank_rotation(int n, double beta);
ToyReport run_toy_prescribed(const PrescribedPointSpec& spec);

// ---- emission --------------------------------------------------------------

std::string converge_points_to_csv(const std::vector<ConvergePointRow>& rows);
std::string converge_slopes_to_csv(const std::vector<SlopeFit>& fits);
std::string converge_to_json(const ConvergeResult& result);
// Log-log polylines of residual against h, one per (order, eig_index).
std::string converge_to_svg(const ConvergeResult& result);

std::string enclosure_table_to_csv(const std::string& tag, int order,
                                   int n_elem,
                                   const std::vector<EnclosureTableRow>& rows);
std::string enclosure_table_to_json(const std::string& tag, int order,
                                    int n_elem,
                                    const std::vector<EnclosureTableRow>& rows);

std::string toy_report_to_csv(const ToyReport& report);
std::string toy_report_to_json(const ToyReport& report);

std::string sigma_map_to_csv(const GridSpec& grid, const RealMatrix& values);
std::string sigma_map_to_json(const GridSpec& grid, const RealMatrix& values);
std::string sigma_map_to_svg(const GridSpec& grid, const RealMatrix& values);

// ---- shared helpers --------------------------------------------------------

// Index (into spectrum points with Im >= 0) of the point nearest to the
// estimate; throws PairingAmbiguity when the two best candidates are
// equidistant within tolerance.
Complex pair_point_to_estimate(const SecondOrderSpectrum& s, double estimate);

// Representative of the gap eigenvalue among the Im >= 0 spectral points in
// the gap disk: the one whose improved interval is narrowest. |Im| alone is
// not a safe criterion -- a point hugging a band edge can carry a smaller
// residual than the defect eigenvalue, but its 1/(Re z - a) correction term
// inflates the improved width and gives it away. Throws SolverError when the
// disk holds no point.
Complex best_gap_point(const SecondOrderSpectrum& s, const GapInterval& gap);

// Least-squares slope of y against x with its r^2.
std::pair<double, double> fit_slope(const std::vector<double>& x,
                                    const std::vector<double>& y);

}  // namespace sospec
