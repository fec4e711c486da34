#pragma once

#include <ostream>
#include <span>
#include <string>

#include "crossbound/analysis.hpp"
#include "crossbound/effective1d.hpp"
#include "crossbound/operator.hpp"

namespace crossbound {

/// Sweep rows in the published table layout, 6 significant digits:
/// beta,set,E_ratio,ell_x,ell_y. Header and column order are frozen.
std::string records_to_csv(std::span<const SweepRecord> records);

/// Full-precision JSON round trip of one record (diagnostics included).
std::string record_to_json(const SweepRecord& record);
SweepRecord record_from_json(const std::string& json_text);

/// JSON array of records.
std::string records_to_json(std::span<const SweepRecord> records);

/// Nodal field, plain-text: one header line (Nx, Ny, Lx, Ly, beta, class)
/// then row-major node values, one y-line per row.
void write_field_grid(std::ostream& os, const Field& field);

/// CSV variant with x,y,value columns in original (unscaled) coordinates.
void write_field_csv(std::ostream& os, const Field& field);

/// Three-column (x y value) cut along one arm in original coordinates, for
/// gnuplot. `along_x` selects the arm; the transverse cut line sits at 0 for
/// even parity and 1/3 of the rescaled half-width for odd parity.
void write_field_cut(std::ostream& os, const Field& field, bool along_x);

/// Fixed-format text table of the qualitative class predictions.
std::string predictions_to_text();

/// JSON for a fit outcome.
std::string fit_to_json(const FitResult& fit);

/// JSON for a critical-ratio estimate.
std::string critical_to_json(const CriticalEstimate& estimate);

}  // namespace crossbound
