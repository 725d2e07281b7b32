#pragma once

#include "socbec/drift.hpp"
#include "socbec/spectra.hpp"
#include "socbec/sweep.hpp"
#include "socbec/topology.hpp"

#include <string>
#include <vector>

namespace socbec {

// CSV bodies are built in memory so tests can compare bytes; files get the
// exact same bytes (LF endings, trailing newline). Floats carry 12
// significant digits; flagged rows leave value cells empty and set `flag`.
std::string csv_of_map(const SpectralMap& map);
std::string csv_of_marker(const SpectralMap& map, const ChernMarkerMap& cm,
                          const BerryMap& berry);
std::string csv_of_stability(const std::vector<double>& k_grid,
                             const std::vector<StabilityReport>& reports,
                             const std::vector<std::string>& failures);
std::string csv_of_eigen(const std::vector<double>& k_grid,
                         const std::vector<Spectrum>& spectra);
std::string csv_of_ep(const std::vector<EpCandidate>& candidates);
std::string csv_of_power(const std::vector<PowerCurve>& curves);
std::string csv_of_result_set(const ResultSet& rs);

// Single object {meta, grids, arrays}; arrays row-major. With exact = true
// numbers are emitted as 17-digit decimal strings.
std::string json_of_map(const SpectralMap& map, bool exact = false);
std::string json_of_marker(const SpectralMap& map, const ChernMarkerMap& cm,
                           const BerryMap& berry, bool exact = false);

void write_text_file(const std::string& path, const std::string& content);

enum class PlotKind { heatmap, marker_heatmap, eigen_panels, power_curves, ep_markers };

// Self-contained matplotlib script referencing the CSV by relative path.
// Throws SpecInvalid for empty results.
std::string plot_script(PlotKind kind, const std::string& csv_relpath,
                        std::size_t record_count);

} // namespace socbec
