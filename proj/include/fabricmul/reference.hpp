#pragma once

// Published comparison figures shipped as static metadata
// (reference/published_figures.json). Nothing here is measured by this library.

#include <string>
#include <string_view>
#include <vector>

namespace fabricmul {

struct ReferenceResources {
  std::string design;
  int luts = 0;
  int carry4 = 0;
};

struct ReferenceCriticalPath {
  std::string design;
  double total_ns = 0.0;
  double logic_ns = 0.0;
  double net_ns = 0.0;
};

/// The embedded metadata document, verbatim.
std::string_view reference_tables_json() noexcept;

std::vector<ReferenceResources> reference_resources();
std::vector<ReferenceCriticalPath> reference_critical_paths();

/// Text tables with their labels; used by the CLI reports.
std::string reference_resources_text();
std::string reference_critical_paths_text();

}  // namespace fabricmul
