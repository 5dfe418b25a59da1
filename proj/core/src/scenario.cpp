#include "plasmon/scenario.hpp"

namespace plasmon {

std::string_view to_string(CouplingSource source) {
  switch (source) {
    case CouplingSource::first_principles: return "first_principles";
    case CouplingSource::paper_exact: return "paper_exact";
    case CouplingSource::calibrated: return "calibrated";
  }
  return "unknown";
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::first_principles: return "first_principles";
    case Provenance::paper_exact: return "paper_exact";
    case Provenance::calibrated: return "calibrated";
    case Provenance::override_value: return "override";
  }
  return "unknown";
}

std::string_view to_string(Orientation orientation) {
  return orientation == Orientation::radial ? "radial" : "tangential";
}

}  // namespace plasmon
