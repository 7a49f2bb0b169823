#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace radtrim::core {

enum class RemovalReason { interval_outlier, robustness, criterion_elimination };

std::string_view to_string(RemovalReason r);

struct Removal {
    std::string label;
    RemovalReason reason;

    bool operator==(const Removal&) const = default;
};

/// One backward-elimination iteration. The final rejected tentative removal
/// is recorded too, with committed = false.
struct TraceEntry {
    int iteration = 0;
    std::string candidate;
    double criterion_before = 0.0;
    double criterion_after = 0.0;
    double relative_reduction = 0.0;
    bool committed = false;

    bool operator==(const TraceEntry&) const = default;
};

/**
 * The outcome of a trimming run: surviving labels, removals with reasons,
 * and the elimination trace. kept plus the removed labels partition the
 * original pool's labels.
 */
struct SubsetSelection {
    std::vector<std::string> kept;
    std::vector<Removal> removed;
    std::vector<TraceEntry> trace;
    std::optional<double> selected_kappa;
    std::vector<std::string> notes;

    bool operator==(const SubsetSelection&) const = default;
};

/// Serializes a selection as JSON (audit format used by the CLI).
void write_selection_json(const SubsetSelection& sel, std::ostream& out);

}  // namespace radtrim::core
