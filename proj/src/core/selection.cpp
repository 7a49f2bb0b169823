#include "radtrim/core/selection.hpp"

#include "radtrim/util/json_writer.hpp"

namespace radtrim::core {

std::string_view to_string(RemovalReason r) {
    switch (r) {
        case RemovalReason::interval_outlier: return "interval_outlier";
        case RemovalReason::robustness: return "robustness";
        case RemovalReason::criterion_elimination: return "criterion_elimination";
    }
    return "unknown";
}

void write_selection_json(const SubsetSelection& sel, std::ostream& out) {
    util::JsonWriter w(out);
    w.begin_object();
    w.key("kept").begin_array();
    for (const auto& k : sel.kept) {
        w.value(k);
    }
    w.end_array();
    w.key("removed").begin_array();
    for (const auto& r : sel.removed) {
        w.begin_object();
        w.kv("label", r.label);
        w.kv("reason", to_string(r.reason));
        w.end_object();
    }
    w.end_array();
    w.key("trace").begin_array();
    for (const auto& t : sel.trace) {
        w.begin_object();
        w.kv("iteration", t.iteration);
        w.kv("candidate", t.candidate);
        w.kv("criterion_before", t.criterion_before);
        w.kv("criterion_after", t.criterion_after);
        w.kv("relative_reduction", t.relative_reduction);
        w.kv("committed", t.committed);
        w.end_object();
    }
    w.end_array();
    if (sel.selected_kappa) {
        w.kv("selected_kappa", *sel.selected_kappa);
    }
    if (!sel.notes.empty()) {
        w.key("notes").begin_array();
        for (const auto& n : sel.notes) {
            w.value(n);
        }
        w.end_array();
    }
    w.end_object();
    out << '\n';
}

}  // namespace radtrim::core
