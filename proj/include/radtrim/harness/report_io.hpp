#pragma once

#include <ostream>

#include "radtrim/harness/benchmark.hpp"

namespace radtrim::harness {

/// Full report as JSON. Numeric fields are serialized at a fixed 12
/// significant digits so the file is byte-identical across runs and
/// platforms. Strata are included when given.
void write_report_json(const AggregateReport& report, const ReldivStrata* strata,
                       std::ostream& out);

/// Flat frequency x algorithm x metric table.
void write_report_csv(const AggregateReport& report, std::ostream& out);

void write_mcb_csv(const AggregateReport& report, std::ostream& out);

void write_reldiv_csv(const AggregateReport& report, std::ostream& out);

void write_kept_sizes_csv(const AggregateReport& report, std::ostream& out);

void write_sweep_csv(const SweepTable& table, std::ostream& out);

}  // namespace radtrim::harness
