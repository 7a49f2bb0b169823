#include "radtrim/harness/report_io.hpp"

#include "radtrim/util/csv.hpp"
#include "radtrim/util/json_writer.hpp"
#include "radtrim/util/numfmt.hpp"

namespace radtrim::harness {

namespace {

void write_optional(util::JsonWriter& w, const std::optional<double>& v) {
    if (v) {
        w.value(*v);
    } else {
        w.null();
    }
}

std::string csv_number(const std::optional<double>& v) {
    return v ? util::format_double(*v, 12) : std::string();
}

const char* pool_source_name(PoolSource s) {
    return s == PoolSource::native_forecasters ? "native_forecasters" : "ingested";
}

}  // namespace

void write_report_json(const AggregateReport& report, const ReldivStrata* strata,
                       std::ostream& out) {
    util::JsonWriter w(out, 12);
    w.begin_object();
    w.kv("schema", "radtrim-report/1");
    w.kv("pool_source", pool_source_name(report.pool_source));
    w.kv("interval_level", report.interval_level);

    w.key("algorithms").begin_array();
    for (const auto& name : report.algorithm_names) {
        w.value(name);
    }
    w.end_array();

    w.key("metrics").begin_array();
    for (const auto& name : report.metric_names) {
        w.value(name);
    }
    w.end_array();

    std::size_t n_ok = 0;
    for (const auto& s : report.per_series) {
        if (!s.failed) {
            ++n_ok;
        }
    }
    w.kv("n_series", n_ok);

    w.key("rejected").begin_array();
    for (const auto& r : report.rejected) {
        w.begin_object();
        w.kv("id", r.id);
        w.kv("reason", to_string(r.reason));
        w.end_object();
    }
    w.end_array();

    w.key("failed").begin_array();
    for (const auto& s : report.per_series) {
        if (s.failed) {
            w.begin_object();
            w.kv("id", s.id);
            w.kv("error", s.error);
            w.end_object();
        }
    }
    w.end_array();

    w.key("series").begin_array();
    for (const auto& s : report.per_series) {
        if (s.failed) {
            continue;
        }
        w.begin_object();
        w.kv("id", s.id);
        w.kv("frequency", to_string(s.frequency));
        w.kv("periodicity", s.periodicity);
        w.kv("horizon", s.horizon);
        w.kv("pool_size", s.pool_size);
        w.key("reldiv");
        write_optional(w, s.reldiv);
        w.key("algorithms").begin_array();
        for (std::size_t a = 0; a < report.algorithm_names.size(); ++a) {
            const AlgoOutcome& o = s.per_algorithm[a];
            w.begin_object();
            w.kv("name", report.algorithm_names[a]);
            w.key("kept").begin_array();
            for (const auto& k : o.selection.kept) {
                w.value(k);
            }
            w.end_array();
            w.key("removed").begin_array();
            for (const auto& r : o.selection.removed) {
                w.begin_object();
                w.kv("label", r.label);
                w.kv("reason", to_string(r.reason));
                w.end_object();
            }
            w.end_array();
            if (o.selection.selected_kappa) {
                w.kv("selected_kappa", *o.selection.selected_kappa);
            }
            w.key("metrics").begin_object();
            w.key("mase");
            write_optional(w, o.report.mase);
            w.key("smape");
            write_optional(w, o.report.smape);
            w.key("bias");
            write_optional(w, o.report.bias);
            w.key("msis");
            write_optional(w, o.report.msis);
            w.key("coverage");
            write_optional(w, o.report.coverage);
            w.key("upper_coverage");
            write_optional(w, o.report.upper_coverage);
            w.key("spread");
            write_optional(w, o.report.spread);
            w.end_object();
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();

    w.key("aggregates").begin_array();
    for (const auto& cell : report.cells) {
        w.begin_object();
        w.kv("frequency", cell.frequency);
        w.kv("algorithm", cell.algorithm);
        w.kv("metric", cell.metric);
        w.key("mean");
        write_optional(w, cell.mean);
        w.kv("n", cell.n);
        w.kv("excluded", cell.excluded);
        w.end_object();
    }
    w.end_array();

    w.key("kept_sizes").begin_array();
    for (const auto& row : report.kept_sizes) {
        w.begin_object();
        w.kv("algorithm", row.algorithm);
        w.kv("size", row.size);
        w.kv("count", row.count);
        w.end_object();
    }
    w.end_array();

    w.key("mcb").begin_array();
    for (const auto& panel : report.mcb) {
        w.begin_object();
        w.kv("frequency", panel.frequency);
        w.kv("metric", panel.metric);
        w.kv("n_used", panel.result.n_used);
        w.kv("n_dropped", panel.result.n_dropped);
        w.key("ranks").begin_array();
        for (const auto& e : panel.result.entries) {
            w.begin_object();
            w.kv("algorithm", e.algorithm);
            w.kv("mean_rank", e.mean_rank);
            w.kv("half_width", e.half_width);
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();

    if (strata != nullptr) {
        w.key("reldiv_strata").begin_object();
        w.kv("cut_low", strata->cut_low);
        w.kv("cut_high", strata->cut_high);
        w.kv("cuts_from_data", strata->cuts_from_data);
        w.kv("undefined_reldiv", strata->undefined_reldiv);
        w.key("strata").begin_array();
        for (const auto& stratum : strata->strata) {
            w.begin_object();
            w.kv("name", stratum.name);
            w.kv("n_series", stratum.n_series);
            w.key("win_rates").begin_array();
            for (const auto& wr : stratum.win_rates) {
                w.begin_object();
                w.kv("comparison", wr.comparison);
                w.kv("wins", wr.wins);
                w.kv("comparisons", wr.comparisons);
                w.kv("excluded_identical", wr.excluded_identical);
                w.key("win_rate");
                if (wr.comparisons > 0) {
                    w.value(static_cast<double>(wr.wins) / static_cast<double>(wr.comparisons));
                } else {
                    w.null();
                }
                w.end_object();
            }
            w.end_array();
            w.end_object();
        }
        w.end_array();
        w.end_object();
    }

    w.key("soft_checks").begin_array();
    for (const auto& check : report.soft_checks) {
        w.begin_object();
        w.kv("name", check.name);
        w.kv("lhs", check.lhs);
        w.kv("rhs", check.rhs);
        w.kv("margin", check.margin);
        w.kv("holds", check.holds);
        w.end_object();
    }
    w.end_array();

    w.end_object();
    out << '\n';
}

void write_report_csv(const AggregateReport& report, std::ostream& out) {
    out << "frequency,algorithm,metric,mean,n,excluded\n";
    for (const auto& cell : report.cells) {
        out << cell.frequency << ',' << cell.algorithm << ',' << cell.metric << ','
            << csv_number(cell.mean) << ',' << cell.n << ',' << cell.excluded << '\n';
    }
}

void write_mcb_csv(const AggregateReport& report, std::ostream& out) {
    out << "frequency,metric,algorithm,mean_rank,half_width,n_used,n_dropped\n";
    for (const auto& panel : report.mcb) {
        for (const auto& e : panel.result.entries) {
            out << panel.frequency << ',' << panel.metric << ',' << e.algorithm << ','
                << util::format_double(e.mean_rank, 12) << ','
                << util::format_double(e.half_width, 12) << ',' << panel.result.n_used << ','
                << panel.result.n_dropped << '\n';
        }
    }
}

void write_reldiv_csv(const AggregateReport& report, std::ostream& out) {
    out << "id,frequency,reldiv\n";
    for (const auto& s : report.per_series) {
        if (s.failed) {
            continue;
        }
        out << util::csv_escape(s.id) << ',' << to_string(s.frequency) << ','
            << csv_number(s.reldiv) << '\n';
    }
}

void write_kept_sizes_csv(const AggregateReport& report, std::ostream& out) {
    out << "algorithm,size,count\n";
    for (const auto& row : report.kept_sizes) {
        out << row.algorithm << ',' << row.size << ',' << row.count << '\n';
    }
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << "delta,algorithm,frequency,mean_mase,n\n";
    for (const auto& row : table.rows) {
        out << util::format_double(row.delta, 12) << ',' << row.algorithm << ',' << row.frequency
            << ',' << csv_number(row.mean_mase) << ',' << row.n << '\n';
    }
}

}  // namespace radtrim::harness
