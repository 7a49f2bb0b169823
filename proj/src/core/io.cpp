#include "radtrim/core/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>

#include "radtrim/core/errors.hpp"
#include "radtrim/util/csv.hpp"
#include "radtrim/util/numfmt.hpp"

namespace radtrim::core {

namespace {

using nlohmann::json;

double parse_number(const std::string& field, const char* context) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || (end != nullptr && *end != '\0')) {
        throw ParseError(std::string(context) + ": bad numeric field '" + field + "'");
    }
    return v;
}

long parse_integer(const std::string& field, const char* context) {
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (end == field.c_str() || (end != nullptr && *end != '\0')) {
        throw ParseError(std::string(context) + ": bad integer field '" + field + "'");
    }
    return v;
}

struct RawSeries {
    // (t, value) per segment; sorted before assembly
    std::vector<std::pair<long, double>> segments[3];
    int periodicity = 0;  // 0 = unspecified
    Frequency frequency = Frequency::other;
    bool has_frequency = false;
};

int segment_index(const std::string& name) {
    if (name == "train") return 0;
    if (name == "valid") return 1;
    if (name == "test") return 2;
    return -1;
}

Dataset assemble(std::vector<std::string> order, std::map<std::string, RawSeries>& raw) {
    Dataset out;
    for (auto& id : order) {
        RawSeries& r = raw.at(id);
        std::vector<double> obs;
        std::size_t lens[3];
        for (int seg = 0; seg < 3; ++seg) {
            auto& rows = r.segments[seg];
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            lens[seg] = rows.size();
            for (const auto& [t, v] : rows) {
                obs.push_back(v);
            }
        }
        const Frequency freq = r.has_frequency ? r.frequency : Frequency::other;
        const int s = r.periodicity > 0 ? r.periodicity : default_periodicity(freq);
        auto validation = validate_series(id, obs, lens[1], lens[2], s, freq);
        if (validation.ok()) {
            out.series.push_back(std::move(*validation.series));
        } else {
            out.rejected.push_back({std::move(id), *validation.reason});
        }
    }
    return out;
}

}  // namespace

Dataset load_series_csv(std::istream& in) {
    const util::CsvTable table = util::read_csv(in);
    const auto col_id = table.column("id");
    const auto col_segment = table.column("segment");
    const auto col_t = table.column("t");
    const auto col_value = table.column("value");
    if (!col_id || !col_segment || !col_t || !col_value) {
        throw ParseError("series csv: missing required columns id, segment, t, value");
    }
    const auto col_periodicity = table.column("periodicity");
    const auto col_frequency = table.column("frequency");

    std::map<std::string, RawSeries> raw;
    std::vector<std::string> order;
    for (const auto& row : table.rows) {
        if (row.size() < table.header.size()) {
            throw ParseError("series csv: short row");
        }
        const std::string& id = row[*col_id];
        auto [it, inserted] = raw.try_emplace(id);
        if (inserted) {
            order.push_back(id);
        }
        RawSeries& r = it->second;
        const int seg = segment_index(row[*col_segment]);
        if (seg < 0) {
            throw ParseError("series csv: unknown segment '" + row[*col_segment] + "'");
        }
        const long t = parse_integer(row[*col_t], "series csv");
        const double v = parse_number(row[*col_value], "series csv");
        r.segments[seg].emplace_back(t, v);
        if (col_periodicity && !row[*col_periodicity].empty()) {
            r.periodicity = static_cast<int>(parse_integer(row[*col_periodicity], "series csv"));
        }
        if (col_frequency && !row[*col_frequency].empty()) {
            const auto f = frequency_from_string(row[*col_frequency]);
            if (!f) {
                throw ParseError("series csv: unknown frequency '" + row[*col_frequency] + "'");
            }
            r.frequency = *f;
            r.has_frequency = true;
        }
    }
    return assemble(std::move(order), raw);
}

void save_series_csv(const std::vector<SplitSeries>& series, std::ostream& out) {
    out << "id,segment,t,value,periodicity,frequency\n";
    for (const auto& s : series) {
        const std::vector<double>* segs[3] = {&s.train, &s.valid, &s.test};
        const char* names[3] = {"train", "valid", "test"};
        for (int seg = 0; seg < 3; ++seg) {
            for (std::size_t t = 0; t < segs[seg]->size(); ++t) {
                out << util::csv_escape(s.id) << ',' << names[seg] << ',' << (t + 1) << ','
                    << util::format_double_exact((*segs[seg])[t]) << ',' << s.periodicity << ','
                    << to_string(s.frequency) << '\n';
            }
        }
    }
}

Dataset load_series_json(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("series json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("series") || !doc["series"].is_array()) {
        throw ParseError("series json: expected top-level object with a 'series' array");
    }
    Dataset out;
    for (const auto& item : doc["series"]) {
        try {
            const std::string id = item.at("id").get<std::string>();
            const auto train = item.at("train").get<std::vector<double>>();
            const auto valid = item.at("valid").get<std::vector<double>>();
            const auto test = item.at("test").get<std::vector<double>>();
            Frequency freq = Frequency::other;
            if (item.contains("frequency")) {
                const auto f = frequency_from_string(item["frequency"].get<std::string>());
                if (!f) {
                    throw ParseError("series json: unknown frequency for series '" + id + "'");
                }
                freq = *f;
            }
            int s = item.contains("periodicity") ? item["periodicity"].get<int>()
                                                 : default_periodicity(freq);
            std::vector<double> obs = train;
            obs.insert(obs.end(), valid.begin(), valid.end());
            obs.insert(obs.end(), test.begin(), test.end());
            auto validation = validate_series(id, obs, valid.size(), test.size(), s, freq);
            if (validation.ok()) {
                out.series.push_back(std::move(*validation.series));
            } else {
                out.rejected.push_back({id, *validation.reason});
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("series json: ") + e.what());
        }
    }
    return out;
}

void save_series_json(const std::vector<SplitSeries>& series, std::ostream& out) {
    json doc;
    doc["series"] = json::array();
    for (const auto& s : series) {
        json item;
        item["id"] = s.id;
        item["periodicity"] = s.periodicity;
        item["frequency"] = std::string(to_string(s.frequency));
        item["train"] = s.train;
        item["valid"] = s.valid;
        item["test"] = s.test;
        doc["series"].push_back(std::move(item));
    }
    out << doc.dump(2) << '\n';
}

Dataset load_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open series file: " + path);
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        return load_series_json(in);
    }
    return load_series_csv(in);
}

namespace {

struct RawPool {
    std::vector<std::string> labels;
    std::map<std::string, std::vector<std::tuple<long, double, double, double>>> rows;
    std::size_t bound_rows = 0;
    std::size_t total_rows = 0;

    bool has_bounds() const { return bound_rows > 0; }
};

PoolRecord finish_pool(const std::string& series_id, RawPool& raw, double level) {
    if (raw.bound_rows != 0 && raw.bound_rows != raw.total_rows) {
        throw ParseError("pool for series '" + series_id +
                         "': interval bounds must cover every row or none");
    }
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> lower;
    std::vector<std::vector<double>> upper;
    std::size_t horizon = 0;
    for (const auto& label : raw.labels) {
        auto& rows = raw.rows.at(label);
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return std::get<0>(a) < std::get<0>(b);
        });
        std::vector<double> p, lo, up;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (std::get<0>(rows[k]) != static_cast<long>(k + 1)) {
                throw ParseError("pool for series '" + series_id + "', forecaster '" + label +
                                 "': horizons must be contiguous from 1");
            }
            p.push_back(std::get<1>(rows[k]));
            lo.push_back(std::get<2>(rows[k]));
            up.push_back(std::get<3>(rows[k]));
        }
        if (horizon == 0) {
            horizon = p.size();
        } else if (p.size() != horizon) {
            throw ParseError("pool for series '" + series_id +
                             "': forecasters disagree on horizon");
        }
        points.push_back(std::move(p));
        lower.push_back(std::move(lo));
        upper.push_back(std::move(up));
    }
    PoolRecord rec;
    rec.points = ForecastPool::create(raw.labels, std::move(points));
    if (raw.has_bounds()) {
        rec.intervals = IntervalPool::create(raw.labels, std::move(lower), std::move(upper), level);
    }
    return rec;
}

}  // namespace

PoolSet load_pool_csv(std::istream& in, double interval_level) {
    const util::CsvTable table = util::read_csv(in);
    const auto col_sid = table.column("series_id");
    const auto col_forecaster = table.column("forecaster");
    const auto col_h = table.column("h");
    const auto col_point = table.column("point");
    if (!col_sid || !col_forecaster || !col_h || !col_point) {
        throw ParseError("pool csv: missing required columns series_id, forecaster, h, point");
    }
    const auto col_lower = table.column("lower");
    const auto col_upper = table.column("upper");
    if (col_lower.has_value() != col_upper.has_value()) {
        throw ParseError("pool csv: lower/upper must be provided as a pair");
    }

    std::map<std::string, RawPool> raw;
    for (const auto& row : table.rows) {
        if (row.size() < table.header.size()) {
            throw ParseError("pool csv: short row");
        }
        RawPool& pool = raw[row[*col_sid]];
        const std::string& label = row[*col_forecaster];
        if (pool.rows.find(label) == pool.rows.end()) {
            pool.labels.push_back(label);
        }
        const long h = parse_integer(row[*col_h], "pool csv");
        const double point = parse_number(row[*col_point], "pool csv");
        double lo = 0.0;
        double up = 0.0;
        ++pool.total_rows;
        if (col_lower && !row[*col_lower].empty() && !row[*col_upper].empty()) {
            lo = parse_number(row[*col_lower], "pool csv");
            up = parse_number(row[*col_upper], "pool csv");
            ++pool.bound_rows;
        }
        pool.rows[label].emplace_back(h, point, lo, up);
    }

    PoolSet out;
    for (auto& [sid, pool] : raw) {
        out.emplace(sid, finish_pool(sid, pool, interval_level));
    }
    return out;
}

void save_pool_csv(const PoolSet& pools, std::ostream& out) {
    bool any_bounds = false;
    for (const auto& [sid, rec] : pools) {
        if (rec.intervals) {
            any_bounds = true;
        }
    }
    out << (any_bounds ? "series_id,forecaster,h,point,lower,upper\n"
                       : "series_id,forecaster,h,point\n");
    for (const auto& [sid, rec] : pools) {
        for (std::size_t i = 0; i < rec.points.size(); ++i) {
            for (std::size_t h = 0; h < rec.points.horizon; ++h) {
                out << util::csv_escape(sid) << ',' << util::csv_escape(rec.points.labels[i]) << ','
                    << (h + 1) << ',' << util::format_double_exact(rec.points.points[i][h]);
                if (any_bounds) {
                    if (rec.intervals) {
                        out << ',' << util::format_double_exact(rec.intervals->lower[i][h]) << ','
                            << util::format_double_exact(rec.intervals->upper[i][h]);
                    } else {
                        out << ",,";
                    }
                }
                out << '\n';
            }
        }
    }
}

PoolSet load_pool_json(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("pool json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("pools") || !doc["pools"].is_array()) {
        throw ParseError("pool json: expected top-level object with a 'pools' array");
    }
    PoolSet out;
    for (const auto& item : doc["pools"]) {
        try {
            const std::string sid = item.at("series_id").get<std::string>();
            const double level = item.contains("level") ? item["level"].get<double>() : 0.95;
            std::vector<std::string> labels;
            std::vector<std::vector<double>> points, lower, upper;
            bool has_bounds = false;
            for (const auto& fc : item.at("forecasters")) {
                labels.push_back(fc.at("name").get<std::string>());
                points.push_back(fc.at("points").get<std::vector<double>>());
                if (fc.contains("lower")) {
                    has_bounds = true;
                    lower.push_back(fc["lower"].get<std::vector<double>>());
                    upper.push_back(fc.at("upper").get<std::vector<double>>());
                } else {
                    lower.emplace_back();
                    upper.emplace_back();
                }
            }
            PoolRecord rec;
            rec.points = ForecastPool::create(labels, std::move(points));
            if (has_bounds) {
                rec.intervals =
                    IntervalPool::create(labels, std::move(lower), std::move(upper), level);
            }
            out.emplace(sid, std::move(rec));
        } catch (const json::exception& e) {
            throw ParseError(std::string("pool json: ") + e.what());
        }
    }
    return out;
}

void save_pool_json(const PoolSet& pools, std::ostream& out) {
    json doc;
    doc["pools"] = json::array();
    for (const auto& [sid, rec] : pools) {
        json item;
        item["series_id"] = sid;
        if (rec.intervals) {
            item["level"] = rec.intervals->level;
        }
        item["forecasters"] = json::array();
        for (std::size_t i = 0; i < rec.points.size(); ++i) {
            json fc;
            fc["name"] = rec.points.labels[i];
            fc["points"] = rec.points.points[i];
            if (rec.intervals) {
                fc["lower"] = rec.intervals->lower[i];
                fc["upper"] = rec.intervals->upper[i];
            }
            item["forecasters"].push_back(std::move(fc));
        }
        doc["pools"].push_back(std::move(item));
    }
    out << doc.dump(2) << '\n';
}

PoolSet load_pool_file(const std::string& path, double interval_level) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open pool file: " + path);
    }
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        return load_pool_json(in);
    }
    return load_pool_csv(in, interval_level);
}

}  // namespace radtrim::core
