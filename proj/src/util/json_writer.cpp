#include "radtrim/util/json_writer.hpp"

#include <cstdio>

#include "radtrim/util/numfmt.hpp"

namespace radtrim::util {

std::string JsonWriter::escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size() + 2);
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::newline_indent() {
    out_ << '\n';
    for (std::size_t i = 0; i < stack_.size(); ++i) {
        out_ << "  ";
    }
}

void JsonWriter::before_item() {
    if (stack_.empty()) {
        return;
    }
    Level& top = stack_.back();
    if (top.pending_key) {
        top.pending_key = false;
        return;
    }
    if (top.count > 0) {
        out_ << ',';
    }
    newline_indent();
    ++top.count;
}

JsonWriter& JsonWriter::begin_object() {
    before_item();
    out_ << '{';
    stack_.push_back({true, 0, false});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const bool empty = stack_.back().count == 0;
    stack_.pop_back();
    if (!empty) {
        newline_indent();
    }
    out_ << '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_item();
    out_ << '[';
    stack_.push_back({false, 0, false});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const bool empty = stack_.back().count == 0;
    stack_.pop_back();
    if (!empty) {
        newline_indent();
    }
    out_ << ']';
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    Level& top = stack_.back();
    if (top.count > 0) {
        out_ << ',';
    }
    newline_indent();
    ++top.count;
    out_ << '"' << escape(name) << "\": ";
    top.pending_key = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    before_item();
    out_ << format_double(v, digits_);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    before_item();
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    before_item();
    out_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    before_item();
    out_ << '"' << escape(v) << '"';
    return *this;
}

JsonWriter& JsonWriter::null() {
    before_item();
    out_ << "null";
    return *this;
}

}  // namespace radtrim::util
