#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace radtrim::util {

/// Streaming JSON writer with insertion-ordered keys and fixed numeric
/// formatting. Report files must be byte-identical across runs and
/// platforms, which rules out serializers that pick their own shortest
/// float representation.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out, int significant_digits = 12)
        : out_(out), digits_(significant_digits) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();

    JsonWriter& key(std::string_view name);

    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::size_t v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null();

    /// Convenience: key followed by scalar value.
    template <typename T>
    JsonWriter& kv(std::string_view name, const T& v) {
        key(name);
        return value(v);
    }

    static std::string escape(std::string_view raw);

private:
    void before_item();
    void newline_indent();

    struct Level {
        bool is_object = false;
        std::size_t count = 0;
        bool pending_key = false;
    };

    std::ostream& out_;
    int digits_;
    std::vector<Level> stack_;
};

}  // namespace radtrim::util
