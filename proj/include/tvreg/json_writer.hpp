#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace tvreg {

// Minimal deterministic JSON emitter. Reals are serialized with 17
// significant digits so equal inputs always produce identical bytes.
class JsonWriter {
public:
    std::string str() const { return out_; }

    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(const std::string& k) {
        comma();
        string_literal(k);
        out_ += ':';
        fresh_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        comma();
        if (std::isfinite(v)) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out_ += buf;
        } else {
            out_ += "null";
        }
        return *this;
    }

    JsonWriter& value(long v) {
        comma();
        out_ += std::to_string(v);
        return *this;
    }

    JsonWriter& value(int v) { return value(static_cast<long>(v)); }

    JsonWriter& value(bool v) {
        comma();
        out_ += v ? "true" : "false";
        return *this;
    }

    JsonWriter& value(const std::string& v) {
        comma();
        string_literal(v);
        return *this;
    }

    JsonWriter& value(const char* v) { return value(std::string(v)); }

    JsonWriter& value(const std::vector<double>& v) {
        begin_array();
        for (const double x : v) value(x);
        return end_array();
    }

    template <typename T>
    JsonWriter& kv(const std::string& k, const T& v) {
        key(k);
        return value(v);
    }

private:
    JsonWriter& open(char c) {
        comma();
        out_ += c;
        fresh_ = true;
        return *this;
    }
    JsonWriter& close(char c) {
        out_ += c;
        fresh_ = false;
        return *this;
    }
    void comma() {
        if (!fresh_ && !out_.empty()) {
            const char back = out_.back();
            if (back != '{' && back != '[' && back != ':') out_ += ',';
        }
        fresh_ = false;
    }
    void string_literal(const std::string& s) {
        out_ += '"';
        for (const char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool fresh_ = true;
};

}  // namespace tvreg
