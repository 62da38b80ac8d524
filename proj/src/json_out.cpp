#include "ndslab/json_out.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

#include "ndslab/errors.hpp"

namespace ndslab {

std::string format_real(double v) {
    if (!std::isfinite(v))
        throw Error("refusing to serialize non-finite real");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

JsonWriter::JsonWriter() { need_comma_.push_back(false); }

void JsonWriter::comma() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (need_comma_.back())
        out_ += ',';
    need_comma_.back() = true;
}

void JsonWriter::escape_into(const std::string& s) {
    out_ += '"';
    for (char c : s) {
        switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
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

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += '{';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += '[';
    need_comma_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    need_comma_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
    comma();
    escape_into(name);
    out_ += ':';
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    comma();
    out_ += format_real(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<long long>(v)); }
JsonWriter& JsonWriter::value(long v) { return value(static_cast<long long>(v)); }

JsonWriter& JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(const std::string& v) {
    comma();
    escape_into(v);
    return *this;
}

JsonWriter& JsonWriter::null() {
    comma();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& json_text) {
    comma();
    out_ += json_text;
    return *this;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    assert(values.size() == columns_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ += ',';
        out_ += format_real(values[i]);
    }
    out_ += '\n';
}

} // namespace ndslab
