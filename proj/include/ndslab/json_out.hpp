#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace ndslab {

// Renders a double as a fixed 17-significant-digit decimal. This round-trips
// IEEE binary64 exactly and keeps every emitted report byte-stable across
// runs, which the determinism contract of the report files relies on.
std::string format_real(double v);

// Minimal streaming JSON writer for report files. Keys are emitted in call
// order, reals through format_real, so serializing the same report twice
// yields identical bytes.
class JsonWriter {
public:
    JsonWriter();

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(long long v);
    JsonWriter& value(int v);
    JsonWriter& value(long v);
    JsonWriter& value(bool v);
    JsonWriter& value(const char* v);
    JsonWriter& value(const std::string& v);
    JsonWriter& null();
    // Inserts pre-rendered JSON verbatim (used to echo nested documents).
    JsonWriter& raw(const std::string& json_text);

    const std::string& str() const { return out_; }

private:
    void comma();
    void escape_into(const std::string& s);

    std::string out_;
    std::vector<bool> need_comma_;
    bool after_key_ = false;
};

// CSV emitter with the same 17-digit real rendering.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    const std::string& str() const { return out_; }

private:
    std::string out_;
    std::size_t columns_;
};

} // namespace ndslab
