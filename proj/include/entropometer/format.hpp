#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace entropometer {

/// Locale-independent, 17 significant digits ("%.17g" shape); nan/inf are
/// spelled "nan", "inf", "-inf".
std::string format_number(double value);

/// Single-line JSON object with keys in insertion order and numbers written
/// by format_number. Non-finite numbers become null.
class JsonLine {
public:
    JsonLine& add(std::string_view key, double value);
    JsonLine& add(std::string_view key, std::int64_t value);
    JsonLine& add(std::string_view key, int value) { return add(key, static_cast<std::int64_t>(value)); }
    JsonLine& add(std::string_view key, bool value);
    JsonLine& add(std::string_view key, std::string_view value);
    JsonLine& add(std::string_view key, const char* value) { return add(key, std::string_view(value)); }
    /// Inserts already-serialized JSON.
    JsonLine& add_raw(std::string_view key, std::string_view json);

    std::string str() const { return "{" + body_ + "}"; }

private:
    void key(std::string_view k);
    std::string body_;
};

}  // namespace entropometer
