#include "entropometer/format.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

namespace entropometer {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void JsonLine::key(std::string_view k) {
    if (!body_.empty()) body_ += ',';
    body_ += nlohmann::json(std::string(k)).dump();
    body_ += ':';
}

JsonLine& JsonLine::add(std::string_view k, double value) {
    key(k);
    body_ += std::isfinite(value) ? format_number(value) : std::string("null");
    return *this;
}

JsonLine& JsonLine::add(std::string_view k, std::int64_t value) {
    key(k);
    body_ += std::to_string(value);
    return *this;
}

JsonLine& JsonLine::add(std::string_view k, bool value) {
    key(k);
    body_ += value ? "true" : "false";
    return *this;
}

JsonLine& JsonLine::add(std::string_view k, std::string_view value) {
    key(k);
    body_ += nlohmann::json(std::string(value)).dump();
    return *this;
}

JsonLine& JsonLine::add_raw(std::string_view k, std::string_view json) {
    key(k);
    body_ += json;
    return *this;
}

}  // namespace entropometer
