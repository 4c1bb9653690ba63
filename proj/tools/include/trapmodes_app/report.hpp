#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace trapmodes::app {

using Json = nlohmann::ordered_json;

// A table destined for CSV: header plus rows of preformatted cells.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// RFC 4180: fields holding a comma, quote, CR or LF are quoted, quotes doubled,
// records end in CRLF.
std::string csv_field(const std::string& field);
std::string to_csv(const Table& table);

// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string format_double(double v);

// JSON number, or null for non-finite values.
Json json_number(double v);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

// Self-contained SVG 1.1 line plot with ticks and a legend.
std::string to_svg(const Plot& plot);

// Escape text for XML content and attribute values.
std::string xml_escape(const std::string& s);

}  // namespace trapmodes::app
