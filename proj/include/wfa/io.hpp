#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfa/speeds.hpp"

namespace wfa {

using Json = nlohmann::json;

// %.17g without locale, "null" for NaN
std::string fmt17(double v);

// Sorted keys, doubles at 17 significant digits, two-space indent. Identical
// documents give identical bytes.
std::string dump_json(const Json& j, bool pretty = true);

// +inf speeds serialize as {"inf": true}
Json speed_json(const Speed& s);

// CSV: comma separated, '.' decimal point, empty cell for +inf speeds.
std::string csv_cell(double v);
std::string csv_cell(const Speed& s);

class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header, const std::string& comment = "");
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& os_;
    std::size_t cols_;
};

}  // namespace wfa
