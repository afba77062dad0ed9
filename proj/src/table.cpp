#include "ptkerr/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ptkerr {

int DataTable::col_index(const std::string& column) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == column) return static_cast<int>(i);
    return -1;
}

void DataTable::add_row(std::initializer_list<double> values) {
    if (values.size() != columns.size())
        throw config_error("row width does not match column count");
    rows.emplace_back(values);
}

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string DataTable::to_csv() const {
    std::ostringstream out;
    out << "# name: " << name << "\n";
    if (!meta.is_null()) out << "# meta: " << meta.dump() << "\n";
    out << "# columns: ";
    for (size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt_double(row[i]);
        out << "\n";
    }
    return out.str();
}

nlohmann::json DataTable::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["meta"] = meta;
    j["columns"] = columns;
    j["rows"] = rows;
    return j;
}

void DataTable::write_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw config_error("cannot open output file: " + path);
    f << to_csv();
}

void DataTable::write_json(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw config_error("cannot open output file: " + path);
    f << to_json().dump(2) << "\n";
}

DataTable DataTable::from_csv_text(const std::string& text) {
    DataTable t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto strip = [](std::string s) {
                const size_t b = s.find_first_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b);
            };
            if (line.rfind("# name:", 0) == 0) {
                t.name = strip(line.substr(7));
            } else if (line.rfind("# meta:", 0) == 0) {
                t.meta = nlohmann::json::parse(line.substr(7));
            } else if (line.rfind("# columns:", 0) == 0) {
                std::istringstream cols(strip(line.substr(10)));
                std::string c;
                while (std::getline(cols, c, ',')) t.columns.push_back(c);
            }
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            if (cell == "nan") {
                row.push_back(std::nan(""));
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);  // accepts subnormals
            if (end == cell.c_str())
                throw config_error("unparseable CSV cell: " + cell);
            row.push_back(v);
        }
        if (row.size() != t.columns.size())
            throw config_error("CSV row width does not match header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

DataTable DataTable::read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return from_csv_text(buf.str());
}

}  // namespace ptkerr
