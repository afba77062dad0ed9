#ifndef PTKERR_TABLE_HPP
#define PTKERR_TABLE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ptkerr/types.hpp"

namespace ptkerr {

// Column-oriented numeric table with a JSON metadata block. CSV output
// carries the metadata in '#'-prefixed header lines so every artifact
// round-trips to the exact configuration that produced it.
struct DataTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::json meta;

    int col_index(const std::string& column) const;  // -1 if absent
    void add_row(std::initializer_list<double> values);

    std::string to_csv() const;
    nlohmann::json to_json() const;

    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;

    static DataTable read_csv(const std::string& path);
    static DataTable from_csv_text(const std::string& text);
};

}  // namespace ptkerr

#endif
