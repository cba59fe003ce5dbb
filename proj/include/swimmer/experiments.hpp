#pragma once

// Table reproductions: the published rows, the configurations that rerun
// them, and the measured-vs-published comparison documents.

#include "swimmer/dynamics.hpp"
#include "swimmer/ocp.hpp"
#include "swimmer/simulate.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace swimmer {

struct PublishedRow {
    std::string label;  // as printed, e.g. "pi/5"
    double key = 0.0;   // b for tables 1 and 2, a for table 3
    double dx = 0.0;
    double ratio = 0.0;
    std::string stroke;
    double dx_purcell = 0.0;  // table 2 only
    double gain = 0.0;        // table 2 only, fraction
};

const std::vector<PublishedRow>& published_table1();  // a = pi/20, T = 1
const std::vector<PublishedRow>& published_table2();  // a = pi/6, T = 1
const std::vector<PublishedRow>& published_table3();  // b = 1, T = 25

// Row whose key matches to 1e-9, if any.
std::optional<PublishedRow> find_published(const std::vector<PublishedRow>& table, double key);

// Small-amplitude table: for each rate bound b, the bound-driven stroke is
// simulated over a sweep of L2/L and the best ratio is reported.
struct Table1Config {
    double a = 0.0;  // default pi/20
    double T = 1.0;
    double c = 4.0;
    DragModel drag;
    std::vector<double> rows;  // b values; default: the published ones
    SweepOptions sweep;

    Table1Config();
    void validate() const;
};

// Optimal design vs the classical L = 1, L2 = 2 swimmer on the same strokes.
struct Table2Config {
    double a = 0.0;  // default pi/6
    double T = 1.0;
    double c = 4.0;
    double purcell_L = 1.0;
    double purcell_L2 = 2.0;
    DragModel drag;
    std::vector<double> rows;
    SweepOptions sweep;

    Table2Config();
    void validate() const;
};

// Large-amplitude optimal control runs at desk scale.
struct Table3Config {
    double b = 1.0;
    double T = 8.0;
    int N = 800;
    double c = 4.0;
    DragModel drag;
    std::vector<double> rows;  // a values; default: the published ones
    OcpSolveOptions solve;

    Table3Config();
    void validate() const;
};

nlohmann::json run_table1(const Table1Config& cfg);
nlohmann::json run_table2(const Table2Config& cfg);
nlohmann::json run_table3(const Table3Config& cfg);

void from_json(const nlohmann::json& j, Table1Config& cfg);
void from_json(const nlohmann::json& j, Table2Config& cfg);
void from_json(const nlohmann::json& j, Table3Config& cfg);

void from_json(const nlohmann::json& j, SweepOptions& opts);

}  // namespace swimmer
