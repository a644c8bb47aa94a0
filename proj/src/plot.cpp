// Copyright 2026 The qembed Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "qembed/error.hpp"
#include "qembed/experiment.hpp"

namespace qembed {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

struct Accum {
    double mse_all = 0.0;
    double num_linear = 0.0;
    double num_quadratic = 0.0;
    int count = 0;
};

// similarity, k, method, solver
using SeriesKey = std::tuple<std::string, int, std::string, std::string>;

std::string series_file(const SeriesKey& key) {
    const auto& [sim, k, method, solver] = key;
    return "series_" + sim + "_k" + std::to_string(k) + "_" + method + "_" + solver + ".dat";
}

}  // namespace

PlotOutput emit_plots(const fs::path& csv, const fs::path& out_dir) {
    std::ifstream in(csv);
    if (!in) throw Error("cannot open " + csv.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("results file is empty (no header)");
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* need : {"n", "k", "similarity", "method", "solver", "mse_all", "num_linear", "num_quadratic", "error"})
        if (!col.count(need)) throw ParseError(std::string("results file lacks column '") + need + "'");

    // series -> n -> running sums
    std::map<SeriesKey, std::map<int, Accum>> series;
    std::size_t lineno = 1, skipped = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != header.size()) throw ParseError("wrong number of fields", lineno);
        if (!cells[col["error"]].empty()) {
            ++skipped;
            continue;
        }
        try {
            SeriesKey key{cells[col["similarity"]], std::stoi(cells[col["k"]]), cells[col["method"]],
                          cells[col["solver"]]};
            auto& acc = series[key][std::stoi(cells[col["n"]])];
            acc.mse_all += std::stod(cells[col["mse_all"]]);
            acc.num_linear += std::stod(cells[col["num_linear"]]);
            acc.num_quadratic += std::stod(cells[col["num_quadratic"]]);
            ++acc.count;
        } catch (const std::logic_error&) {
            throw ParseError("non-numeric field", lineno);
        }
    }

    PlotOutput out;
    if (skipped) out.warnings.push_back(std::to_string(skipped) + " failed rows skipped");
    if (series.empty()) out.warnings.push_back("no data rows; plots will be empty");
    fs::create_directories(out_dir);

    std::set<std::string> sims;
    std::set<int> dims;
    for (const auto& [key, by_n] : series) {
        sims.insert(std::get<0>(key));
        dims.insert(std::get<1>(key));
        const auto path = out_dir / series_file(key);
        std::ofstream f(path);
        f << "# n mean_mse_all mean_num_linear mean_num_quadratic rows\n";
        for (const auto& [n, a] : by_n)
            f << n << ' ' << a.mse_all / a.count << ' ' << a.num_linear / a.count << ' ' << a.num_quadratic / a.count
              << ' ' << a.count << '\n';
        out.files.push_back(path);
    }

    const auto script_path = out_dir / "plots.gp";
    std::ofstream gp(script_path);
    gp << "# gnuplot " << script_path.filename().string() << "  (run from this directory)\n"
       << "set terminal pngcairo size 1600,1200\n"
       << "set key top right font ',8'\n"
       << "set xlabel 'n'\n";

    auto plot_line = [&](const std::vector<std::pair<SeriesKey, std::string>>& entries, int column) {
        if (entries.empty()) {
            gp << "plot [0:1] NaN notitle\n";
            return;
        }
        gp << "plot ";
        for (std::size_t i = 0; i < entries.size(); ++i)
            gp << (i ? ", \\\n     " : "") << "'" << series_file(entries[i].first) << "' using 1:" << column
               << " with linespoints title '" << entries[i].second << "'";
        gp << '\n';
    };

    gp << "\nset output 'error.png'\n";
    if (series.empty()) {
        gp << "set title 'no data'\n";
        plot_line({}, 2);
    } else {
        gp << "set multiplot layout " << sims.size() << "," << dims.size() << " title 'mean mse_all vs n'\n"
           << "set ylabel 'mse_all'\n";
        for (const auto& sim : sims)
            for (int k : dims) {
                gp << "set title '" << sim << ", k=" << k << "'\n";
                std::vector<std::pair<SeriesKey, std::string>> entries;
                for (const auto& [key, _] : series)
                    if (std::get<0>(key) == sim && std::get<1>(key) == k)
                        entries.emplace_back(key, std::get<2>(key) + "+" + std::get<3>(key));
                plot_line(entries, 2);
            }
        gp << "unset multiplot\n";
    }

    gp << "\nset output 'size.png'\n";
    if (series.empty()) {
        gp << "set title 'no data'\n";
        plot_line({}, 3);
    } else {
        gp << "set multiplot layout 2," << dims.size() << " title 'QUBO size vs n'\n";
        for (int column : {3, 4}) {
            gp << "set ylabel '" << (column == 3 ? "linear terms" : "quadratic terms") << "'\n";
            for (int k : dims) {
                gp << "set title 'k=" << k << "'\n";
                std::vector<std::pair<SeriesKey, std::string>> entries;
                for (const auto& [key, _] : series)
                    if (std::get<1>(key) == k && std::get<3>(key) == std::get<3>(series.begin()->first))
                        entries.emplace_back(key, std::get<0>(key) + "/" + std::get<2>(key));
                plot_line(entries, column);
            }
        }
        gp << "unset multiplot\n";
    }
    out.files.push_back(script_path);
    return out;
}

}  // namespace qembed
