// Copyright 2026 The qwres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwres/report_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qwres/errors.h"

namespace qwres {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string learning_curve_csv(const std::vector<CurvePoint> &curve) {
    std::string out = "n_train,test_mse,sigma\n";
    for (const auto &p : curve) {
        out += std::to_string(p.n_train) + "," + format_double(p.test_mse) + "," + format_double(p.sigma) + "\n";
    }
    return out;
}

std::string scatter_csv(const std::vector<ScatterPoint> &points, const std::string &observable) {
    std::string out = "true_value,predicted_value,split\n";
    for (const auto &p : points) {
        if (p.observable == observable) {
            out += format_double(p.true_value) + "," + format_double(p.predicted_value) + "," + p.split + "\n";
        }
    }
    return out;
}

std::string trace_csv(const OptimizationTrace &trace) {
    std::string out = "step,coordinate";
    for (const auto &name : trace.coordinates) {
        out += "," + name + "_deg";
    }
    out += ",loss\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto &s = trace.steps[i];
        out += std::to_string(i) + "," + s.coordinate;
        for (double a : s.angles) {
            out += "," + format_double(a);
        }
        out += "," + format_double(s.loss) + "\n";
    }
    return out;
}

std::string landscape_csv(const LandscapeGrid &grid, const std::vector<std::string> &coordinates) {
    std::string out;
    for (const auto &name : coordinates) {
        out += name + "_deg,";
    }
    out += "mse,mse_sigma\n";
    for (int i = 0; i < grid.spec.axis1.count; ++i) {
        for (int j = 0; j < grid.spec.axis2.count; ++j) {
            out += format_double(grid.spec.axis1.at(i)) + "," + format_double(grid.spec.axis2.at(j)) + "," +
                   format_double(grid.losses(i, j)) + "," + format_double(grid.sigma(i, j)) + "\n";
        }
    }
    return out;
}

json confusion_json(const Confusion &confusion) {
    return {{"rows", {"true_entangled", "true_separable"}},
            {"columns", {"pred_entangled", "pred_separable"}},
            {"counts",
             {{confusion.counts[0][0], confusion.counts[0][1]}, {confusion.counts[1][0], confusion.counts[1][1]}}},
            {"total", confusion.total()}};
}

json monte_carlo_json(const MonteCarloResult &result) {
    json metrics = json::object();
    for (const auto &[name, s] : result.metrics) {
        metrics[name] = {{"mean", number_or_null(s.mean)}, {"stddev", number_or_null(s.stddev)},
                         {"samples", s.samples}};
    }
    return {{"resamples", result.resamples}, {"failures", result.failures}, {"metrics", metrics}};
}

json report_json(const ExperimentReport &report) {
    json curve = json::array();
    for (const auto &p : report.learning_curve) {
        curve.push_back({{"n_train", p.n_train}, {"test_mse", number_or_null(p.test_mse)},
                         {"sigma", number_or_null(p.sigma)}});
    }
    json readout = json::array();
    for (Eigen::Index r = 0; r < report.readout.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < report.readout.cols(); ++c) {
            row.push_back(number_or_null(report.readout(r, c)));
        }
        readout.push_back(row);
    }
    json out = {{"observables", report.observables},
                {"train_mse", number_or_null(report.train_mse)},
                {"test_mse", number_or_null(report.test_mse)},
                {"learning_curve", curve},
                {"readout_rank", report.readout_rank},
                {"degenerate_features", report.degenerate_features},
                {"readout", readout},
                {"uncertainty", monte_carlo_json(report.uncertainty)}};
    if (report.confusion) {
        out["confusion"] = confusion_json(*report.confusion);
        out["accuracy"] = accuracy(*report.confusion);
    }
    return out;
}

json trace_json(const OptimizationTrace &trace) {
    return {{"coordinates", trace.coordinates},
            {"init", trace.init},
            {"best", trace.best},
            {"best_loss", number_or_null(trace.best_loss)},
            {"evaluations", trace.evaluations},
            {"sweeps", trace.sweeps},
            {"steps", trace.steps.size()},
            {"failed", trace.failed},
            {"failure", trace.failure}};
}

json landscape_json(const LandscapeGrid &grid, const std::vector<std::string> &coordinates) {
    json out = {{"coordinates", coordinates},
                {"axis1", {{"start", grid.spec.axis1.start}, {"step", grid.spec.axis1.step},
                           {"count", grid.spec.axis1.count}}},
                {"axis2", {{"start", grid.spec.axis2.start}, {"step", grid.spec.axis2.step},
                           {"count", grid.spec.axis2.count}}},
                {"repeats", grid.spec.repeats},
                {"missing", grid.missing_count()}};
    if (grid.argmin1 >= 0) {
        out["argmin"] = {{"index", {grid.argmin1, grid.argmin2}},
                         {"angles_deg", {grid.spec.axis1.at(grid.argmin1), grid.spec.axis2.at(grid.argmin2)}},
                         {"mse", grid.min_loss()},
                         {"mse_sigma", grid.sigma(grid.argmin1, grid.argmin2)}};
    }
    return out;
}

void write_file(const std::filesystem::path &path, const std::string &contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << contents;
    out.close();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void write_json(const std::filesystem::path &path, const json &value) { write_file(path, value.dump(2) + "\n"); }

std::string file_token(const std::string &label) {
    std::string out;
    for (char c : label) {
        if (c == '+') {
            out += "_plus";
        } else if (c == '-') {
            out += "_minus";
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            out += c;
        } else {
            out += '_';
        }
    }
    return out;
}

std::vector<std::string> emit_plot_data(const ExperimentReport &report, PlotFormat format,
                                        const std::filesystem::path &dir) {
    std::vector<std::string> files;
    if (format == PlotFormat::kCsv) {
        write_file(dir / "learning_curve.csv", learning_curve_csv(report.learning_curve));
        files.push_back("learning_curve.csv");
        for (const auto &label : report.observables) {
            std::string name = "scatter_" + file_token(label) + ".csv";
            write_file(dir / name, scatter_csv(report.predictions, label));
            files.push_back(name);
        }
    } else {
        json points = json::array();
        for (const auto &p : report.predictions) {
            points.push_back({{"observable", p.observable}, {"true_value", p.true_value},
                              {"predicted_value", p.predicted_value}, {"split", p.split}});
        }
        write_json(dir / "report.json", report_json(report));
        write_json(dir / "scatter.json", points);
        files.push_back("report.json");
        files.push_back("scatter.json");
    }
    if (report.confusion) {
        write_json(dir / "confusion.json", confusion_json(*report.confusion));
        files.push_back("confusion.json");
    }
    return files;
}

}  // namespace qwres
