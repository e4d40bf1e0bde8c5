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

#include "qwres/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qwres/errors.h"

namespace qwres {

using nlohmann::json;

std::string to_string(Task task) {
    switch (task) {
        case Task::kPauli:
            return "pauli";
        case Task::kWitness:
            return "witness";
        case Task::kOptimize:
            return "optimize";
        case Task::kLandscape:
            return "landscape";
        case Task::kResample:
            return "resample";
        case Task::kRobustness:
            return "robustness";
    }
    return "?";
}

std::string to_string(Objective objective) { return objective == Objective::kPauli ? "pauli" : "witness"; }

std::string to_string(FeatureMode mode) {
    return mode == FeatureMode::kRenormalized ? "renormalized" : "unconditional";
}

namespace {

// Derived-seed slots; fixed forever so that configs stay reproducible.
enum SeedSlot : std::uint64_t {
    kTrainSeed = 1,
    kTestSeed = 2,
    kNoiseSeed = 3,
    kMonteCarloSeed = 4,
    kOptimizerSeed = 5,
    kLandscapeSeed = 6,
    kJitterSeed = 7,
    kInitSeed = 8,
};

/// Reads one JSON object, records every value it hands out (defaults included) into `out`,
/// and rejects keys it was never asked about.
class Node {
   public:
    Node(const json *in, std::string path, json &out) : in_(in), path_(std::move(path)), out_(out) {
        out_ = json::object();
        if (in_ != nullptr && !in_->is_object()) {
            throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    const json *find(const std::string &key) {
        seen_.insert(key);
        if (in_ == nullptr) {
            return nullptr;
        }
        auto it = in_->find(key);
        return it == in_->end() ? nullptr : &*it;
    }

    bool has(const std::string &key) const { return in_ != nullptr && in_->contains(key); }

    double number(const std::string &key, double fallback) {
        const json *v = find(key);
        double x = fallback;
        if (v != nullptr) {
            if (!v->is_number()) {
                throw ValidationError(field(key), "expected a number");
            }
            x = v->get<double>();
        }
        if (!std::isfinite(x)) {
            throw ValidationError(field(key), "must be finite");
        }
        out_[key] = x;
        return x;
    }

    long integer(const std::string &key, long fallback) {
        const json *v = find(key);
        long x = fallback;
        if (v != nullptr) {
            if (!v->is_number_integer()) {
                throw ValidationError(field(key), "expected an integer");
            }
            x = v->get<long>();
        }
        out_[key] = x;
        return x;
    }

    std::uint64_t seed(const std::string &key, std::uint64_t fallback) {
        const json *v = find(key);
        std::uint64_t x = fallback;
        if (v != nullptr) {
            if (!v->is_number_unsigned()) {
                throw ValidationError(field(key), "expected a nonnegative integer seed");
            }
            x = v->get<std::uint64_t>();
        }
        out_[key] = x;
        return x;
    }

    bool boolean(const std::string &key, bool fallback) {
        const json *v = find(key);
        bool x = fallback;
        if (v != nullptr) {
            if (!v->is_boolean()) {
                throw ValidationError(field(key), "expected true or false");
            }
            x = v->get<bool>();
        }
        out_[key] = x;
        return x;
    }

    std::string string(const std::string &key, const std::string &fallback) {
        const json *v = find(key);
        std::string x = fallback;
        if (v != nullptr) {
            if (!v->is_string()) {
                throw ValidationError(field(key), "expected a string");
            }
            x = v->get<std::string>();
        }
        out_[key] = x;
        return x;
    }

    /// Number or null; null and absent both mean "not set" and are echoed as null.
    std::optional<double> optional_number(const std::string &key) {
        const json *v = find(key);
        if (v == nullptr || v->is_null()) {
            out_[key] = nullptr;
            return std::nullopt;
        }
        if (!v->is_number()) {
            throw ValidationError(field(key), "expected a number or null");
        }
        out_[key] = v->get<double>();
        return v->get<double>();
    }

    Node child(const std::string &key) { return Node(find(key), field(key), out_[key]); }

    /// Raw access for arrays; the caller records the echo through `out()`.
    json &out() { return out_; }

    void finish() const {
        if (in_ == nullptr) {
            return;
        }
        for (auto it = in_->begin(); it != in_->end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ValidationError(field(it.key()), "unknown key");
            }
        }
    }

   private:
    const json *in_;
    std::string path_;
    json &out_;
    std::set<std::string> seen_;
};

template <typename E>
E choose(const std::string &field, const std::string &value, std::initializer_list<std::pair<const char *, E>> options) {
    std::string allowed;
    for (const auto &[name, e] : options) {
        if (value == name) {
            return e;
        }
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    throw ValidationError(field, "unknown value '" + value + "' (expected one of: " + allowed + ")");
}

std::string element_kind_name(ElementKind kind) {
    switch (kind) {
        case ElementKind::kHalfWave:
            return "hwp";
        case ElementKind::kQuarterWave:
            return "qwp";
        case ElementKind::kQPlate:
            return "qplate";
    }
    return "?";
}

WalkSpec read_walk(Node node) {
    WalkSpec spec;
    const WalkSpec fallback = WalkSpec::default_two_step();
    Node reg = node.child("register");
    spec.reg.m_min = static_cast<int>(reg.integer("m_min", fallback.reg.m_min));
    spec.reg.m_max = static_cast<int>(reg.integer("m_max", fallback.reg.m_max));
    reg.finish();
    if (spec.reg.m_max < spec.reg.m_min) {
        throw ValidationError(reg.field("m_max"), "must be >= m_min");
    }
    if (!spec.reg.contains(0)) {
        throw ValidationError(node.field("register"), "must contain m = 0");
    }
    spec.allow_truncation = node.boolean("allow_truncation", false);

    const json *elements = node.find("elements");
    json echo = json::array();
    if (elements == nullptr) {
        spec.elements = fallback.elements;
    } else {
        if (!elements->is_array()) {
            throw ValidationError(node.field("elements"), "expected an array");
        }
        for (std::size_t i = 0; i < elements->size(); ++i) {
            json scratch;
            Node e(&(*elements)[i], node.field("elements") + "[" + std::to_string(i) + "]", scratch);
            const std::string kind = e.string("kind", "");
            if (kind == "hwp" || kind == "qwp") {
                double angle = e.number("angle_deg", 0.0);
                spec.elements.push_back(kind == "hwp" ? OpticalElement::hwp(angle) : OpticalElement::qwp(angle));
            } else if (kind == "qplate") {
                double q = e.number("charge", 0.5);
                double twice = 2.0 * q;
                if (std::abs(twice - std::round(twice)) > 1e-12) {
                    throw ValidationError(e.field("charge"), "must be a half-integer");
                }
                spec.elements.push_back(OpticalElement::qplate(q, e.number("delta_rad", kPi)));
            } else {
                throw ValidationError(e.field("kind"), "expected hwp, qwp or qplate");
            }
            e.finish();
        }
    }
    node.out()["elements"] = walk_to_json(spec)["elements"];
    node.finish();
    try {
        (void)build_walk(spec);
    } catch (const TruncationError &err) {
        throw ValidationError(node.field("elements"), err.what());
    }
    return spec;
}

MeasurementSettings read_settings(Node node) {
    double theta = node.number("theta_deg", 0.0);
    double phi = node.number("phi_deg", 0.0);
    double grid = node.number("grid_deg", 0.1);
    if (grid < 0.0) {
        throw ValidationError(node.field("grid_deg"), "must be nonnegative");
    }
    node.finish();
    MeasurementSettings s(theta, phi, grid);
    // Echo the stored (snapped) angles so the echo is a fixed point.
    node.out()["theta_deg"] = s.theta();
    node.out()["phi_deg"] = s.phi();
    return s;
}

DatasetSpec read_dataset(Node node, const DatasetSpec &fallback) {
    DatasetSpec d;
    d.kind = choose<DatasetKind>(node.field("kind"), node.string("kind", to_string(fallback.kind)),
                                 {{"haar_qubit", DatasetKind::kHaarQubit},
                                  {"local_rotations_hh", DatasetKind::kLocalRotationsHH},
                                  {"local_rotations_psi_minus", DatasetKind::kLocalRotationsPsiMinus}});
    d.size = static_cast<int>(node.integer("size", fallback.size));
    if (d.size < 1) {
        throw ValidationError(node.field("size"), "must be >= 1");
    }
    d.seed = node.seed("seed", fallback.seed);
    node.finish();
    return d;
}

GridAxis read_axis(Node node, const GridAxis &fallback) {
    GridAxis a;
    a.start = node.number("start", fallback.start);
    a.step = node.number("step", fallback.step);
    a.count = static_cast<int>(node.integer("count", fallback.count));
    if (a.count < 1) {
        throw ValidationError(node.field("count"), "must be >= 1");
    }
    node.finish();
    return a;
}

int line_of(const std::string &text, std::size_t offset, int *column) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    *column = col;
    return line;
}

}  // namespace

json walk_to_json(const WalkSpec &walk) {
    json elements = json::array();
    for (const auto &e : walk.elements) {
        json j;
        j["kind"] = element_kind_name(e.kind);
        if (e.kind == ElementKind::kQPlate) {
            j["charge"] = e.charge();
            j["delta_rad"] = e.delta_rad;
        } else {
            j["angle_deg"] = e.angle_deg;
        }
        elements.push_back(j);
    }
    return {{"register", {{"m_min", walk.reg.m_min}, {"m_max", walk.reg.m_max}}},
            {"allow_truncation", walk.allow_truncation},
            {"elements", elements}};
}

RunConfig parse_config_text(const std::string &text, std::optional<std::uint64_t> seed_override) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error &e) {
        int column = 0;
        int line = line_of(text, e.byte > 0 ? e.byte - 1 : 0, &column);
        throw ParseError("malformed config at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
    }
    if (!in.is_object()) {
        throw ValidationError("<root>", "expected a JSON object");
    }
    if (seed_override) {
        in["seed"] = *seed_override;
    }

    RunConfig cfg;
    json echo;
    Node root(&in, "", echo);

    long version = root.integer("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
        throw ValidationError("schema_version", "unsupported schema version " + std::to_string(version));
    }
    if (!root.has("task")) {
        throw ValidationError("task", "missing required key");
    }
    cfg.task = choose<Task>("task", root.string("task", ""),
                            {{"pauli", Task::kPauli},
                             {"witness", Task::kWitness},
                             {"optimize", Task::kOptimize},
                             {"landscape", Task::kLandscape},
                             {"resample", Task::kResample},
                             {"robustness", Task::kRobustness}});
    const bool witness_task = cfg.task == Task::kWitness || cfg.task == Task::kRobustness;
    cfg.objective = choose<Objective>("objective", root.string("objective", witness_task ? "witness" : "pauli"),
                                      {{"pauli", Objective::kPauli}, {"witness", Objective::kWitness}});
    if ((cfg.task == Task::kPauli && cfg.objective != Objective::kPauli) ||
        (witness_task && cfg.objective != Objective::kWitness)) {
        throw ValidationError("objective", "does not match task " + to_string(cfg.task));
    }
    const bool two_line = cfg.objective == Objective::kWitness;
    const std::uint64_t seed = root.seed("seed", 0);
    cfg.seed = seed;

    if (const json *dir = root.find("output_dir")) {
        if (!dir->is_string()) {
            throw ValidationError("output_dir", "expected a string");
        }
        cfg.output_dir = dir->get<std::string>();
        echo["output_dir"] = *cfg.output_dir;
    }
    cfg.threads = static_cast<int>(root.integer("threads", 1));
    if (cfg.threads < 1) {
        throw ValidationError("threads", "must be >= 1");
    }

    cfg.walk = read_walk(root.child("walk"));
    cfg.settings = read_settings(root.child("settings"));
    if (two_line) {
        cfg.walk2 = read_walk(root.child("walk2"));
        cfg.settings2 = read_settings(root.child("settings2"));
    } else {
        for (const char *key : {"walk2", "settings2", "witness"}) {
            if (root.has(key)) {
                throw ValidationError(key, "only used by two-line (witness) objectives");
            }
        }
    }
    cfg.mode = choose<FeatureMode>("feature_mode", root.string("feature_mode", "renormalized"),
                                   {{"renormalized", FeatureMode::kRenormalized},
                                    {"unconditional", FeatureMode::kUnconditional}});

    {
        Node noise = root.child("noise");
        cfg.noise.enabled = noise.boolean("enabled", true);
        cfg.noise.classical.relative_error = noise.number("relative_error", 0.03);
        cfg.noise.classical.n_samples = static_cast<int>(noise.integer("n_samples", 10));
        cfg.noise.classical.tau_seconds = noise.number("tau_seconds", 10.0);
        cfg.noise.shots = noise.integer("shots", two_line ? 300 : 3000);
        cfg.noise_seed = noise.seed("seed", mix_seed(seed, kNoiseSeed));
        if (cfg.noise.classical.relative_error < 0.0) {
            throw ValidationError(noise.field("relative_error"), "must be >= 0");
        }
        if (cfg.noise.classical.n_samples < 1) {
            throw ValidationError(noise.field("n_samples"), "must be >= 1");
        }
        if (!(cfg.noise.classical.tau_seconds > 0.0)) {
            throw ValidationError(noise.field("tau_seconds"), "must be > 0");
        }
        if (cfg.noise.shots < 1) {
            throw ValidationError(noise.field("shots"), "must be >= 1");
        }
        noise.finish();
    }

    {
        Node datasets = root.child("datasets");
        DatasetSpec train_fallback{two_line ? DatasetKind::kLocalRotationsHH : DatasetKind::kHaarQubit,
                                   two_line ? 400 : 100, mix_seed(seed, kTrainSeed)};
        DatasetSpec test_fallback{two_line ? DatasetKind::kLocalRotationsPsiMinus : DatasetKind::kHaarQubit,
                                  two_line ? (cfg.task == Task::kRobustness ? 56 : 58) : 100,
                                  mix_seed(seed, kTestSeed)};
        cfg.train = read_dataset(datasets.child("train"), train_fallback);
        cfg.test = read_dataset(datasets.child("test"), test_fallback);
        datasets.finish();
        if (two_line) {
            if (cfg.train.kind != DatasetKind::kLocalRotationsHH) {
                throw ValidationError("datasets.train.kind", "two-line objectives train on local_rotations_hh");
            }
            if (cfg.test.kind == DatasetKind::kHaarQubit) {
                throw ValidationError("datasets.test.kind", "two-line objectives test on two-qubit states");
            }
        } else if (cfg.train.kind != DatasetKind::kHaarQubit || cfg.test.kind != DatasetKind::kHaarQubit) {
            throw ValidationError("datasets", "single-line objectives use haar_qubit datasets");
        }
    }

    if (two_line) {
        cfg.witness = choose<BellState>("witness", root.string("witness", "psi+"),
                                        {{"psi+", BellState::kPsiPlus},
                                         {"psi-", BellState::kPsiMinus},
                                         {"phi+", BellState::kPhiPlus},
                                         {"phi-", BellState::kPhiMinus}});
    } else {
        cfg.observables = root.string("observables", "XYZ");
        if (cfg.observables.empty()) {
            throw ValidationError("observables", "must name at least one Pauli");
        }
        for (char c : cfg.observables) {
            if (c != 'X' && c != 'Y' && c != 'Z') {
                throw ValidationError("observables", "expected letters from XYZ");
            }
        }
    }

    {
        const json *sizes = root.find("curve_sizes");
        if (sizes == nullptr) {
            cfg.curve_sizes =
                two_line ? WitnessExperimentConfig{}.curve_sizes : default_curve_sizes();
        } else {
            if (!sizes->is_array()) {
                throw ValidationError("curve_sizes", "expected an array of integers");
            }
            for (const auto &v : *sizes) {
                if (!v.is_number_integer() || v.get<long>() < 1) {
                    throw ValidationError("curve_sizes", "entries must be positive integers");
                }
                cfg.curve_sizes.push_back(v.get<int>());
            }
            for (std::size_t i = 1; i < cfg.curve_sizes.size(); ++i) {
                if (cfg.curve_sizes[i] <= cfg.curve_sizes[i - 1]) {
                    throw ValidationError("curve_sizes", "must be strictly increasing");
                }
            }
        }
        echo["curve_sizes"] = cfg.curve_sizes;
    }

    {
        Node readout = root.child("readout");
        cfg.readout.svd_cutoff = readout.number("svd_cutoff", 1e-12);
        cfg.readout.ridge = readout.optional_number("ridge");
        if (!(cfg.readout.svd_cutoff > 0.0 && cfg.readout.svd_cutoff < 1.0)) {
            throw ValidationError(readout.field("svd_cutoff"), "must lie in (0, 1)");
        }
        if (cfg.readout.ridge && !(*cfg.readout.ridge > 0.0)) {
            throw ValidationError(readout.field("ridge"), "must be positive or null");
        }
        readout.finish();
    }

    {
        Node mc = root.child("monte_carlo");
        cfg.monte_carlo_enabled = mc.boolean("enabled", true);
        cfg.monte_carlo.resamples = static_cast<int>(mc.integer("resamples", 100));
        cfg.monte_carlo.seed = mc.seed("seed", mix_seed(seed, kMonteCarloSeed));
        if (cfg.monte_carlo.resamples < 2) {
            throw ValidationError(mc.field("resamples"), "must be >= 2");
        }
        mc.finish();
    }

    {
        Node opt = root.child("optimizer");
        OptimizerConfig &o = cfg.optimizer;
        o.learning_rate = opt.number("learning_rate", 0.8);
        o.fd_step_deg = opt.number("fd_step_deg", 2.87);
        o.angle_grid_deg = opt.number("angle_grid_deg", 0.1);
        o.minibatch_size = static_cast<int>(opt.integer("minibatch_size", 15));
        o.max_iters_per_coordinate = static_cast<int>(opt.integer("max_iters_per_coordinate", 50));
        o.patience = static_cast<int>(opt.integer("patience", 1));
        o.max_sweeps = static_cast<int>(opt.integer("max_sweeps", 100));
        o.max_evaluations = opt.integer("max_evaluations", 0);
        o.improvement_floor = opt.number("improvement_floor", 1e-12);
        o.period_deg = opt.number("period_deg", 180.0);
        o.gradient_unit = choose<GradientUnit>(opt.field("gradient_unit"), opt.string("gradient_unit", "radian"),
                                               {{"radian", GradientUnit::kRadian}, {"degree", GradientUnit::kDegree}});
        o.quantize = opt.boolean("quantize", true);
        o.retry_budget = static_cast<int>(opt.integer("retry_budget", 3));
        o.seed = opt.seed("seed", mix_seed(seed, kOptimizerSeed));
        o.validate();

        const json *init = opt.find("init");
        if (init == nullptr) {
            Rng rng(mix_seed(seed, kInitSeed));
            std::uniform_real_distribution<double> angle(0.0, 180.0);
            for (int k = 0; k < 2; ++k) {
                double a = angle(rng);
                cfg.init.push_back(normalize_angle(a, o.quantize ? o.angle_grid_deg : 0.0, o.period_deg));
            }
        } else {
            if (!init->is_array() || init->size() != 2) {
                throw ValidationError(opt.field("init"), "expected two angles in degrees");
            }
            for (const auto &v : *init) {
                if (!v.is_number()) {
                    throw ValidationError(opt.field("init"), "expected numbers");
                }
                cfg.init.push_back(v.get<double>());
            }
        }
        opt.out()["init"] = cfg.init;
        if (!two_line) {
            cfg.loss_observable = opt.string("observable", "Y");
            if (cfg.loss_observable.size() != 1 || cfg.loss_observable.find_first_of("XYZ") != 0) {
                throw ValidationError(opt.field("observable"), "expected X, Y or Z");
            }
        }
        opt.finish();
    }

    {
        Node land = root.child("landscape");
        GridSpec fallback = two_line ? GridSpec::si_16x16() : GridSpec::si_20x20();
        cfg.landscape.axis1 = read_axis(land.child("axis1"), fallback.axis1);
        cfg.landscape.axis2 = read_axis(land.child("axis2"), fallback.axis2);
        cfg.landscape.repeats = static_cast<int>(land.integer("repeats", 1));
        cfg.landscape.seed = land.seed("seed", mix_seed(seed, kLandscapeSeed));
        if (cfg.landscape.repeats < 1) {
            throw ValidationError(land.field("repeats"), "must be >= 1");
        }
        land.finish();
    }

    {
        Node jitter = root.child("jitter");
        cfg.jitter.max_angle_offset_deg = jitter.number("max_angle_offset_deg", 1.0);
        cfg.jitter.max_delta_offset_rad = jitter.number("max_delta_offset_rad", 0.0);
        cfg.jitter.seed = jitter.seed("seed", mix_seed(seed, kJitterSeed));
        cfg.jitter.fresh_datasets = jitter.boolean("fresh_datasets", true);
        if (cfg.jitter.max_angle_offset_deg < 0.0 || cfg.jitter.max_delta_offset_rad < 0.0) {
            throw ValidationError("jitter", "offsets must be nonnegative");
        }
        jitter.finish();
    }

    root.finish();
    cfg.echo = std::move(echo);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path &path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), seed_override);
}

}  // namespace qwres
