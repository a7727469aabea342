// SPDX-License-Identifier: Apache-2.0

#include "maxcon/dataio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "maxcon/errors.hpp"
#include "maxcon/rng.hpp"

namespace maxcon {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_double(v[i]);
    }
    os << ']';
}

void write_index_set(std::ostream& os, const IndexSet& s) {
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
    }
    os << ']';
}

// --- parsing helpers -------------------------------------------------------

const json& require_field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end())
        throw ParseError(std::string("missing field '") + name + "'");
    return *it;
}

double require_number(const json& obj, const char* name) {
    const json& f = require_field(obj, name);
    if (!f.is_number())
        throw ParseError(std::string("field '") + name + "' must be a number");
    return f.get<double>();
}

Eigen::VectorXd require_vector(const json& obj, const char* name) {
    const json& f = require_field(obj, name);
    if (!f.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
    Eigen::Index k = 0;
    for (const auto& x : f) {
        if (!x.is_number())
            throw ParseError(std::string("field '") + name + "' must contain numbers");
        v[k++] = x.get<double>();
    }
    return v;
}

IndexSet require_index_set(const json& obj, const char* name) {
    const json& f = require_field(obj, name);
    if (!f.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
    IndexSet s;
    for (const auto& x : f) {
        if (!x.is_number_integer())
            throw ParseError(std::string("field '") + name + "' must contain integers");
        s.push_back(x.get<Index>());
    }
    return s;
}

}  // namespace

void GeneratorSpec::validate() const {
    if (n < 1 || d < 1) throw std::invalid_argument("generator needs n >= 1 and d >= 1");
    if (o < 0 || o > n) throw std::invalid_argument("outlier count must lie in [0, n]");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(inlier_noise >= 0.0) || inlier_noise > epsilon)
        throw std::invalid_argument("inlier noise must lie in [0, epsilon]");
    if (!(outlier_noise_lo >= inlier_noise) || !(outlier_noise_hi > outlier_noise_lo))
        throw std::invalid_argument("outlier noise range must exclude the inlier band");
}

std::pair<ProblemInstance, GroundTruth> generate_synthetic(const GeneratorSpec& spec) {
    spec.validate();
    SplitMix64 master(spec.seed);

    ProblemInstance inst;
    inst.kind = ResidualKind::Linear;
    inst.dim = spec.d;
    inst.epsilon = spec.epsilon;

    GroundTruth gt;
    SplitMix64 model_stream = master.split(0);
    gt.theta_true.theta.resize(spec.d);
    for (int k = 0; k < spec.d; ++k) gt.theta_true.theta[k] = model_stream.uniform(-1.0, 1.0);

    // Draw the outlier positions by a partial Fisher-Yates pass.
    SplitMix64 pick_stream = master.split(1);
    std::vector<Index> order(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    for (int k = 0; k < spec.o; ++k) {
        const auto j =
            k + static_cast<int>(pick_stream.next_below(order.size() - static_cast<std::size_t>(k)));
        std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(j)]);
    }
    IndexSet outliers(order.begin(), order.begin() + spec.o);
    canonicalize(outliers);

    for (Index i = 1; i <= spec.n; ++i) {
        SplitMix64 point_stream = master.split(1000 + static_cast<std::uint64_t>(i));
        LinearDatum p;
        p.a.resize(spec.d);
        for (int k = 0; k < spec.d; ++k) p.a[k] = point_stream.uniform(-1.0, 1.0);
        const double clean = p.a.dot(gt.theta_true.theta);
        double noise;
        if (contains(outliers, i)) {
            do {
                const double magnitude =
                    point_stream.uniform(spec.outlier_noise_lo, spec.outlier_noise_hi);
                const double sign = point_stream.next_u64() & 1 ? 1.0 : -1.0;
                noise = sign * magnitude;
            } while (!(std::abs(noise) > spec.epsilon));
            gt.outlier_indices.push_back(i);
        } else {
            noise = point_stream.uniform(-spec.inlier_noise, spec.inlier_noise);
            gt.inlier_indices.push_back(i);
        }
        p.b = clean + noise;
        inst.linear.push_back(std::move(p));
    }
    inst.validate();
    return {std::move(inst), std::move(gt)};
}

std::string serialize_instance(const ProblemInstance& instance,
                               const GroundTruth* ground_truth) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"version\": " << kFormatVersion << ",\n";
    os << "  \"kind\": \"" << (instance.kind == ResidualKind::Linear ? "linear" : "fractional")
       << "\",\n";
    os << "  \"dim\": " << instance.dim << ",\n";
    os << "  \"epsilon\": " << format_double(instance.epsilon) << ",\n";
    os << "  \"points\": [\n";
    const Index n = instance.size();
    for (Index i = 0; i < n; ++i) {
        os << "    ";
        if (instance.kind == ResidualKind::Linear) {
            const auto& p = instance.linear[static_cast<std::size_t>(i)];
            os << "{\"a\": ";
            write_vector(os, p.a);
            os << ", \"b\": " << format_double(p.b) << '}';
        } else {
            const auto& p = instance.fractional[static_cast<std::size_t>(i)];
            os << "{\"A\": [";
            for (Eigen::Index col = 0; col < p.A.cols(); ++col) {
                if (col) os << ',';
                write_vector(os, p.A.col(col));
            }
            os << "], \"b\": ";
            write_vector(os, p.b);
            os << ", \"c\": ";
            write_vector(os, p.c);
            os << ", \"d0\": " << format_double(p.d0);
            os << ", \"norm\": \"inf\"}";
        }
        os << (i + 1 < n ? ",\n" : "\n");
    }
    os << "  ]";
    if (ground_truth) {
        os << ",\n  \"ground_truth\": {\n";
        os << "    \"theta\": ";
        write_vector(os, ground_truth->theta_true.theta);
        os << ",\n    \"inliers\": ";
        write_index_set(os, ground_truth->inlier_indices);
        os << ",\n    \"outliers\": ";
        write_index_set(os, ground_truth->outlier_indices);
        os << "\n  }";
    }
    os << "\n}\n";
    return os.str();
}

LoadedInstance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("top level must be an object");

    LoadedInstance out;
    ProblemInstance& inst = out.instance;

    const json& version = require_field(doc, "version");
    if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
        throw ParseError("field 'version' must be 1");

    const json& kind = require_field(doc, "kind");
    if (kind == "linear")
        inst.kind = ResidualKind::Linear;
    else if (kind == "fractional")
        inst.kind = ResidualKind::Fractional;
    else
        throw ParseError("field 'kind' must be \"linear\" or \"fractional\"");

    const json& dim = require_field(doc, "dim");
    if (!dim.is_number_integer() || dim.get<int>() < 1)
        throw ParseError("field 'dim' must be a positive integer");
    inst.dim = dim.get<int>();
    inst.epsilon = require_number(doc, "epsilon");

    const json& points = require_field(doc, "points");
    if (!points.is_array() || points.empty())
        throw ParseError("field 'points' must be a non-empty array");

    for (const auto& pj : points) {
        if (!pj.is_object()) throw ParseError("each point must be an object");
        if (inst.kind == ResidualKind::Linear) {
            LinearDatum p;
            p.a = require_vector(pj, "a");
            if (p.a.size() != inst.dim)
                throw DimensionMismatch("regressor length disagrees with 'dim'");
            p.b = require_number(pj, "b");
            inst.linear.push_back(std::move(p));
        } else {
            const json& aj = require_field(pj, "A");
            if (!aj.is_array() || aj.empty())
                throw ParseError("field 'A' must be a non-empty array of columns");
            FractionalDatum p;
            const auto m = static_cast<Eigen::Index>(aj.size());
            p.A.resize(inst.dim, m);
            Eigen::Index col = 0;
            for (const auto& cj : aj) {
                if (!cj.is_array() || static_cast<int>(cj.size()) != inst.dim)
                    throw DimensionMismatch("column of 'A' disagrees with 'dim'");
                Eigen::Index row = 0;
                for (const auto& x : cj) {
                    if (!x.is_number()) throw ParseError("field 'A' must contain numbers");
                    p.A(row++, col) = x.get<double>();
                }
                ++col;
            }
            p.b = require_vector(pj, "b");
            if (p.b.size() != m) throw DimensionMismatch("'b' length disagrees with 'A'");
            p.c = require_vector(pj, "c");
            if (p.c.size() != inst.dim)
                throw DimensionMismatch("'c' length disagrees with 'dim'");
            p.d0 = require_number(pj, "d0");
            const json& norm = require_field(pj, "norm");
            if (norm != "inf") throw ParseError("field 'norm' must be \"inf\"");
            inst.fractional.push_back(std::move(p));
        }
    }

    if (auto it = doc.find("ground_truth"); it != doc.end()) {
        const json& gj = *it;
        if (!gj.is_object()) throw ParseError("field 'ground_truth' must be an object");
        GroundTruth gt;
        gt.theta_true.theta = require_vector(gj, "theta");
        if (gt.theta_true.theta.size() != inst.dim)
            throw DimensionMismatch("'ground_truth.theta' length disagrees with 'dim'");
        gt.inlier_indices = require_index_set(gj, "inliers");
        gt.outlier_indices = require_index_set(gj, "outliers");
        out.ground_truth = std::move(gt);
    }

    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return out;
}

void save_instance(const std::string& path, const ProblemInstance& instance,
                   const GroundTruth* ground_truth) {
    const std::string payload = serialize_instance(instance, ground_truth);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw SolverError("cannot open '" + tmp + "' for writing");
        os << payload;
        if (!os) throw SolverError("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

LoadedInstance load_instance(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_instance(buf.str());
}

}  // namespace maxcon
