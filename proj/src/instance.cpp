#include "anticonc/instance.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace anticonc {

namespace {

using json = nlohmann::json;

class FieldReader {
  public:
    FieldReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {}

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw InputError(where_ + ": field '" + field + "': " + what);
    }

    [[nodiscard]] bool has(const std::string& field) const { return obj_.contains(field) && !obj_[field].is_null(); }

    double number(const std::string& field, double fallback) const {
        if (!has(field)) return fallback;
        const json& v = obj_[field];
        if (!v.is_number()) fail(field, "expected a number");
        return v.get<double>();
    }

    std::optional<double> optional_number(const std::string& field) const {
        if (!has(field)) return std::nullopt;
        return number(field, 0.0);
    }

    std::uint64_t count(const std::string& field, std::uint64_t fallback) const {
        if (!has(field)) return fallback;
        const json& v = obj_[field];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(field, "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& field, const std::string& fallback) const {
        if (!has(field)) return fallback;
        const json& v = obj_[field];
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    }

    const json& at(const std::string& field) const {
        if (!has(field)) fail(field, "missing");
        return obj_[field];
    }

  private:
    const json& obj_;
    std::string where_;
};

std::vector<double> number_list(const json& v, const FieldReader& rd, const std::string& field) {
    if (!v.is_array()) rd.fail(field, "expected an array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) rd.fail(field, "expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

// [x1, x2, ...] as scalar points or [[..], [..]] as rows; returns (dim, row-major coords).
std::pair<std::size_t, std::vector<double>> point_rows(const json& v, const FieldReader& rd, const std::string& field) {
    if (!v.is_array() || v.empty()) rd.fail(field, "expected a nonempty array");
    if (!v.front().is_array()) return {1, number_list(v, rd, field)};
    const std::size_t d = v.front().size();
    if (d == 0) rd.fail(field, "rows must be nonempty");
    std::vector<double> coords;
    for (const auto& row : v) {
        if (!row.is_array() || row.size() != d) rd.fail(field, "rows must all have the same length");
        const auto r = number_list(row, rd, field);
        coords.insert(coords.end(), r.begin(), r.end());
    }
    return {d, coords};
}

DiscreteDistribution distribution_from(const json& v, const FieldReader& rd, const std::string& field) {
    try {
        if (v.is_string()) return parse_named_distribution(v.get<std::string>());
        if (!v.is_object()) rd.fail(field, "expected a shorthand string or an object");
        const FieldReader sub(v, "distribution");
        auto [d, coords] = point_rows(sub.at("atoms"), rd, field + ".atoms");
        const auto weights = number_list(sub.at("weights"), rd, field + ".weights");
        const bool normalized = v.contains("normalized") ? v["normalized"].get<bool>() : true;
        return DiscreteDistribution(PointCloud(d, std::move(coords)), weights, normalized);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        rd.fail(field, e.what());
    }
}

void apply_constants(ConstantsConfig& c, const json& v, const FieldReader& rd, const std::string& field) {
    if (!v.is_object()) rd.fail(field, "expected an object");
    for (const auto& [key, val] : v.items()) {
        if (!val.is_number()) rd.fail(field + "." + key, "expected a number");
        try {
            c.set(key, val.get<double>());
        } catch (const std::exception& e) {
            rd.fail(field + "." + key, e.what());
        }
    }
}

InstanceSpec instance_from(const json& obj, const std::string& source, std::size_t index) {
    if (!obj.is_object()) throw InputError(source + ": instance " + std::to_string(index) + " is not an object");
    std::string where = source;
    if (obj.contains("id") && obj["id"].is_string()) where += " [" + obj["id"].get<std::string>() + "]";
    const FieldReader rd(obj, where);

    InstanceSpec spec;
    spec.id = rd.text("id", "instance-" + std::to_string(index));
    if (rd.has("distribution")) spec.X = distribution_from(obj["distribution"], rd, "distribution");
    {
        auto [d, coords] = point_rows(rd.at("weights"), rd, "weights");
        try {
            spec.a = WeightVector(d, std::move(coords));
        } catch (const std::exception& e) {
            rd.fail("weights", e.what());
        }
    }
    spec.tau = rd.number("tau", spec.tau);
    spec.kappa = rd.number("kappa", spec.kappa);
    spec.delta = rd.number("delta", spec.delta);
    spec.r = rd.count("r", spec.r);
    spec.m = rd.count("m", spec.m);
    spec.s = rd.count("s", spec.s);
    spec.gamma = rd.number("gamma", spec.gamma);
    spec.alpha = rd.number("alpha", spec.alpha);
    spec.theta_max = rd.number("theta_max", spec.theta_max);
    spec.lcd_tol = rd.number("lcd_tol", spec.lcd_tol);
    spec.D = rd.optional_number("D");
    spec.b = rd.number("b", spec.b);
    spec.n_prime = rd.number("n_prime", spec.n_prime);
    spec.mc_samples = rd.count("mc_samples", spec.mc_samples);
    if (rd.has("constants")) apply_constants(spec.constants, obj["constants"], rd, "constants");
    if (rd.has("expected")) {
        const json& e = obj["expected"];
        if (!e.is_object()) rd.fail("expected", "expected an object");
        const FieldReader er(e, where + " expected");
        spec.expected.q_exact = er.optional_number("q_exact");
        spec.expected.p = er.optional_number("p");
        spec.expected.lambda = er.optional_number("lambda");
        spec.expected.M = er.optional_number("M");
        spec.expected.lcd_D = er.optional_number("lcd_D");
        spec.expected.beta = er.optional_number("beta");
        spec.expected.gamma = er.optional_number("gamma");
    }

    if (!(spec.tau >= 0.0)) rd.fail("tau", "must be nonnegative");
    if (!(spec.kappa > 0.0)) rd.fail("kappa", "must be positive");
    if (!(spec.delta > 0.0)) rd.fail("delta", "must be positive");
    if (spec.m == 0) rd.fail("m", "must be >= 1");
    if (spec.s == 0) rd.fail("s", "must be >= 1");
    if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) rd.fail("gamma", "must lie in (0, 1)");
    if (!(spec.alpha > 0.0)) rd.fail("alpha", "must be positive");
    if (!(spec.lcd_tol > 0.0)) rd.fail("lcd_tol", "must be positive");
    if (spec.D && !(*spec.D > 0.0)) rd.fail("D", "must be positive");
    if (!(spec.b > 0.0)) rd.fail("b", "must be positive");
    if (spec.mc_samples < 1000) rd.fail("mc_samples", "must be >= 1000");
    if (spec.X.dim() != 1) rd.fail("distribution", "X must be scalar");
    return spec;
}

json parse_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": malformed JSON: " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

InstanceSpec parse_instance(const std::string& json_text, const std::string& source) {
    return instance_from(parse_text(json_text, source), source, 0);
}

std::vector<InstanceSpec> load_instance_file(const std::filesystem::path& path) {
    const std::string source = path.filename().string();
    const json doc = parse_text(read_file(path), source);
    const json* list = &doc;
    if (doc.is_object() && doc.contains("instances")) list = &doc["instances"];
    std::vector<InstanceSpec> out;
    if (list->is_array()) {
        for (std::size_t i = 0; i < list->size(); ++i) out.push_back(instance_from((*list)[i], source, i));
    } else {
        out.push_back(instance_from(*list, source, 0));
    }
    return out;
}

std::vector<InstanceSpec> load_corpus(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<InstanceSpec> out;
    for (const auto& f : files) {
        auto part = load_instance_file(f);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

void apply_constants_json(ConstantsConfig& constants, const std::string& json_text, const std::string& source) {
    const json doc = parse_text(json_text, source);
    const FieldReader rd(doc, source);
    apply_constants(constants, doc, rd, "constants");
}

DiscreteDistribution parse_distribution_json(const std::string& json_text) {
    const json doc = parse_text(json_text, "distribution");
    const json wrapper = json{{"distribution", doc}};
    const FieldReader rd(wrapper, "distribution");
    return distribution_from(wrapper["distribution"], rd, "distribution");
}

}  // namespace anticonc
