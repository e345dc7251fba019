#include "gstatarb/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gstatarb/errors.hpp"

namespace gstatarb {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

template <std::size_t N>
std::array<double, N> weights(const json& doc) {
    if (!doc.contains("weights") || !doc["weights"].is_array())
        throw ParseError("missing array 'weights'");
    const auto& w = doc["weights"];
    if (w.size() != N)
        throw ParseError("'weights' must have " + std::to_string(N) + " entries");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!w[i].is_number()) throw ParseError("weights must be numbers");
        out[i] = w[i].get<double>();
    }
    return out;
}

}  // namespace

ModelSpec parse_model_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("model must be a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("missing string 'kind'");
    if (!doc.contains("prices") || !doc["prices"].is_object())
        throw ParseError("missing object 'prices'");
    const std::string kind = doc["kind"];
    const json& p = doc["prices"];

    ModelSpec spec{TwoPeriodBinomial({100, 105, 95, 110, 100, 90}, {0.25, 0.25, 0.25, 0.25})};
    if (doc.contains("alpha")) spec.alpha = number(doc, "alpha");

    if (kind == "binomial") {
        spec.model = TwoPeriodBinomial({number(p, "s0"), number(p, "up"), number(p, "down"),
                                        number(p, "uu"), number(p, "ud"), number(p, "dd")},
                                       weights<4>(doc));
    } else if (kind == "trinomial") {
        spec.model = TrinomialTopModel({number(p, "s0"), number(p, "up"), number(p, "down"),
                                        number(p, "top"), number(p, "uu"), number(p, "ud"),
                                        number(p, "dd")},
                                       weights<6>(doc));
    } else if (kind == "trend") {
        if (!doc.contains("orientation") || !doc["orientation"].is_string())
            throw ParseError("missing string 'orientation'");
        const std::string o = doc["orientation"];
        if (o != "positive" && o != "negative")
            throw ParseError("orientation must be 'positive' or 'negative'");
        spec.model = TrendLattice(
            o == "positive" ? Orientation::PositiveDrift : Orientation::NegativeDrift,
            {number(p, "s0"), number(p, "up"), number(p, "down"), number(p, "uu"),
             number(p, "ud"), number(p, "dd"), number(p, "trend_up"), number(p, "trend_down")},
            weights<5>(doc));
    } else {
        throw ParseError("unknown model kind '" + kind + "'");
    }
    return spec;
}

ModelSpec load_model_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ParseError("cannot open " + filename);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str());
}

ModelSpec builtin_model(const std::string& name) {
    if (name == "sec34")
        return {TwoPeriodBinomial({100, 105, 95, 110, 100, 90}, {0.25, 0.3, 0.25, 0.2})};
    if (name == "bondarenko-counterexample")
        return {TrinomialTopModel({10, 12, 8, 14, 13, 10, 6}, {0.15, 0.2, 0.3, 0.05, 0.1, 0.2})};
    throw ParseError("unknown builtin model '" + name + "'");
}

}  // namespace gstatarb
