#include "idrisk/config.hpp"

#include "idrisk/error.hpp"

#include <fstream>
#include <sstream>

namespace idrisk {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(path + (path.empty() ? "" : ".") + key + ": missing");
    return *it;
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

double number(const json& value, const std::string& path) {
    if (!value.is_number()) throw ConfigError(path + ": expected a number");
    return value.get<double>();
}

Vector number_array(const json& value, const std::string& path) {
    if (!value.is_array()) throw ConfigError(path + ": expected an array of numbers");
    Vector out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(number(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <class F>
auto rethrow_as(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

GeneratingTriplet triplet_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("triplet: expected an object");
    const Vector drift = number_array(require(doc, "drift", ""), "drift");
    const json& measure = require(doc, "measure", "");
    const json& kind = require(measure, "kind", "measure");
    if (!kind.is_string()) throw ConfigError("measure.kind: expected a string");

    if (kind == "atomic") {
        const json& atoms = require(measure, "atoms", "measure");
        if (!atoms.is_array() || atoms.empty()) {
            throw ConfigError("measure.atoms: expected a non-empty array");
        }
        std::vector<Atom> parsed;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string at = "measure.atoms[" + std::to_string(i) + "]";
            Atom atom{number_array(require(atoms[i], "u", at), join(at, "u")),
                      number(require(atoms[i], "w", at), join(at, "w"))};
            if (!(atom.mass > 0.0)) throw ConfigError(join(at, "w") + ": must be positive");
            if (euclidean_norm(atom.location) == 0.0) {
                throw ConfigError(join(at, "u") + ": atom at the origin is not allowed");
            }
            parsed.push_back(std::move(atom));
        }
        return rethrow_as("measure", [&] {
            return GeneratingTriplet(drift, AtomicMeasure(std::move(parsed)));
        });
    }
    if (kind == "exp_intensity") {
        const double alpha = number(require(measure, "alpha", "measure"), "measure.alpha");
        const double beta = number(require(measure, "beta", "measure"), "measure.beta");
        if (!(alpha > 0.0)) throw ConfigError("measure.alpha: must be positive");
        if (!(beta > 0.0)) throw ConfigError("measure.beta: must be positive");
        return rethrow_as("drift", [&] {
            return GeneratingTriplet(drift, ExpIntensityMeasure(alpha, beta));
        });
    }
    throw ConfigError("measure.kind: expected \"atomic\" or \"exp_intensity\", got " + kind.dump());
}

json triplet_to_json(const GeneratingTriplet& triplet) {
    json doc;
    doc["drift"] = triplet.drift();
    if (const auto* m = std::get_if<AtomicMeasure>(&triplet.measure())) {
        json atoms = json::array();
        for (const auto& atom : m->atoms()) atoms.push_back({{"u", atom.location}, {"w", atom.mass}});
        doc["measure"] = {{"kind", "atomic"}, {"atoms", atoms}};
    } else {
        const auto& e = std::get<ExpIntensityMeasure>(triplet.measure());
        doc["measure"] = {{"kind", "exp_intensity"}, {"alpha", e.alpha()}, {"beta", e.beta()}};
    }
    return doc;
}

LipschitzRampFamily family_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("family: expected an object");
    const Vector thetas = number_array(require(doc, "thetas", "family"), "family.thetas");
    const double lambda = number(require(doc, "lambda", "family"), "family.lambda");
    const double cap = number(require(doc, "cap", "family"), "family.cap");
    if (thetas.empty()) throw ConfigError("family.thetas: must not be empty");
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        if (!(thetas[i] > thetas[i - 1])) {
            throw ConfigError("family.thetas[" + std::to_string(i) + "]: thetas must be strictly increasing");
        }
    }
    if (!(lambda > 0.0)) throw ConfigError("family.lambda: must be positive");
    if (!(cap > 0.0)) throw ConfigError("family.cap: must be positive");
    return LipschitzRampFamily(thetas, lambda, cap);
}

ConfigDocument parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    ConfigDocument out;
    if (doc.contains("drift")) {
        out.triplet = triplet_from_json(doc);
    } else if (doc.contains("triplet")) {
        try {
            out.triplet = triplet_from_json(doc["triplet"]);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("triplet.") + e.what());
        }
    }
    if (doc.contains("family")) out.family = family_from_json(doc["family"]);
    return out;
}

ConfigDocument load_config(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace idrisk
