#pragma once

#include "idrisk/function_class.hpp"
#include "idrisk/levy.hpp"

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace idrisk {

/// Triplet document:
///   {"drift": [a_0, ...],
///    "measure": {"kind": "atomic", "atoms": [{"u": [..], "w": x}, ...]}}
///   or "measure": {"kind": "exp_intensity", "alpha": x, "beta": y}
/// Validation errors are ConfigError and name the offending key path.
GeneratingTriplet triplet_from_json(const nlohmann::json& doc);
nlohmann::json triplet_to_json(const GeneratingTriplet& triplet);

/// {"thetas": [...], "lambda": x, "cap": c}
LipschitzRampFamily family_from_json(const nlohmann::json& doc);

/// A configuration file: either a bare triplet document, or an object with
/// optional "triplet" and "family" members.
struct ConfigDocument {
    std::optional<GeneratingTriplet> triplet;
    std::optional<LipschitzRampFamily> family;
};

ConfigDocument parse_config(const std::string& text);
/// IoError when the file cannot be read.
ConfigDocument load_config(const std::filesystem::path& path);

}  // namespace idrisk
