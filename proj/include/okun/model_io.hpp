#pragma once

#include <string>

#include <json.hpp>

#include "okun/errors.hpp"
#include "okun/model.hpp"

namespace okun {

inline constexpr const char* kModelVersionTag = "okun_model_v1";

/// Serializes a model losslessly (full double precision, sorted keys).
inline nlohmann::json model_to_json(const OkunModel& m, const std::string& provenance = "") {
    nlohmann::json j;
    j["version"] = kModelVersionTag;
    j["country"] = m.country;
    j["orientation"] = to_string(m.orientation);
    j["break_year"] = m.break_year;
    j["regime1"] = {{"slope", m.regime1.slope}, {"intercept", m.regime1.intercept}};
    j["regime2"] = {{"slope", m.regime2.slope}, {"intercept", m.regime2.intercept}};
    j["sample_start"] = m.sample_start;
    j["sample_end"] = m.sample_end;
    if (!provenance.empty()) j["provenance"] = provenance;
    return j;
}

/// Reads a model document, validating the version tag and invariants.
/// Also accepts a full run report, unwrapping its embedded "model" section.
inline OkunModel model_from_json(const nlohmann::json& doc) {
    const nlohmann::json* j = &doc;
    const bool tagged_as_model =
        doc.contains("version") && doc.at("version") == kModelVersionTag;
    if (!tagged_as_model && doc.contains("model")) j = &doc.at("model");
    try {
        if (!j->contains("version") || j->at("version").get<std::string>() != kModelVersionTag)
            throw DataError(std::string("model document is not tagged ") + kModelVersionTag);
        OkunModel m;
        m.country = j->at("country").get<std::string>();
        m.orientation = orientation_from_string(j->at("orientation").get<std::string>());
        m.break_year = j->at("break_year").get<int>();
        m.regime1 = {j->at("regime1").at("slope").get<double>(),
                     j->at("regime1").at("intercept").get<double>()};
        m.regime2 = {j->at("regime2").at("slope").get<double>(),
                     j->at("regime2").at("intercept").get<double>()};
        m.sample_start = j->at("sample_start").get<int>();
        m.sample_end = j->at("sample_end").get<int>();
        m.validate(true);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

inline std::string model_to_string(const OkunModel& m, const std::string& provenance = "") {
    return model_to_json(m, provenance).dump(2) + "\n";
}

inline OkunModel model_from_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid JSON: ") + e.what());
    }
    return model_from_json(doc);
}

} // namespace okun
