#pragma once

// Outcome of one verification: what was expected, what was computed, and
// the grading shift used to compare them.

#include "fusion/graded.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace fusion {

using Json = nlohmann::ordered_json;

struct Check {
    bool ok = true;
    Json expected = Json::object();
    Json got = Json::object();
    std::optional<Bidegree> shift;
    std::string detail;

    // Records a failure; the first reason is kept in detail.
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void require(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
    // Folds a sub-check in, keeping its reason on failure.
    void absorb(const Check& other, const std::string& label) {
        if (!other.ok) fail(label + ": " + other.detail);
    }
};

Json to_json(const Bidegree& b);
Json to_json(const GradedCharacter& c);

}  // namespace fusion
