#include <doctest.h>

#include <json.hpp>
#include <set>

#include "mexp/battery.hpp"
#include "mexp/errors.hpp"

using namespace mexp;

TEST_CASE("battery cases are unique and described") {
    std::set<std::string> ids;
    for (const auto& c : battery_cases()) {
        CHECK(ids.insert(c.id).second);
        CHECK_FALSE(c.anchor.empty());
        CHECK_FALSE(c.claim.empty());
        CHECK_FALSE(c.restatement.empty());
        CHECK_FALSE(c.systems.empty());
        const std::string text = explain(c.id);
        CHECK(text.find(c.anchor) != std::string::npos);
        CHECK(text.find(c.restatement) != std::string::npos);
        CHECK(&find_case(c.id) != nullptr);
    }
    CHECK(ids.size() >= 14);
    CHECK_THROWS_AS(find_case("nosuch"), UsageError);
    CHECK_THROWS_AS(explain("nosuch"), UsageError);
}

TEST_CASE("filtered battery is deterministic") {
    const std::vector<std::string> filter{"isometry", "atomic"};
    const auto a = run_battery(filter, 7, 1);
    const auto b = run_battery(filter, 7, 3);
    REQUIRE(a.cases.size() == 2);
    CHECK(a.cases[0].info.id == "isometry");
    CHECK(a.ok());
    CHECK(a.failing().empty());
    const std::string ja = battery_json(a);
    CHECK(ja == battery_json(b));
    CHECK(battery_markdown(a) == battery_markdown(b));

    const auto j = nlohmann::json::parse(ja);
    CHECK(j["seed"] == 7);
    CHECK(j["ok"] == true);
    CHECK(j["cases"].size() == 2);
    CHECK(j["cases"][1]["id"] == "atomic");

    const std::string md = battery_markdown(a);
    for (const auto& c : a.cases) CHECK(md.find(c.info.anchor) != std::string::npos);
    CHECK_THROWS_AS(run_battery({"nosuch"}, 7), UsageError);
}
