#include <doctest.h>

#include <nlohmann/json.hpp>

#include "hexakine/errors.hpp"
#include "hexakine/geometry.hpp"
#include "support.hpp"

using namespace hexakine;
using nlohmann::json;

namespace {

json reference_doc() {
    return json::parse(R"({
      "rails": [
        {"S": [0.0, -0.30, 0.0], "travel": [-0.65, 0.65]},
        {"S": [0.0,  0.00, 0.0], "travel": [-0.65, 0.65]},
        {"S": [0.0,  0.30, 0.0], "travel": [-0.65, 0.65]},
        {"S": [0.0, -0.30, 0.0], "travel": [-0.65, 0.65]},
        {"S": [0.0,  0.00, 0.0], "travel": [-0.65, 0.65]},
        {"S": [0.0,  0.30, 0.0], "travel": [-0.65, 0.65]}
      ],
      "platform": [
        {"B": [-0.05, -0.12, 0.0]},
        {"B": [ 0.00, -0.02, 0.0]},
        {"B": [-0.05,  0.14, 0.0]},
        {"B": [ 0.05, -0.12, 0.0]},
        {"B": [ 0.05, -0.02, 0.0]},
        {"B": [ 0.05,  0.14, 0.0]}
      ],
      "arms": [0.42, 0.42, 0.42, 0.42, 0.42, 0.42],
      "home_pose": [0.0, 0.0, 0.25, 0.0, 0.0, 0.0]
    })");
}

void expect_rejected(const json& doc, const std::string& needle) {
    try {
        (void)parse_geometry(doc.dump());
        FAIL_CHECK("expected rejection mentioning '" << needle << "'");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("geometry: the shipped reference file loads and validates") {
    const MachineGeometry geom = hexatest::reference_geometry();
    CHECK(geom.arm_length[0] == 0.42);
    CHECK(geom.rail_anchor[1].norm() == 0.0);
    CHECK(geom.home_pose.position.z() == 0.25);
    CHECK(MachineGeometry::free_parameter_count() == 35);
}

TEST_CASE("geometry: every frame constraint is enforced and named") {
    json doc = reference_doc();
    doc["rails"][1]["S"][0] = 1e-9;
    expect_rejected(doc, "S2x");

    doc = reference_doc();
    doc["rails"][1]["S"][2] = -1e-6;
    expect_rejected(doc, "S2z");

    doc = reference_doc();
    doc["rails"][2]["S"][2] = 1e-6;
    expect_rejected(doc, "S3z");

    doc = reference_doc();
    doc["platform"][1]["B"][0] = 0.01;
    expect_rejected(doc, "B2x");

    doc = reference_doc();
    doc["platform"][2]["B"][2] = 1e-9;
    expect_rejected(doc, "B3z");

    doc = reference_doc();
    doc["platform"][4]["B"][2] = -1e-9;
    expect_rejected(doc, "B5z");

    doc = reference_doc();
    doc["platform"][4]["B"][1] = -0.021;
    expect_rejected(doc, "B2y = B5y");
}

TEST_CASE("geometry: constraint checks allow exactly 1e-12 of slack") {
    json doc = reference_doc();
    doc["rails"][1]["S"][0] = 1e-12;
    CHECK_NOTHROW((void)parse_geometry(doc.dump()));
}

TEST_CASE("geometry: non-positive arm lengths are rejected") {
    json doc = reference_doc();
    doc["arms"][3] = 0.0;
    expect_rejected(doc, "arm_length[4]");
    doc["arms"][3] = -0.1;
    expect_rejected(doc, "arm_length[4]");
}

TEST_CASE("geometry: degenerate rail travel is rejected") {
    json doc = reference_doc();
    doc["rails"][0]["travel"] = {0.5, 0.5};
    expect_rejected(doc, "rail_travel[1]");
}

TEST_CASE("geometry: schema violations are reported") {
    expect_rejected(json::parse("{}"), "missing key");

    json doc = reference_doc();
    doc["extra"] = 1;
    expect_rejected(doc, "unknown key");

    doc = reference_doc();
    doc["rails"].erase(5);
    expect_rejected(doc, "rails");

    doc = reference_doc();
    doc["home_pose"] = {0.0, 0.0};
    expect_rejected(doc, "home_pose");

    CHECK_THROWS_AS((void)parse_geometry("not json"), ConfigError);
    CHECK_THROWS_AS((void)load_geometry("/nonexistent/geometry.json"), IoError);
}

TEST_CASE("geometry: fingerprint tracks content") {
    const MachineGeometry a = hexatest::reference_geometry();
    MachineGeometry b = a;
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint().size() == 16);

    b.arm_length[2] += 1e-12;
    CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("geometry: rail travel check honors the margin") {
    const MachineGeometry geom = hexatest::reference_geometry();
    JointVector q = JointVector::Zero();
    CHECK(geom.within_rail_travel(q));
    q[3] = 0.65;
    CHECK(geom.within_rail_travel(q));
    CHECK(!geom.within_rail_travel(q, 1e-6));
    q[3] = 0.66;
    CHECK(!geom.within_rail_travel(q));
}
