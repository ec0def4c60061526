#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "spectramix/app/hex.hpp"
#include "spectramix/app/pipeline.hpp"
#include "spectramix/app/ppm.hpp"
#include "spectramix/app/service.hpp"
#include "spectramix/errors.hpp"
#include "spectramix/tables.hpp"

// after Eigen: <resolv.h> defines a _res macro
#include "httplib.h"

using namespace spectramix;
using namespace spectramix::app;
using nlohmann::json;

namespace {

const std::filesystem::path kSample = std::filesystem::path(SPECTRAMIX_DATA_DIR) / "sample_catalog.csv";

const Engine& engine() {
    static const Engine e(load_catalog(kSample, canonical_t_matrix(), srgb_d65_matrix()));
    return e;
}

const Engine& bare_engine() {
    static const Engine e;
    return e;
}

std::string error_code(const HttpReply& r) {
    return json::parse(r.body).at("error").at("code").get<std::string>();
}

MixRequest request(std::vector<ColorPart> colors, MixAlgorithm alg = MixAlgorithm::illss, int steps = 9) {
    MixRequest r;
    r.colors = std::move(colors);
    r.algorithm = alg;
    r.steps = steps;
    return r;
}

const char* kYellowBlue =
    R"({"colors":[{"hex":"FFFF00","parts":1},{"hex":"0000FF","parts":1}],"algorithm":"illss","steps":9})";

}  // namespace

TEST_CASE("hex parsing and formatting") {
    CHECK(parse_hex("FFFF00") == Srgb8{255, 255, 0});
    CHECK(parse_hex("#3264c8") == Srgb8{0x32, 0x64, 0xC8});
    CHECK_FALSE(parse_hex("FFF").has_value());
    CHECK_FALSE(parse_hex("GG0000").has_value());
    CHECK_FALSE(parse_hex("#+10000").has_value());
    CHECK_FALSE(parse_hex("").has_value());
    CHECK(to_hex({0x32, 0x64, 0xC8}) == "3264C8");
    for (int v = 0; v < 256; ++v) {
        const Srgb8 c{static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(255 - v), 7};
        CHECK(parse_hex(to_hex(c)) == c);
    }
}

TEST_CASE("algorithm names") {
    CHECK(parse_mix_algorithm("catalog") == MixAlgorithm::catalog);
    CHECK(parse_mix_algorithm("ILSS") == MixAlgorithm::ilss);
    CHECK_FALSE(parse_mix_algorithm("rgb").has_value());
    CHECK(to_string(MixAlgorithm::llss) == "llss");
}

TEST_CASE("request validation") {
    CHECK_NOTHROW(validate(request({{{1, 2, 3}, 1.0}})));
    CHECK_THROWS_AS(validate(request({})), RequestError);
    CHECK_THROWS_AS(validate(request({{{1, 2, 3}, 0.0}, {{4, 5, 6}, 0.0}})), RequestError);
    CHECK_THROWS_AS(validate(request({{{1, 2, 3}, -1.0}, {{4, 5, 6}, 2.0}})), RequestError);
    CHECK_THROWS_AS(validate(request({{{1, 2, 3}, 1.0}}, MixAlgorithm::illss, -1)), RequestError);
}

TEST_CASE("run_mix") {
    const MixResponse yb = run_mix(request({{{255, 255, 0}, 1.0}, {{0, 0, 255}, 1.0}}), engine());
    REQUIRE(yb.path.size() == 11);
    CHECK(yb.path.front().color == Srgb8{255, 255, 0});
    CHECK(yb.path.back().color == Srgb8{0, 0, 255});
    CHECK(yb.path[5].rho == yb.rho);
    CHECK(yb.inputs.size() == 2);
    CHECK(yb.inputs[0].converged);

    const MixResponse single = run_mix(request({{{50, 100, 150}, 3.0}}), engine());
    CHECK(single.result == Srgb8{50, 100, 150});
    CHECK(single.path.empty());

    const MixResponse white = run_mix(request({{{255, 255, 255}, 1.0}, {{255, 255, 255}, 1.0}}, MixAlgorithm::ilss), engine());
    CHECK(white.result == Srgb8{255, 255, 255});

    const MixResponse gray = run_mix(request({{{128, 128, 128}, 3.0}, {{128, 128, 128}, 7.0}}, MixAlgorithm::llss), engine());
    CHECK(gray.result == Srgb8{128, 128, 128});

    const MixResponse no_path = run_mix(request({{{255, 0, 0}, 1.0}, {{0, 0, 255}, 1.0}}, MixAlgorithm::ilss, 0), engine());
    CHECK(no_path.path.empty());
}

TEST_CASE("run_mix with the catalog") {
    const MixResponse r =
        run_mix(request({{{0xC8, 0x28, 0x2D}, 1.0}, {{0x1E, 0x3C, 0x96}, 1.0}}, MixAlgorithm::catalog), engine());
    REQUIRE(r.inputs.size() == 2);
    CHECK(r.inputs[0].matched_name == "SyntheticRed");
    CHECK(r.inputs[1].matched_name == "SyntheticBlue");
    CHECK_THROWS_AS(run_mix(request({{{1, 2, 3}, 1.0}}, MixAlgorithm::catalog), bare_engine()), RequestError);
}

TEST_CASE("error JSON") {
    CHECK(run_recover({255, 0, 0}, Algorithm::illss, engine()).converged);
    const SolverError e("reflectance recovery did not converge", {"FF0000: test"});
    const json body = error_json("solver_nonconvergence", e.what(), e.diagnostics());
    CHECK(body["error"]["diagnostics"][0] == "FF0000: test");
}

TEST_CASE("mix request JSON") {
    const MixRequest r = mix_request_from_json(json::parse(kYellowBlue));
    CHECK(r.colors.size() == 2);
    CHECK(r.algorithm == MixAlgorithm::illss);
    CHECK(r.steps == 9);

    const MixRequest defaults = mix_request_from_json(json::parse(R"({"colors":[{"hex":"#ff0000"}]})"));
    CHECK(defaults.colors[0].parts == 1.0);
    CHECK(defaults.algorithm == kDefaultAlgorithm);
    CHECK(defaults.steps == kDefaultPathSteps);
    CHECK(defaults.metric == Metric::lab);

    auto code_of = [](const char* body) {
        try {
            mix_request_from_json(json::parse(body));
        } catch (const RequestError& e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code_of("[]") == "invalid_request");
    CHECK(code_of(R"({"colors":[{"hex":"XYZ"}]})") == "invalid_color");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000","parts":"a"}]})") == "invalid_parts");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000","parts":0}]})") == "invalid_parts");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000"}],"algorithm":"rgb"})") == "unknown_algorithm");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000"}],"steps":2.5})") == "invalid_steps");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000"}],"steps":5000})") == "invalid_steps");
    CHECK(code_of(R"({"colors":[{"hex":"FF0000"}],"metric":"cie94"})") == "unknown_metric");
}

TEST_CASE("mix response JSON") {
    const json out = to_json(run_mix(mix_request_from_json(json::parse(kYellowBlue)), engine()));
    CHECK(out["algorithm"] == "illss");
    CHECK(out["result_reflectance"].size() == 36);
    CHECK(out["path"].size() == 11);
    CHECK(out["path"][0]["hex"] == "FFFF00");
    CHECK(out["path"][10]["hex"] == "0000FF");
    CHECK(out["inputs"][0]["reflectance"].size() == 36);
    CHECK(out["diagnostics"]["total_iterations"].get<int>() > 0);
    CHECK(out.contains("clipped"));
}

TEST_CASE("PPM swatch strip") {
    const Srgb8 colors[] = {{255, 0, 0}, {0, 255, 0}, {1, 2, 3}};
    const std::string ppm = render_swatch_strip(colors);
    const std::string header = "P6\n192 64\n255\n";
    REQUIRE(ppm.size() == header.size() + 192 * 64 * 3);
    CHECK(ppm.substr(0, header.size()) == header);
    auto pixel = [&](int x, int y) {
        const std::size_t at = header.size() + 3 * (static_cast<std::size_t>(y) * 192 + x);
        return Srgb8{static_cast<std::uint8_t>(ppm[at]), static_cast<std::uint8_t>(ppm[at + 1]),
                     static_cast<std::uint8_t>(ppm[at + 2])};
    };
    CHECK(pixel(0, 0) == colors[0]);
    CHECK(pixel(63, 63) == colors[0]);
    CHECK(pixel(64, 0) == colors[1]);
    CHECK(pixel(191, 40) == colors[2]);
    CHECK(render_swatch_strip(colors) == ppm);
    CHECK_THROWS_AS(render_swatch_strip({}), DomainError);
}

TEST_CASE("service handlers") {
    const Service service(engine());
    const HttpReply health = service.health();
    CHECK(health.status == 200);
    CHECK(json::parse(health.body) == json{{"status", "ok"}});

    const HttpReply mix = service.mix(kYellowBlue);
    REQUIRE(mix.status == 200);
    const json body = json::parse(mix.body);
    CHECK(body["path"].size() == 11);
    CHECK(body["path"][0]["hex"] == "FFFF00");
    CHECK(body["path"][10]["hex"] == "0000FF");
    CHECK(service.mix(kYellowBlue).body == mix.body);

    const HttpReply zero = service.mix(R"({"colors":[{"hex":"FFFF00","parts":0},{"hex":"0000FF","parts":0}]})");
    CHECK(zero.status == 400);
    CHECK(error_code(zero) == "invalid_parts");

    const HttpReply unknown = service.mix(R"({"colors":[{"hex":"FFFF00"}],"algorithm":"kubelka"})");
    CHECK(unknown.status == 400);
    CHECK(error_code(unknown) == "unknown_algorithm");

    const HttpReply malformed = service.mix("{colors:");
    CHECK(malformed.status == 400);
    CHECK(error_code(malformed) == "malformed_json");

    const HttpReply rec = service.recover(R"({"hex":"3264C8","algorithm":"llss"})");
    REQUIRE(rec.status == 200);
    const json r = json::parse(rec.body);
    CHECK(r["reflectance"].size() == 36);
    CHECK(r["converged"] == true);
    CHECK(service.recover(R"({"hex":"3264C8","algorithm":"x"})").status == 400);
    CHECK(service.recover(R"({"algorithm":"llss"})").status == 400);

    const HttpReply near = service.nearest("FFFFFF", "lab");
    REQUIRE(near.status == 200);
    CHECK(json::parse(near.body)["name"] == "TitaniumWhite");
    CHECK(service.nearest(std::nullopt, std::nullopt).status == 400);
    CHECK(service.nearest("FFFFFF", "cmyk").status == 400);

    const Service bare(bare_engine());
    const HttpReply missing = bare.nearest("FFFFFF", std::nullopt);
    CHECK(missing.status == 404);
    CHECK(error_code(missing) == "catalog_unavailable");

    CHECK(service.index().status == 200);
    CHECK(service.index().content_type.find("text/html") == 0);
}

TEST_CASE("service over HTTP") {
    httplib::Server server;
    const Service service(engine());
    service.install(server);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const auto health = client.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);

    // concurrent identical requests get identical answers
    std::vector<std::string> bodies(4);
    std::vector<std::thread> clients;
    for (auto& b : bodies) {
        clients.emplace_back([&b, port] {
            httplib::Client c("127.0.0.1", port);
            const auto res = c.Post("/api/mix", kYellowBlue, "application/json");
            if (res && res->status == 200) b = res->body;
        });
    }
    for (auto& t : clients) t.join();
    for (const auto& b : bodies) CHECK(b == service.mix(kYellowBlue).body);

    const auto bad = client.Post("/api/mix", "not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    const auto near = client.Get("/api/catalog/nearest?hex=000000&metric=lab");
    REQUIRE(near);
    CHECK(near->status == 200);
    CHECK(json::parse(near->body)["name"] == "IvoryBlack");

    const auto index = client.Get("/");
    REQUIRE(index);
    CHECK(index->status == 200);

    server.stop();
    worker.join();
}
