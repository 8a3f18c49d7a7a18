#include <thread>

#include "anvil/http_server.hpp"
#include "anvil/json_codec.hpp"
#include "anvil/service.hpp"
#include "doctest.h"
#include "httplib.h"
#include "support.hpp"

using namespace anvil;

namespace {

struct Fixture {
  std::shared_ptr<IndexStore> store = std::make_shared<IndexStore>();
  std::shared_ptr<const Resources> resources = std::make_shared<const Resources>(test::shipped_resources());
  QueryService service{store, resources};

  Fixture() { store->publish(build_index(test::corpus("corpus/figure_results.jsonl"), test::lexicon())); }
};

int request_status(std::string_view body) {
  try {
    parse_query_request(body);
    return 200;
  } catch (const RequestError& e) {
    return e.status();
  }
}

Json without_timing(const Reply& reply) {
  Json json = Json::parse(reply.body);
  json.erase("timing_ms");
  return json;
}

std::vector<std::string> ids(const Json& body) {
  std::vector<std::string> out;
  for (const auto& r : body["results"]) out.push_back(r["id"]);
  return out;
}

}  // namespace

TEST_SUITE("retrieval-service") {
  TEST_CASE("request validation") {
    CHECK(request_status(R"({"query": "camera"})") == 200);
    CHECK(request_status("not json") == 400);
    CHECK(request_status("[]") == 400);
    CHECK(request_status(R"({"limit": 3})") == 400);
    CHECK(request_status(R"({"query": 5})") == 400);
    CHECK(request_status(R"({"query": "camera", "limit": 0})") == 400);
    CHECK(request_status(R"({"query": "camera", "limit": 101})") == 400);
    CHECK(request_status(R"({"query": "camera", "limit": 2.5})") == 400);
    CHECK(request_status(R"({"query": "camera", "alpha": 1.5})") == 400);
    CHECK(request_status(R"({"query": "camera", "exclude_contexts": "x"})") == 400);
    CHECK(request_status(R"({"query": "camera", "exclude_contexts": [["a"]]})") == 400);
    CHECK(request_status(R"({"query": "  "})") == 422);
    const QueryRequest r = parse_query_request(
        R"({"query": "q", "limit": 3, "alpha": 0.5, "exclude_contexts": [["a", "b"], {"anchor": "c", "context": "d"}]})");
    CHECK(r.limit == 3);
    CHECK(r.alpha == 0.5);
    REQUIRE(r.exclude_contexts.size() == 2);
    CHECK(r.exclude_contexts[1].anchor == "c");
    CHECK(r.exclude_contexts[1].context == "d");
  }

  TEST_CASE("query response") {
    Fixture f;
    const Reply reply = f.service.query(R"({"query": "camera with a lens"})");
    REQUIRE(reply.status == 200);
    const Json body = Json::parse(reply.body);
    CHECK(body["results"].size() == 5);
    CHECK(body.contains("timing_ms"));
    const Json& top = body["results"][0];
    for (const char* key : {"id", "caption", "combined_score", "phrase_score", "simple_score", "contexts"}) {
      CHECK_MESSAGE(top.contains(key), key);
    }
    CHECK(top["contexts"][0].contains("anchor"));
    CHECK(top["contexts"][0].contains("text"));
    CHECK(top["contexts"][0].contains("category"));
    CHECK(body["groups"].is_array());
    CHECK(body["groups"][0].contains("count"));
  }

  TEST_CASE("excluding a facet removes exactly its captions") {
    Fixture f;
    const Json all = Json::parse(f.service.query(R"({"query": "camera with a lens"})").body);
    std::size_t count = 0;
    for (const auto& g : all["groups"]) {
      if (g["anchor"] == "camera" && g["context"] == "on a white surface") count = g["count"];
    }
    REQUIRE(count == 2);
    const Json cut = Json::parse(
        f.service
            .query(R"({"query": "camera with a lens", "exclude_contexts": [{"anchor": "camera", "context": "On a white surface"}]})")
            .body);
    CHECK(cut["results"].size() == all["results"].size() - count);
    CHECK(ids(cut) == std::vector<std::string>{"fig-3", "fig-4", "fig-5"});
    const Json arrays = Json::parse(
        f.service.query(R"({"query": "camera with a lens", "exclude_contexts": [["camera", "on a white surface"]]})")
            .body);
    CHECK(ids(arrays) == ids(cut));

    const Json one = Json::parse(f.service.query(R"({"query": "camera with a lens", "limit": 1})").body);
    CHECK(one["results"].size() == 1);
  }

  TEST_CASE("status codes") {
    auto store = std::make_shared<IndexStore>();
    QueryService service(store, std::make_shared<const Resources>(test::shipped_resources()));
    CHECK(service.health().status == 503);
    CHECK(service.query(R"({"query": "camera"})").status == 503);
    CHECK(service.caption("fig-1").status == 503);
    store->publish(build_index(test::corpus("corpus/figure_results.jsonl"), test::lexicon()));
    const Reply health = service.health();
    CHECK(health.status == 200);
    CHECK(Json::parse(health.body)["documents"] == 5);
    CHECK(service.query("{").status == 400);
    CHECK(service.query(R"({"query": ""})").status == 422);
    CHECK(service.caption("nope").status == 404);
    const Json caption = Json::parse(service.caption("fig-1").body);
    CHECK(caption["caption"] == "black SLR camera, with zoom lens, on a white surface.");
    CHECK(caption["parse"].contains("tokens"));

    store->publish(add_records(*store->snapshot(), {{"new-1", "red car"}}, test::lexicon()));
    CHECK(Json::parse(service.health().body)["documents"] == 6);
  }

  TEST_CASE("responses are deterministic apart from timing") {
    Fixture f;
    const std::string body = R"({"query": "camera with a lens", "alpha": 0.5})";
    CHECK(without_timing(f.service.query(body)) == without_timing(f.service.query(body)));
    const QueryRequest request = parse_query_request(body);
    const auto a = answer_query(*f.store->snapshot(), *f.resources, {}, request);
    CHECK(response_body(a) == response_body(answer_query(*f.store->snapshot(), *f.resources, {}, request)));
    CHECK(Json::parse(response_body(a)).dump() == without_timing(f.service.query(body)).dump());
  }

  TEST_CASE("http round trip") {
    Fixture f;
    HttpServer server(f.service);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);

    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    auto query = client.Post("/query", R"({"query": "camera with a lens"})", "application/json");
    REQUIRE(query);
    CHECK(query->status == 200);
    CHECK(Json::parse(query->body)["results"].size() == 5);

    auto bad = client.Post("/query", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto caption = client.Get("/captions/fig-2");
    REQUIRE(caption);
    CHECK(Json::parse(caption->body)["id"] == "fig-2");
    auto missing = client.Get("/captions/none");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    auto preflight = client.Options("/query");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);

    server.stop();
    loop.join();
    CHECK_FALSE(server.running());
  }
}
