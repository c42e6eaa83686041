// Serves gold-oracle scores for a corpus over the /v1/score protocol:
//   /etd/v1/score, /trg/v1/score, /arg/v1/score, plus the fault prefixes of MockScoreServer.
#include <iostream>

#include <CLI11.hpp>

#include "genex/backends.hpp"
#include "genex/corpus.hpp"
#include "genex/schema.hpp"
#include "mock_server.hpp"

int main(int argc, char** argv) {
  std::string schema_path, corpus_path, host = "127.0.0.1", sep{genex::kDefaultSeparator};
  int port = 8080;
  CLI::App app{"Mock scoring server backed by corpus gold", "genex-mock-server"};
  app.add_option("--schema", schema_path)->required();
  app.add_option("--corpus", corpus_path)->required();
  app.add_option("--host", host);
  app.add_option("--port", port);
  app.add_option("--sep", sep);
  CLI11_PARSE(app, argc, argv);

  try {
    auto schema = genex::load_schema_file(schema_path, sep);
    auto corpus = genex::load_corpus_file(corpus_path, &schema, sep);
    auto etd = genex::oracle_from_corpus(corpus, schema, genex::Stage::kEtd, sep);
    genex::MockScoreServer server({{"", etd},
                                   {"/etd", etd},
                                   {"/trg", genex::oracle_from_corpus(corpus, schema, genex::Stage::kTrigger, sep)},
                                   {"/arg", genex::oracle_from_corpus(corpus, schema, genex::Stage::kArgument, sep)}});
    std::cerr << "serving on http://" << host << ":" << port << '\n';
    server.listen_blocking(host, port);
  } catch (const std::exception& e) {
    std::cerr << "genex-mock-server: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
