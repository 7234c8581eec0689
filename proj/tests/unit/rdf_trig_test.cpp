#include <doctest.h>

#include "streetlab/rdf/trig.hpp"
#include "support/rdf_generators.hpp"

using namespace streetlab::rdf;
using streetlab::testing::DatasetGenerator;
using streetlab::testing::ex;
using streetlab::testing::isomorphic;

TEST_CASE("minimal document yields one default-graph quad") {
  const Dataset d = parse_trig("<s> <p> <o> .");
  REQUIRE(d.size() == 1);
  const Quad& q = *d.quads().begin();
  CHECK(q.graph.is_default_graph());
  CHECK(q.subject == Term::iri("s"));
  CHECK(q.object == Term::iri("o"));
}

TEST_CASE("prefixed named graph with an integer literal") {
  // expected quad confirmed with rdflib 7 parsing the same document
  const Dataset d = parse_trig("@prefix ex: <http://ex/> . ex:g { ex:s ex:p 5 . }");
  REQUIRE(d.size() == 1);
  const Quad& q = *d.quads().begin();
  CHECK(q.graph == Term::iri("http://ex/g"));
  CHECK(q.subject == Term::iri("http://ex/s"));
  CHECK(q.predicate == Term::iri("http://ex/p"));
  CHECK(q.object == Term::literal("5", std::string(xsd::kInteger)));
}

TEST_CASE("empty input gives an empty dataset") {
  CHECK(parse_trig("").empty());
  CHECK(parse_trig("  # only a comment\n").empty());
}

TEST_CASE("mixed document matches the rdflib reading") {
  // rdflib 7 yields these seven quads (it prints the double as -2500.0; the
  // lexical form is kept verbatim here)
  const Dataset d = parse_trig(R"(@prefix ex: <http://ex/> .
ex:g { ex:s ex:p "a"@en , "b"^^ex:t ; a ex:C . _:x ex:q [ ex:r 1.5 ] . }
ex:s ex:p -2.5e3 .
GRAPH ex:h { ex:a ex:b true })");
  CHECK(d.size() == 7);
  const Term g = Term::iri("http://ex/g");
  CHECK(d.contains({Term::iri("http://ex/s"), Term::iri("http://ex/p"), Term::lang_literal("a", "en"), g}));
  CHECK(d.contains({Term::iri("http://ex/s"), Term::iri("http://ex/p"), Term::literal("b", "http://ex/t"), g}));
  CHECK(d.contains({Term::iri("http://ex/s"), Term::iri(std::string(rdfns::kType)), Term::iri("http://ex/C"), g}));
  CHECK(d.contains({Term::iri("http://ex/s"), Term::iri("http://ex/p"),
                    Term::literal("-2.5e3", std::string(xsd::kDouble)), Term::default_graph()}));
  CHECK(d.contains({Term::iri("http://ex/a"), Term::iri("http://ex/b"), Term::boolean(true),
                    Term::iri("http://ex/h")}));
  CHECK(d.graph(g).size() == 5);
}

TEST_CASE("string forms and escapes") {
  const Dataset d = parse_trig(R"(<s> <p> "tab\tq\"é" , 'single' , """long
"quoted" text""" , '''x''' .)");
  CHECK(d.contains({Term::iri("s"), Term::iri("p"), Term::literal("tab\tq\"\xC3\xA9"), {}}));
  CHECK(d.contains({Term::iri("s"), Term::iri("p"), Term::literal("single"), {}}));
  CHECK(d.contains({Term::iri("s"), Term::iri("p"), Term::literal("long\n\"quoted\" text"), {}}));
  CHECK(d.contains({Term::iri("s"), Term::iri("p"), Term::literal("x"), {}}));
}

TEST_CASE("blank node labels are document scoped and relabeled") {
  const Dataset d = parse_trig("_:n <p> _:m . _:m <p> _:n . [] <q> [ <r> 1 ] .",
                               ParseOptions{"doc1_"});
  CHECK(d.size() == 4);
  for (const auto& q : d.quads()) {
    CHECK(q.subject.value.rfind("doc1_", 0) == 0);
  }
}

TEST_CASE("base and SPARQL-style directives") {
  const Dataset d = parse_trig(
      "BASE <http://h/dir/>\nPREFIX x: <http://x/>\n<a> x:p <#f> . { <b> x:p </root> }");
  CHECK(d.contains({Term::iri("http://h/dir/a"), Term::iri("http://x/p"), Term::iri("http://h/dir/#f"), {}}));
  CHECK(d.contains({Term::iri("http://h/dir/b"), Term::iri("http://x/p"), Term::iri("http://h/root"), {}}));
}

TEST_CASE("syntax errors carry line and column") {
  SUBCASE("unknown prefix") {
    try {
      parse_trig("<s> <p> <o> .\n  ex:s <p> 1 .");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
      CHECK(std::string(e.what()).find("unknown prefix 'ex'") != std::string::npos);
    }
  }
  SUBCASE("missing terminator") {
    CHECK_THROWS_AS(parse_trig("<s> <p> <o>"), SyntaxError);
  }
  SUBCASE("unterminated graph") {
    CHECK_THROWS_AS(parse_trig("<g> { <s> <p> <o> ."), SyntaxError);
  }
  SUBCASE("collections rejected") {
    CHECK_THROWS_AS(parse_trig("<s> <p> ( 1 2 ) ."), SyntaxError);
  }
  SUBCASE("literal graph label") {
    CHECK_THROWS_AS(parse_trig("\"g\" { <s> <p> <o> }"), SyntaxError);
  }
}

TEST_CASE("serialize_trig examples") {
  CHECK(serialize_trig(Dataset{}).empty());
  const Dataset one{Quad{ex("s"), ex("p"), Term::integer(3), ex("g")}};
  const std::string text = serialize_trig(one);
  CHECK(text == "<http://ex.org/g> {\n  <http://ex.org/s> <http://ex.org/p> 3 .\n}\n");
  CHECK(parse_trig(text) == one);

  const std::string prefixed = serialize_trig(one, {{"ex", "http://ex.org/"}});
  CHECK(prefixed == "@prefix ex: <http://ex.org/> .\n\nex:g {\n  ex:s ex:p 3 .\n}\n");
}

TEST_CASE("serialization orders graphs and triples deterministically") {
  Dataset d;
  d.insert({ex("z"), ex("p"), ex("o"), ex("g2")});
  d.insert({ex("a"), ex("p"), ex("o"), ex("g2")});
  d.insert({ex("m"), ex("p"), ex("o"), ex("g1")});
  d.insert({ex("d"), ex("p"), ex("o"), {}});
  const std::string text = serialize_trig(d);
  CHECK(text.find("<http://ex.org/d>") < text.find("<http://ex.org/g1>"));
  CHECK(text.find("<http://ex.org/g1>") < text.find("<http://ex.org/g2>"));
  CHECK(text.find("<http://ex.org/a>") < text.find("<http://ex.org/z>"));
}

TEST_CASE("round trip of generated datasets up to blank renaming") {
  DatasetGenerator gen(20240611);
  for (int i = 0; i < 200; ++i) {
    const Dataset d = gen.dataset(50);
    const std::string text = serialize_trig(d, {{"ex", "http://ex.org/"}});
    const Dataset back = parse_trig(text);
    INFO(text);
    REQUIRE(isomorphic(back, d));
    CHECK(serialize_trig(d, {{"ex", "http://ex.org/"}}) == text);
  }
}
