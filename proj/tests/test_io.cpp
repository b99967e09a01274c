#include "support.hpp"

#include "ggm/error.hpp"
#include "ggm/io.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ggm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / ("ggm_test_io_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_pajek(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("minimal Pajek file") {
    const auto net = parse_pajek("*Vertices 2\n*Edges\n1 2 1.0\n");
    CHECK(net.n_vertices == 2);
    REQUIRE(net.links.size() == 1);
    CHECK(net.links[0].from == 0);
    CHECK(net.links[0].to == 1);
    CHECK(net.links[0].weight == 1.0);
    const Graph g = net.to_graph();
    CHECK(g.edge_count() == 1);
    CHECK(g.adjacency()(0, 1) == 1.0);
}

TEST_CASE("arcs are symmetrized") {
    const Graph g = parse_pajek("*Vertices 3\n*Arcs\n1 2 1\n2 1 1\n").to_graph();
    CHECK(g.n_nodes() == 3);
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(1, 0));
}

TEST_CASE("out of range index reports its line") {
    CHECK(parse_error_line("*Vertices 2\n*Edges\n1 5 1\n") == 3);
    CHECK_THROWS_AS(parse_pajek("*Vertices 2\n*Edges\n1 5 1\n"), ParseError);
}

TEST_CASE("Pajek grammar details") {
    const auto net = parse_pajek(
        "\xEF\xBB\xBF% students\r\n*Network friends\r\n*vertices 4\r\n1 \"Ana B\" 0.1 0.2\r\n"
        "2 \"Bo\"\r\n  *EDGES  \r\n1   2\r\n\r\n3 4 2.5 c Red\r\n*arcs\r\n4 3 4.0\r\n");
    CHECK(net.n_vertices == 4);
    CHECK(net.labels[0] == "Ana B");
    CHECK(net.labels[1] == "Bo");
    CHECK(net.labels[2].empty());
    const Graph g = net.to_graph();
    CHECK(g.adjacency()(0, 1) == 1.0);
    CHECK(g.adjacency()(2, 3) == 4.0);
    CHECK(net.to_graph(true).adjacency()(2, 3) == 1.0);
}

TEST_CASE("Pajek errors") {
    CHECK(parse_error_line("*Vertices x\n") == 1);
    CHECK(parse_error_line("*Vertices 2\n*Edges\n1 2 heavy\n") == 3);
    CHECK(parse_error_line("*Vertices 2\n*Matrix\n0 1\n1 0\n") == 2);
    CHECK(parse_error_line("*Edges\n1 2\n") == 1);
    CHECK(parse_error_line("*Vertices 3\n1 \"open\n") == 2);
    CHECK(parse_error_line("*Vertices 3\n*Edges\n1\n") == 3);
    CHECK_THROWS_AS(parse_pajek("*Vertices 2\n*Edges\n1 2 -1\n").to_graph(), Error);
}

TEST_CASE("Pajek drops self-loops and keeps the heaviest parallel link") {
    const Graph g = parse_pajek("*Vertices 3\n*Edges\n1 1 3\n1 2 1\n2 1 2\n2 3 0\n").to_graph();
    CHECK(g.edge_count() == 1);
    CHECK(g.adjacency()(0, 1) == 2.0);
}

TEST_CASE("Pajek survives whitespace and comment perturbations") {
    const std::string base = "*Vertices 5\n1 \"a\"\n2 \"b\"\n*Edges\n1 2 1\n2 3 2\n*Arcs\n4 5 1\n5 1 3\n";
    const Graph want = parse_pajek(base).to_graph();
    Rng rng(99);
    std::size_t errors = 0;
    for (int t = 0; t < 2000; ++t) {
        std::string text;
        for (char c : base) {
            if (c == ' ' || c == '\n') {
                const auto r = rng.below(6);
                if (r == 0)
                    text += "  \t";
                if (r == 1 && c == '\n')
                    text += "\r";
                if (r == 2 && c == '\n')
                    text += "\n% noise * 1 2\n";
                if (r == 3 && c == '\n')
                    text += "\n   \n";
            }
            text += c;
        }
        const Graph got = parse_pajek(text).to_graph();
        CHECK(got.adjacency() == want.adjacency());

        // Random byte damage must end in a value or a ParseError, never a crash.
        std::string broken = text;
        for (int j = 0; j < 3; ++j)
            broken[rng.below(broken.size())] = static_cast<char>(rng.below(128));
        try {
            parse_pajek(broken).to_graph();
        } catch (const Error&) {
            ++errors;
        }
    }
    CHECK(errors > 0);
}

TEST_CASE("edge lists") {
    const auto el = parse_edge_list("# comment\n3\n1 2\n2 3 0.5  # inline\n");
    CHECK(el.n_nodes == 3);
    CHECK(el.edges.size() == 2);
    const Graph g = el.to_graph();
    CHECK(g.adjacency()(1, 2) == 0.5);
    CHECK_THROWS_AS(parse_edge_list("3\n1 2\n2 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n1 4\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("3\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("three\n"), ParseError);
}

TEST_CASE("load_multilayer") {
    const fs::path d = scratch_dir();
    write_text_file((d / "a.net").string(), "*Vertices 32\n*Edges\n1 2\n");
    write_text_file((d / "b.txt").string(), "32\n3 4 2\n");
    write_text_file((d / "c.net").string(), "*Vertices 5\n");
    const auto one = load_multilayer({(d / "a.net").string()});
    CHECK(one.size() == 1);
    const auto two = load_multilayer({(d / "a.net").string(), (d / "b.txt").string()});
    REQUIRE(two.size() == 2);
    CHECK(two[0].n_nodes() == 32);
    CHECK(two[1].n_nodes() == 32);
    CHECK(two[1].has_edge(2, 3));
    CHECK_THROWS_AS(load_multilayer({(d / "a.net").string(), (d / "c.net").string()}), Error);
    CHECK_THROWS_AS(load_multilayer({(d / "missing.net").string()}), Error);
    fs::remove_all(d);
}

TEST_CASE("matrix CSV round trip") {
    const fs::path d = scratch_dir();
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const SymMatrix m = test::random_sym(6, rng) * std::exp(rng.uniform(-30, 30));
        const std::string p = (d / "m.csv").string();
        write_matrix_csv(m, p);
        CHECK(read_matrix_csv(p) == m);
    }
    Matrix one(1, 1);
    one << 3.5;
    write_matrix_csv(SymMatrix(one), (d / "one.csv").string());
    CHECK(read_text_file((d / "one.csv").string()) == "3.5\n");
    fs::remove_all(d);
}

TEST_CASE("matrix CSV errors") {
    CHECK_THROWS_AS(parse_matrix_csv("1,2\n3,4\n5,6\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix_csv("1,2\n3\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix_csv("1,x\n3,4\n"), ParseError);
    CHECK(parse_matrix_csv("1,2\r\n2,5\r\n")(0, 1) == 2.0);
    try {
        read_matrix_csv("/nonexistent/dir/m.csv");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
        CHECK(std::string(e.what()).find("/nonexistent/dir/m.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.txt", "x"), Error);
}
