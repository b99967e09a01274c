#include "ggm/io.hpp"

#include "ggm/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ggm {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorKind::IoError, "read failed for '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out)
        throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

namespace {

struct Token {
    std::string text;
    std::size_t column;  // 1-based
    bool quoted = false;
};

// Splits on whitespace; "double quoted" tokens may contain spaces.
std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        Token t;
        t.column = i + 1;
        if (line[i] == '"') {
            const std::size_t close = line.find('"', i + 1);
            if (close == std::string_view::npos)
                throw ParseError(line_no, i + 1, "unterminated quoted label");
            t.text = std::string(line.substr(i + 1, close - i - 1));
            t.quoted = true;
            i = close + 1;
        } else {
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
                ++i;
            t.text = std::string(line.substr(start, i - start));
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back(line);
        if (end == text.size())
            break;
        start = end + 1;
    }
    return lines;
}

bool parse_size(const std::string& s, std::size_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void insert_edge(std::map<std::pair<std::size_t, std::size_t>, double>& acc, std::size_t i,
                 std::size_t j, double w) {
    if (i == j || w == 0.0)
        return;
    if (w < 0.0)
        throw_invalid("negative edge weights cannot form an adjacency matrix");
    auto key = std::minmax(i, j);
    auto [it, fresh] = acc.emplace(key, w);
    if (!fresh)
        it->second = std::max(it->second, w);
}

Graph build_graph(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, double>& acc,
                  bool binarize) {
    Graph g(n);
    for (const auto& [key, w] : acc)
        g.add_edge(key.first, key.second, binarize ? 1.0 : w);
    return g;
}

}  // namespace

PajekNetwork parse_pajek(std::string_view text) {
    enum class Section { None, Vertices, Links, Ignored };
    PajekNetwork net;
    Section section = Section::None;
    bool have_vertices = false;
    bool directed = false;

    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        const auto tokens = tokenize(lines[ln], line_no);
        if (tokens.empty() || tokens.front().text.front() == '%')
            continue;
        const Token& head = tokens.front();
        if (!head.quoted && head.text.front() == '*') {
            const std::string kw = lower(head.text);
            if (kw == "*network") {
                section = Section::Ignored;
            } else if (kw == "*vertices") {
                if (have_vertices)
                    throw ParseError(line_no, head.column, "duplicate *Vertices header");
                if (tokens.size() < 2 || !parse_size(tokens[1].text, net.n_vertices))
                    throw ParseError(line_no, tokens.size() < 2 ? head.column + head.text.size()
                                                                : tokens[1].column,
                                     "*Vertices needs a nonnegative vertex count");
                net.labels.assign(net.n_vertices, std::string());
                have_vertices = true;
                section = Section::Vertices;
            } else if (kw == "*edges" || kw == "*arcs") {
                if (!have_vertices)
                    throw ParseError(line_no, head.column, head.text + " before *Vertices");
                directed = kw == "*arcs";
                section = Section::Links;
            } else {
                throw ParseError(line_no, head.column, "unsupported section " + head.text);
            }
            continue;
        }
        switch (section) {
        case Section::None:
            throw ParseError(line_no, head.column, "data before any section header");
        case Section::Ignored:
            break;
        case Section::Vertices: {
            std::size_t idx = 0;
            if (!parse_size(head.text, idx))
                throw ParseError(line_no, head.column, "vertex index is not an integer");
            if (idx < 1 || idx > net.n_vertices)
                throw ParseError(line_no, head.column,
                                 "vertex index " + head.text + " outside 1.." +
                                     std::to_string(net.n_vertices));
            if (tokens.size() > 1)
                net.labels[idx - 1] = tokens[1].text;
            break;
        }
        case Section::Links: {
            if (tokens.size() < 2)
                throw ParseError(line_no, head.column, "link line needs two vertex indices");
            std::size_t ends[2];
            for (int t = 0; t < 2; ++t) {
                const Token& tok = tokens[static_cast<std::size_t>(t)];
                if (!parse_size(tok.text, ends[t]))
                    throw ParseError(line_no, tok.column, "vertex index is not an integer");
                if (ends[t] < 1 || ends[t] > net.n_vertices)
                    throw ParseError(line_no, tok.column,
                                     "vertex index " + tok.text + " outside 1.." +
                                         std::to_string(net.n_vertices));
            }
            double w = 1.0;
            if (tokens.size() > 2 && !parse_double(tokens[2].text, w))
                throw ParseError(line_no, tokens[2].column,
                                 "edge weight '" + tokens[2].text + "' is not a number");
            net.links.push_back({ends[0] - 1, ends[1] - 1, w, directed});
            break;
        }
        }
    }
    if (!have_vertices)
        throw ParseError(lines.size(), 1, "missing *Vertices header");
    return net;
}

PajekNetwork read_pajek_file(const std::string& path) {
    try {
        return parse_pajek(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.detail());
    }
}

Graph PajekNetwork::to_graph(bool binarize) const {
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const Link& l : links)
        insert_edge(acc, l.from, l.to, l.weight);
    return build_graph(n_vertices, acc, binarize);
}

EdgeListFile parse_edge_list(std::string_view text) {
    EdgeListFile f;
    bool have_header = false;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seen;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::size_t line_no = ln + 1;
        std::string_view line = lines[ln];
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto tokens = tokenize(line, line_no);
        if (tokens.empty())
            continue;
        if (!have_header) {
            if (tokens.size() != 1 || !parse_size(tokens[0].text, f.n_nodes) || f.n_nodes == 0)
                throw ParseError(line_no, tokens[0].column,
                                 "first line must hold a positive node count");
            have_header = true;
            continue;
        }
        if (tokens.size() < 2 || tokens.size() > 3)
            throw ParseError(line_no, tokens[0].column, "expected 'i j [weight]'");
        EdgeListFile::Edge e{0, 0, 1.0};
        if (!parse_size(tokens[0].text, e.i) || e.i < 1 || e.i > f.n_nodes)
            throw ParseError(line_no, tokens[0].column, "node index out of range");
        if (!parse_size(tokens[1].text, e.j) || e.j < 1 || e.j > f.n_nodes)
            throw ParseError(line_no, tokens[1].column, "node index out of range");
        if (e.i == e.j)
            throw ParseError(line_no, tokens[0].column, "self-loop");
        if (tokens.size() == 3 && (!parse_double(tokens[2].text, e.weight) || !(e.weight > 0.0)))
            throw ParseError(line_no, tokens[2].column, "weight must be a positive number");
        if (!seen.emplace(std::minmax(e.i, e.j), line_no).second)
            throw ParseError(line_no, tokens[0].column, "duplicate edge");
        f.edges.push_back(e);
    }
    if (!have_header)
        throw ParseError(lines.size(), 1, "empty edge list");
    return f;
}

Graph EdgeListFile::to_graph(bool binarize) const {
    Graph g(n_nodes);
    for (const Edge& e : edges)
        g.add_edge(e.i - 1, e.j - 1, binarize ? 1.0 : e.weight);
    return g;
}

std::vector<Graph> load_multilayer(const std::vector<std::string>& paths, bool binarize) {
    if (paths.empty())
        throw_invalid("load_multilayer: no layer files given");
    std::vector<Graph> layers;
    for (const auto& path : paths) {
        const bool pajek = path.size() >= 4 && lower(path.substr(path.size() - 4)) == ".net";
        if (pajek) {
            layers.push_back(read_pajek_file(path).to_graph(binarize));
        } else {
            try {
                layers.push_back(parse_edge_list(read_text_file(path)).to_graph(binarize));
            } catch (const ParseError& e) {
                throw ParseError(e.line(), e.column(), path + ": " + e.detail());
            }
        }
        if (layers.back().n_nodes() != layers.front().n_nodes())
            throw_invalid("layer '" + path + "' has " +
                          std::to_string(layers.back().n_nodes()) + " nodes, expected " +
                          std::to_string(layers.front().n_nodes()));
    }
    return layers;
}

void write_matrix_csv(const SymMatrix& m, const std::string& path) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j > 0)
                out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out += buf;
        }
        out += '\n';
    }
    write_text_file(path, out);
}

SymMatrix parse_matrix_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_line;
    const auto lines = split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = lines[ln];
        if (line.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        std::vector<double> row;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            std::string_view cell =
                line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                   : comma - start);
            const std::size_t a = cell.find_first_not_of(" \t");
            const std::size_t b = cell.find_last_not_of(" \t");
            const std::string_view trimmed =
                a == std::string_view::npos ? std::string_view() : cell.substr(a, b - a + 1);
            double v = 0.0;
            if (!parse_double(trimmed, v))
                throw ParseError(ln + 1, start + 1, "cell is not a finite number");
            row.push_back(v);
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
        row_line.push_back(ln + 1);
    }
    const std::size_t n = rows.size();
    if (n == 0)
        throw ParseError(1, 1, "empty matrix file");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw ParseError(row_line[i], 1,
                             "row has " + std::to_string(rows[i].size()) +
                                 " columns; square matrix of size " + std::to_string(n) +
                                 " expected");
        for (std::size_t j = 0; j < n; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return SymMatrix(std::move(m));
}

SymMatrix read_matrix_csv(const std::string& path) {
    try {
        return parse_matrix_csv(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.detail());
    }
}

}  // namespace ggm
