#include "forge/vtk_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

namespace {

// Whitespace-delimited token stream over an istream, tracking the 1-based
// line number for parse errors. VTK value blocks wrap lines arbitrarily, so
// the reader cannot be line-oriented.
class Lexer {
public:
    explicit Lexer(std::istream& in) : in_(in) {}

    int line() const { return line_; }

    std::optional<std::string> next() {
        int c = in_.get();
        while (c != EOF && std::isspace(c)) {
            if (c == '\n') ++line_;
            c = in_.get();
        }
        if (c == EOF) return std::nullopt;
        std::string tok;
        while (c != EOF && !std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            c = in_.get();
        }
        if (c == '\n') ++line_;
        return tok;
    }

    std::string expect(const std::string& what) {
        auto tok = next();
        if (!tok) throw parse_error("unexpected end of input, expected " + what, line_);
        return *tok;
    }

    void expect_keyword(const std::string& kw) {
        std::string tok = expect("'" + kw + "'");
        if (tok != kw) throw parse_error("expected '" + kw + "', got '" + tok + "'", line_);
    }

    long expect_int(const std::string& what) {
        std::string tok = expect(what);
        char* end = nullptr;
        long v = std::strtol(tok.c_str(), &end, 10);
        if (end != tok.c_str() + tok.size()) {
            throw parse_error("expected integer " + what + ", got '" + tok + "'", line_);
        }
        return v;
    }

    double expect_double(const std::string& what) {
        std::string tok = expect(what);
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            throw parse_error("expected number " + what + ", got '" + tok + "'", line_);
        }
        return v;
    }

    // Rest of the current line (used for the title line). Leading whitespace
    // on the line is preserved; the trailing newline is consumed.
    std::string rest_of_line() {
        std::string s;
        std::getline(in_, s);
        ++line_;
        if (!s.empty() && s.back() == '\r') s.pop_back();
        return s;
    }

private:
    std::istream& in_;
    int line_ = 1;
};

// One or more SCALARS blocks following a CELL_DATA/POINT_DATA marker.
void read_scalar_blocks(Lexer& lex, std::string first_kw, long count,
                        const std::string& association,
                        std::map<std::string, std::vector<double>>& out,
                        std::optional<std::string>& pending) {
    std::string kw = std::move(first_kw);
    while (true) {
        if (kw != "SCALARS") {
            pending = kw;  // next section marker; hand back to caller
            return;
        }
        std::string name = lex.expect("field name");
        lex.expect("scalar type");  // parsed as double regardless
        // numComp is optional in legacy VTK; accept "1" or fall through to
        // LOOKUP_TABLE.
        std::string tok = lex.expect("'LOOKUP_TABLE' or component count");
        if (tok != "LOOKUP_TABLE") {
            char* end = nullptr;
            long comp = std::strtol(tok.c_str(), &end, 10);
            if (end != tok.c_str() + tok.size()) {
                throw parse_error("expected component count or LOOKUP_TABLE, got '" + tok + "'",
                                  lex.line());
            }
            if (comp != 1) {
                throw validation_error("field '" + name + "' has " + std::to_string(comp) +
                                       " components; only single-component scalars are supported");
            }
            lex.expect_keyword("LOOKUP_TABLE");
        }
        lex.expect("lookup table name");
        if (out.count(name) != 0) {
            throw validation_error("duplicate " + association + " field '" + name + "'");
        }
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i) {
            vals[static_cast<std::size_t>(i)] = lex.expect_double("value of field '" + name + "'");
        }
        out.emplace(name, std::move(vals));
        auto nxt = lex.next();
        if (!nxt) {
            pending = std::nullopt;
            return;
        }
        kw = *nxt;
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

UnstructuredMesh read_vtk(std::istream& in) {
    Lexer lex(in);

    std::string header = lex.rest_of_line();
    if (header.rfind("# vtk DataFile Version", 0) != 0) {
        throw parse_error("expected '# vtk DataFile Version ...' header", 1);
    }
    lex.rest_of_line();  // title, ignored
    std::string format = lex.expect("'ASCII'");
    if (format != "ASCII") {
        throw parse_error("only ASCII format is supported, got '" + format + "'", lex.line());
    }
    lex.expect_keyword("DATASET");
    std::string ds = lex.expect("dataset type");
    if (ds != "UNSTRUCTURED_GRID") {
        throw parse_error("only UNSTRUCTURED_GRID datasets are supported, got '" + ds + "'",
                          lex.line());
    }

    UnstructuredMesh mesh;

    lex.expect_keyword("POINTS");
    long np = lex.expect_int("point count");
    if (np < 0) throw parse_error("negative point count", lex.line());
    lex.expect("point scalar type");
    mesh.points.resize(static_cast<std::size_t>(np));
    for (long i = 0; i < np; ++i) {
        for (int k = 0; k < 3; ++k) {
            mesh.points[static_cast<std::size_t>(i)][k] = lex.expect_double("point coordinate");
        }
    }

    lex.expect_keyword("CELLS");
    long nc = lex.expect_int("cell count");
    long declared_size = lex.expect_int("cell list size");
    if (nc < 0) throw parse_error("negative cell count", lex.line());
    mesh.cells.resize(static_cast<std::size_t>(nc));
    for (long i = 0; i < nc; ++i) {
        long nv = lex.expect_int("cell vertex count");
        if (nv != 4) {
            throw unsupported_cell_error("cell " + std::to_string(i) + " has " +
                                         std::to_string(nv) +
                                         " vertices; only tetrahedra are supported");
        }
        for (int k = 0; k < 4; ++k) {
            mesh.cells[static_cast<std::size_t>(i)][k] =
                static_cast<int>(lex.expect_int("cell vertex index"));
        }
    }
    if (declared_size != nc * 5) {
        throw parse_error("CELLS declares size " + std::to_string(declared_size) + ", expected " +
                              std::to_string(nc * 5) + " for " + std::to_string(nc) +
                              " tetrahedra",
                          lex.line());
    }

    lex.expect_keyword("CELL_TYPES");
    long ntypes = lex.expect_int("cell type count");
    if (ntypes != nc) {
        throw parse_error("CELL_TYPES count " + std::to_string(ntypes) + " does not match " +
                              std::to_string(nc) + " cells",
                          lex.line());
    }
    for (long i = 0; i < ntypes; ++i) {
        long t = lex.expect_int("cell type");
        if (t != 10) {
            throw unsupported_cell_error("cell " + std::to_string(i) + " has VTK type " +
                                         std::to_string(t) +
                                         "; only type 10 (tetrahedron) is supported");
        }
    }

    std::optional<std::string> pending = lex.next();
    while (pending) {
        std::string kw = *pending;
        pending.reset();
        if (kw == "CELL_DATA" || kw == "POINT_DATA") {
            bool cell = (kw == "CELL_DATA");
            long n = lex.expect_int("data count");
            long expected = cell ? nc : np;
            if (n != expected) {
                throw validation_error(kw + " count " + std::to_string(n) +
                                       " does not match mesh (" + std::to_string(expected) + ")");
            }
            std::string first = lex.expect("'SCALARS'");
            read_scalar_blocks(lex, first, n, cell ? "cell" : "point",
                               cell ? mesh.cell_fields : mesh.point_fields, pending);
        } else {
            throw parse_error("unexpected token '" + kw + "'", lex.line());
        }
    }

    mesh.validate();
    return mesh;
}

UnstructuredMesh read_vtk_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
    return read_vtk(in);
}

void write_vtk(const UnstructuredMesh& mesh, std::ostream& out, const std::string& title) {
    out << "# vtk DataFile Version 3.0\n";
    out << title << "\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.points.size() << " double\n";
    for (const auto& p : mesh.points) {
        out << g17(p[0]) << ' ' << g17(p[1]) << ' ' << g17(p[2]) << '\n';
    }
    out << "CELLS " << mesh.cells.size() << ' ' << mesh.cells.size() * 5 << '\n';
    for (const auto& c : mesh.cells) {
        out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
    }
    out << "CELL_TYPES " << mesh.cells.size() << '\n';
    for (std::size_t i = 0; i < mesh.cells.size(); ++i) out << "10\n";
    if (!mesh.cell_fields.empty()) {
        out << "CELL_DATA " << mesh.cells.size() << '\n';
        for (const auto& [name, vals] : mesh.cell_fields) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (double v : vals) out << g17(v) << '\n';
        }
    }
    if (!mesh.point_fields.empty()) {
        out << "POINT_DATA " << mesh.points.size() << '\n';
        for (const auto& [name, vals] : mesh.point_fields) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (double v : vals) out << g17(v) << '\n';
        }
    }
}

std::string write_vtk_string(const UnstructuredMesh& mesh, const std::string& title) {
    std::ostringstream os;
    write_vtk(mesh, os, title);
    return os.str();
}

void write_vtk_file(const UnstructuredMesh& mesh, const std::filesystem::path& path,
                    const std::string& title) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    write_vtk(mesh, out, title);
    if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

}  // namespace forge
