#include "forge/manifest.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "forge/error.hpp"
#include "forge/io_util.hpp"

namespace forge {

std::vector<const ManifestRecord*> Manifest::split(const std::string& name) const {
    std::vector<const ManifestRecord*> out;
    for (const auto& r : records) {
        if (r.split == name) out.push_back(&r);
    }
    return out;
}

std::filesystem::path Manifest::resolve(const ManifestRecord& rec) const {
    const std::filesystem::path p(rec.mesh_path);
    return p.is_absolute() ? p : base_dir / p;
}

namespace {

bool valid_split(const std::string& s) { return s == "train" || s == "val" || s == "test"; }

double parse_number(const std::string& tok, const std::string& what, int line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
        throw parse_error("bad " + what + " '" + tok + "'", line);
    }
    return v;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    Manifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : ".";

    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw parse_error("empty manifest", 1);
    ++lineno;
    if (line.rfind("forge-manifest v1", 0) != 0) {
        throw parse_error("expected 'forge-manifest v1' header", 1);
    }
    if (!std::getline(in, line)) throw parse_error("missing dataset header line", 2);
    ++lineno;
    {
        std::istringstream hs(line);
        std::string kv;
        while (hs >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw parse_error("expected key=value in dataset header, got '" + kv + "'", 2);
            }
            const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "wear_field") {
                m.wear_field = value;
            } else if (key == "geometry") {
                m.geometry = value;
            } else {
                throw parse_error("unknown dataset header key '" + key + "'", 2);
            }
        }
    }

    std::set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ManifestRecord rec;
        std::string t_tok, mu_tok;
        if (!(ls >> rec.mesh_path >> t_tok >> mu_tok >> rec.split >> rec.source_id)) {
            throw parse_error("expected 'mesh_path temperature friction split source_id'",
                              lineno);
        }
        std::string extra;
        if (ls >> extra) throw parse_error("trailing token '" + extra + "'", lineno);
        rec.temperature = parse_number(t_tok, "temperature", lineno);
        rec.friction = parse_number(mu_tok, "friction coefficient", lineno);
        if (rec.friction < 0) {
            throw validation_error("friction coefficient must be >= 0 (record '" +
                                   rec.source_id + "')");
        }
        if (!valid_split(rec.split)) {
            throw parse_error("split must be train|val|test, got '" + rec.split + "'", lineno);
        }
        if (!seen_ids.insert(rec.source_id).second) {
            throw validation_error("duplicate source_id '" + rec.source_id + "' in manifest");
        }
        if (!std::filesystem::exists(m.resolve(rec))) {
            throw validation_error("mesh file '" + m.resolve(rec).string() +
                                   "' does not exist");
        }
        m.records.push_back(std::move(rec));
    }
    return m;
}

std::string manifest_to_string(const Manifest& m) {
    std::ostringstream os;
    os << "forge-manifest v1\n";
    os << "wear_field=" << m.wear_field;
    if (!m.geometry.empty()) os << " geometry=" << m.geometry;
    os << "\n";
    os << "# mesh_path temperature friction split source_id\n";
    char buf[64];
    for (const auto& r : m.records) {
        os << r.mesh_path << ' ';
        std::snprintf(buf, sizeof buf, "%.17g %.17g", r.temperature, r.friction);
        os << buf << ' ' << r.split << ' ' << r.source_id << '\n';
    }
    return os.str();
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    write_file_atomic(path, manifest_to_string(m));
}

}  // namespace forge
