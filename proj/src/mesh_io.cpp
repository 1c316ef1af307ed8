#include "umb/errors.hpp"
#include "umb/mesh.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace umb {

namespace {

std::string fmtDouble(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// token stream that skips blank lines and '#' comments
struct Tokens {
    explicit Tokens(std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) toks.push_back(tok);
        }
    }
    std::string next(const char* what) {
        if (pos >= toks.size())
            throw ParseError(std::string("unexpected end of file, expected ") + what);
        return toks[pos++];
    }
    long nextInt(const char* what) {
        std::string t = next(what);
        try {
            size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected integer for " + std::string(what) + ", got '" + t + "'");
        }
    }
    double nextDouble(const char* what) {
        std::string t = next(what);
        try {
            size_t used = 0;
            double v = std::stod(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected number for " + std::string(what) + ", got '" + t + "'");
        }
    }
    std::vector<std::string> toks;
    size_t pos = 0;
};

EmbeddedMesh parseOffLike(Tokens& t) {
    std::string header = t.next("OFF header");
    int dim = 3;
    if (header == "nOFF" || header == "NOFF") {
        dim = static_cast<int>(t.nextInt("ambient dimension"));
        if (dim < 3) throw ParseError("nOFF dimension must be >= 3");
    } else if (header != "OFF") {
        throw ParseError("expected OFF or nOFF header, got '" + header + "'");
    }
    long nv = t.nextInt("vertex count");
    long nf = t.nextInt("face count");
    t.nextInt("edge count");
    if (nv <= 0 || nf <= 0) throw ParseError("non-positive vertex/face count");

    Mat positions(nv, dim);
    for (long v = 0; v < nv; ++v)
        for (int k = 0; k < dim; ++k) positions(v, k) = t.nextDouble("coordinate");
    FaceMat faces(nf, 3);
    for (long f = 0; f < nf; ++f) {
        long arity = t.nextInt("face arity");
        if (arity != 3)
            throw ParseError("only triangle faces supported, face " +
                             std::to_string(f) + " has " + std::to_string(arity));
        for (int k = 0; k < 3; ++k)
            faces(f, k) = static_cast<int>(t.nextInt("face index"));
    }
    return EmbeddedMesh::fromData(std::move(positions), std::move(faces));
}

EmbeddedMesh parseObj(std::istream& in) {
    std::vector<std::array<double, 3>> verts;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            std::array<double, 3> p{};
            if (!(ls >> p[0] >> p[1] >> p[2]))
                throw ParseError("bad vertex on line " + std::to_string(lineno));
            verts.push_back(p);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string ref;
            while (ls >> ref) {
                auto slash = ref.find('/');
                if (slash != std::string::npos) ref.resize(slash);
                try {
                    idx.push_back(std::stol(ref));
                } catch (const std::exception&) {
                    throw ParseError("bad face index '" + ref + "' on line " +
                                     std::to_string(lineno));
                }
            }
            if (idx.size() != 3)
                throw ParseError("only triangle faces supported, line " +
                                 std::to_string(lineno));
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                long i = idx[k];
                if (i < 0) i = static_cast<long>(verts.size()) + 1 + i;
                f[k] = static_cast<int>(i - 1);
            }
            faces.push_back(f);
        }
    }
    if (verts.empty() || faces.empty()) throw ParseError("OBJ has no geometry");
    Mat positions(verts.size(), 3);
    for (size_t v = 0; v < verts.size(); ++v)
        for (int k = 0; k < 3; ++k) positions(v, k) = verts[v][k];
    FaceMat fmat(faces.size(), 3);
    for (size_t f = 0; f < faces.size(); ++f)
        for (int k = 0; k < 3; ++k) fmat(f, k) = faces[f][k];
    return EmbeddedMesh::fromData(std::move(positions), std::move(fmat));
}

MeshFormat formatFromPath(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext == "obj") return MeshFormat::OBJ;
    if (ext == "noff") return MeshFormat::NOFF;
    return MeshFormat::OFF; // OFF files may still carry an nOFF header
}

} // namespace

EmbeddedMesh parseMesh(std::istream& in, MeshFormat format) {
    if (format == MeshFormat::OBJ) return parseObj(in);
    Tokens t(in);
    return parseOffLike(t);
}

void writeMesh(const EmbeddedMesh& mesh, std::ostream& out, MeshFormat format) {
    const int dim = mesh.ambientDim();
    if (format == MeshFormat::OBJ) {
        if (dim != 3) throw IoError("OBJ supports only ambient dimension 3");
        for (int v = 0; v < mesh.numVertices(); ++v)
            out << "v " << fmtDouble(mesh.positions()(v, 0)) << ' '
                << fmtDouble(mesh.positions()(v, 1)) << ' '
                << fmtDouble(mesh.positions()(v, 2)) << '\n';
        for (int f = 0; f < mesh.numFaces(); ++f)
            out << "f " << mesh.faces()(f, 0) + 1 << ' ' << mesh.faces()(f, 1) + 1
                << ' ' << mesh.faces()(f, 2) + 1 << '\n';
        return;
    }
    bool noff = format == MeshFormat::NOFF || dim != 3;
    if (noff) {
        out << "nOFF\n" << dim << '\n';
    } else {
        out << "OFF\n";
    }
    out << mesh.numVertices() << ' ' << mesh.numFaces() << ' ' << mesh.numEdges()
        << '\n';
    for (int v = 0; v < mesh.numVertices(); ++v) {
        for (int k = 0; k < dim; ++k) {
            if (k) out << ' ';
            out << fmtDouble(mesh.positions()(v, k));
        }
        out << '\n';
    }
    for (int f = 0; f < mesh.numFaces(); ++f)
        out << "3 " << mesh.faces()(f, 0) << ' ' << mesh.faces()(f, 1) << ' '
            << mesh.faces()(f, 2) << '\n';
}

EmbeddedMesh loadMesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return parseMesh(in, format);
}

EmbeddedMesh loadMesh(const std::string& path) {
    return loadMesh(path, formatFromPath(path));
}

void saveMesh(const EmbeddedMesh& mesh, const std::string& path, MeshFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    writeMesh(mesh, out, format);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

void saveMesh(const EmbeddedMesh& mesh, const std::string& path) {
    saveMesh(mesh, path, formatFromPath(path));
}

} // namespace umb
