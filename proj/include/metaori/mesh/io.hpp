#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "../error.hpp"
#include "trimesh.hpp"
#include "validate.hpp"

namespace metaori {

enum class MeshFormat { StlBinary, ObjAscii };

inline MeshFormat format_from_name(const std::string& name)
{
    if (name == "stl" || name == "stl-binary") return MeshFormat::StlBinary;
    if (name == "obj" || name == "obj-ascii") return MeshFormat::ObjAscii;
    fail(ErrorKind::InvalidParams, "unknown mesh format '" + name + "'");
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& out, float f)
{
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

inline std::uint32_t get_u32(const std::string& in, std::size_t off)
{
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[off + i])) << (8 * i);
    return v;
}

inline float get_f32(const std::string& in, std::size_t off)
{
    std::uint32_t bits = get_u32(in, off);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

} // namespace detail

inline std::string export_stl(const TriMesh& m)
{
    std::string out;
    out.reserve(84 + 50 * m.triangles.size());
    std::string header = "metaori binary STL";
    header.resize(80, '\0');
    out += header;
    detail::put_u32(out, static_cast<std::uint32_t>(m.triangles.size()));
    for (const Tri& t : m.triangles) {
        float pf[3][3];
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) pf[v][k] = static_cast<float>(m.vertices[t[v]][k]);
        double e1[3], e2[3];
        for (int k = 0; k < 3; ++k) {
            e1[k] = static_cast<double>(pf[1][k]) - static_cast<double>(pf[0][k]);
            e2[k] = static_cast<double>(pf[2][k]) - static_cast<double>(pf[0][k]);
        }
        double n[3] = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
        double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (len > 0) {
            for (double& c : n) c /= len;
        } else {
            n[0] = 0; n[1] = 0; n[2] = 1;
        }
        for (int k = 0; k < 3; ++k) detail::put_f32(out, static_cast<float>(n[k]));
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) detail::put_f32(out, pf[v][k]);
        out.push_back('\0');
        out.push_back('\0');
    }
    return out;
}

inline std::string export_obj(const TriMesh& m)
{
    std::string out = "# metaori\n";
    char buf[128];
    for (const Vec3& v : m.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out += buf;
    }
    for (const Tri& t : m.triangles) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

inline std::string export_mesh(const TriMesh& m, MeshFormat format)
{
    if (m.empty()) fail(ErrorKind::EmptyMesh, "mesh has no triangles");
    ValidateOptions opt;
    opt.check_self_intersections = false;
    MeshReport r = validate_mesh(m, opt);
    if (!r.closed_manifold() || r.signed_volume <= 0)
        fail(ErrorKind::InvalidMesh, "mesh is not a closed manifold with positive volume");
    return format == MeshFormat::StlBinary ? export_stl(m) : export_obj(m);
}

inline TriMesh read_stl(const std::string& bytes, double merge_tol = 1e-6)
{
    if (bytes.size() < 84) fail(ErrorKind::TruncatedFile, "STL shorter than 84-byte preamble");
    std::uint32_t count = detail::get_u32(bytes, 80);
    std::size_t need = 84 + 50ull * count;
    if (bytes.size() < need)
        fail(ErrorKind::TruncatedFile, "declared " + std::to_string(count) + " triangles need " + std::to_string(need)
                                           + " bytes, file has " + std::to_string(bytes.size()));
    TriMesh soup;
    for (std::uint32_t f = 0; f < count; ++f) {
        std::size_t off = 84 + 50ull * f + 12;
        int idx[3];
        for (int v = 0; v < 3; ++v) {
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                float x = detail::get_f32(bytes, off + 12 * v + 4 * k);
                if (!std::isfinite(x))
                    fail(ErrorKind::ParseError, "non-finite coordinate at byte offset " + std::to_string(off + 12 * v + 4 * k));
                p[k] = x;
            }
            idx[v] = soup.add_vertex(p);
        }
        soup.add_triangle(idx[0], idx[1], idx[2]);
    }
    return weld(soup, merge_tol);
}

inline TriMesh read_obj(const std::string& text)
{
    TriMesh m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::array<long, 3>> faces;
    std::vector<std::size_t> face_lines;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": malformed vertex");
            m.add_vertex(p);
        } else if (tag == "f") {
            std::vector<long> ids;
            std::string tok;
            while (ls >> tok) {
                std::size_t slash = tok.find('/');
                try {
                    ids.push_back(std::stol(tok.substr(0, slash)));
                } catch (const std::exception&) {
                    fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": malformed face index '" + tok + "'");
                }
            }
            if (ids.size() < 3) fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": face needs 3 indices");
            for (std::size_t k = 1; k + 1 < ids.size(); ++k) {
                faces.push_back({ids[0], ids[k], ids[k + 1]});
                face_lines.push_back(lineno);
            }
        }
    }
    long nv = static_cast<long>(m.vertices.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        Tri t;
        for (int k = 0; k < 3; ++k) {
            long i = faces[f][k];
            long z = i > 0 ? i - 1 : nv + i;
            if (i == 0 || z < 0 || z >= nv)
                fail(ErrorKind::ParseError, "line " + std::to_string(face_lines[f]) + ": vertex index " + std::to_string(i)
                                                + " out of range");
            t[k] = static_cast<int>(z);
        }
        m.triangles.push_back(t);
    }
    return m;
}

inline TriMesh read_mesh(const std::string& bytes, MeshFormat format)
{
    return format == MeshFormat::StlBinary ? read_stl(bytes) : read_obj(bytes);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(f), {});
}

inline void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot write '" + path + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorKind::IoError, "write failed for '" + path + "'");
}

} // namespace metaori
