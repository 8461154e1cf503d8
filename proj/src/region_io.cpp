#include "lemlab/region_io.hpp"

#include <fstream>
#include <sstream>

#include "lemlab/error.hpp"

namespace lemlab {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* key, const std::string& path) {
    if (!doc.is_object()) throw ParseError(path, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(path + "." + key, "missing field");
    return *it;
}

double number_field(const json& doc, const char* key, const std::string& path) {
    const auto& v = field(doc, key, path);
    if (!v.is_number()) throw ParseError(path + "." + key, "expected a number");
    return v.get<double>();
}

Complex complex_value(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (!v.is_string()) throw ParseError(path, "expected a complex number string like \"1+2i\"");
    try {
        return parse_complex(v.get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(path, e.what());
    }
}

Polynomial poly_value(const json& v, const std::string& path) {
    try {
        if (v.is_string()) return Polynomial::parse(v.get<std::string>());
        if (v.is_array()) {
            std::vector<Complex> c;
            for (std::size_t i = 0; i < v.size(); ++i)
                c.push_back(complex_value(v[i], path + "[" + std::to_string(i) + "]"));
            if (c.empty()) throw ParseError(path, "empty coefficient list");
            return Polynomial(std::move(c));
        }
    } catch (const ParseError& e) {
        if (e.field().rfind(path, 0) == 0) throw;
        throw ParseError(path, e.what());
    }
    throw ParseError(path, "expected a coefficient string or array");
}

template <class F>
Region guarded(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path, e.what());
    }
}

}  // namespace

json region_to_json(const Region& K) {
    const auto& v = K.variant();
    json doc;
    doc["type"] = K.kind();
    if (auto d = std::get_if<Disc>(&v)) {
        doc["center"] = format_complex(d->center);
        doc["radius"] = d->radius;
    } else if (auto a = std::get_if<Annulus>(&v)) {
        doc["center"] = format_complex(a->center);
        doc["r_in"] = a->r_in;
        doc["r_out"] = a->r_out;
    } else if (auto p = std::get_if<Polygon>(&v)) {
        json verts = json::array();
        for (auto z : p->vertices) verts.push_back(format_complex(z));
        doc["vertices"] = std::move(verts);
    } else if (auto s = std::get_if<Sublevel>(&v)) {
        doc["poly"] = s->g.to_string();
        doc["x"] = s->x;
    } else if (auto pre = std::get_if<Preimage>(&v)) {
        doc["poly"] = pre->p.to_string();
        doc["inner"] = region_to_json(*pre->inner);
    } else if (auto u = std::get_if<Union>(&v)) {
        json parts = json::array();
        for (const auto& r : u->parts) parts.push_back(region_to_json(r));
        doc["parts"] = std::move(parts);
    } else if (auto m = std::get_if<PixelMask>(&v)) {
        doc["origin"] = format_complex(m->origin);
        doc["h"] = m->h;
        json rows = json::array();
        for (int j = 0; j < m->ny; ++j) {
            std::string row;
            for (int i = 0; i < m->nx; ++i) row += m->at(i, j) ? '1' : '0';
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
    }
    return doc;
}

Region region_from_json(const json& doc, const std::string& path) {
    const auto& type_v = field(doc, "type", path);
    if (!type_v.is_string()) throw ParseError(path + ".type", "expected a string");
    const std::string type = type_v.get<std::string>();

    if (type == "disc") {
        const Complex c = complex_value(field(doc, "center", path), path + ".center");
        const double r = number_field(doc, "radius", path);
        return guarded(path + ".radius", [&] { return Region::disc(c, r); });
    }
    if (type == "annulus") {
        const Complex c = complex_value(field(doc, "center", path), path + ".center");
        const double a = number_field(doc, "r_in", path), b = number_field(doc, "r_out", path);
        return guarded(path + ".r_out", [&] { return Region::annulus(c, a, b); });
    }
    if (type == "polygon") {
        const auto& vs = field(doc, "vertices", path);
        if (!vs.is_array()) throw ParseError(path + ".vertices", "expected an array");
        std::vector<Complex> verts;
        for (std::size_t i = 0; i < vs.size(); ++i)
            verts.push_back(complex_value(vs[i], path + ".vertices[" + std::to_string(i) + "]"));
        return guarded(path + ".vertices", [&] { return Region::polygon(std::move(verts)); });
    }
    if (type == "sublevel") {
        Polynomial g = poly_value(field(doc, "poly", path), path + ".poly");
        const double x = number_field(doc, "x", path);
        return guarded(path + ".poly", [&] { return Region::sublevel(std::move(g), x); });
    }
    if (type == "preimage") {
        Polynomial p = poly_value(field(doc, "poly", path), path + ".poly");
        Region inner = region_from_json(field(doc, "inner", path), path + ".inner");
        return guarded(path + ".poly", [&] { return Region::preimage(std::move(p), std::move(inner)); });
    }
    if (type == "union") {
        const auto& ps = field(doc, "parts", path);
        if (!ps.is_array() || ps.empty()) throw ParseError(path + ".parts", "expected a non-empty array");
        std::vector<Region> parts;
        for (std::size_t i = 0; i < ps.size(); ++i)
            parts.push_back(region_from_json(ps[i], path + ".parts[" + std::to_string(i) + "]"));
        return Region::union_of(std::move(parts));
    }
    if (type == "mask") {
        PixelMask m;
        m.origin = complex_value(field(doc, "origin", path), path + ".origin");
        m.h = number_field(doc, "h", path);
        const auto& rows = field(doc, "rows", path);
        if (!rows.is_array() || rows.empty()) throw ParseError(path + ".rows", "expected a non-empty array");
        m.ny = static_cast<int>(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            const std::string row_path = path + ".rows[" + std::to_string(j) + "]";
            if (!rows[j].is_string()) throw ParseError(row_path, "expected a string of 0/1");
            const auto row = rows[j].get<std::string>();
            if (j == 0) m.nx = static_cast<int>(row.size());
            if (static_cast<int>(row.size()) != m.nx) throw ParseError(row_path, "row length differs");
            for (char ch : row) {
                if (ch != '0' && ch != '1') throw ParseError(row_path, "expected only 0 and 1");
                m.bits.push_back(ch == '1');
            }
        }
        return guarded(path + ".h", [&] { return Region::mask(std::move(m)); });
    }
    throw ParseError(path + ".type", "unknown region type '" + type + "'");
}

Region parse_region(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("region", e.what());
    }
    return region_from_json(doc);
}

std::string read_text_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError(file, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Region load_region(const std::string& file) { return parse_region(read_text_file(file)); }

}  // namespace lemlab
