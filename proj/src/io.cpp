#include "fairdiv/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fairdiv {

using nlohmann::json;

nlohmann::json parse_json_exact(const std::string& text) {
    // Quote any bare number token that carries a fraction or exponent, so
    // nlohmann keeps its exact decimal digits instead of rounding to double.
    std::string out;
    out.reserve(text.size() + 16);
    bool in_string = false;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (in_string) {
            out += c;
            if (c == '\\' && i + 1 < text.size()) {
                out += text[i + 1];
                i += 2;
                continue;
            }
            if (c == '"') in_string = false;
            ++i;
            continue;
        }
        if (c == '"') {
            in_string = true;
            out += c;
            ++i;
            continue;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            if (text[j] == '-') ++j;
            bool fractional = false;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                    text[j] == 'e' || text[j] == 'E' || text[j] == '+' || text[j] == '-')) {
                if (text[j] == '.' || text[j] == 'e' || text[j] == 'E') fractional = true;
                ++j;
            }
            std::string tok = text.substr(i, j - i);
            if (fractional) {
                out += '"';
                out += tok;
                out += '"';
            } else {
                out += tok;
            }
            i = j;
            continue;
        }
        out += c;
        ++i;
    }
    try {
        return json::parse(out);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

Rational rational_from_json(const json& v) {
    if (v.is_string()) return rational_from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(v.get<long long>()));
    throw ParseError("expected a rational (string or integer), got: " + v.dump());
}

nlohmann::json rational_to_json(const Rational& r) { return to_string(r); }

namespace {

ValuationProfile parse_goods(const json& doc) {
    int n = doc.at("agents").get<int>();
    int m = doc.at("items").get<int>();
    if (n < 1 || m < 1) throw ParseError("agents and items must be positive");
    const auto& rows = doc.at("values");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ParseError("values must list one row per agent");
    ValuationProfile v;
    for (const auto& row : rows) {
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw ParseError("each value row must list one entry per item");
        std::vector<Rational> r;
        for (const auto& cell : row) r.push_back(rational_from_json(cell));
        v.values.push_back(std::move(r));
    }
    v.validate();
    return v;
}

std::vector<PiecewiseDensity> parse_cake(const json& doc) {
    int n = doc.at("agents").get<int>();
    const auto& rows = doc.at("densities");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ParseError("densities must list one density per agent");
    std::vector<PiecewiseDensity> out;
    for (const auto& row : rows) {
        if (!row.is_array() || row.empty()) throw ParseError("each density must list segments");
        PiecewiseDensity f;
        for (const auto& seg : row)
            f.segments.push_back({rational_from_json(seg.at("l")), rational_from_json(seg.at("r")),
                                  rational_from_json(seg.at("a")), rational_from_json(seg.at("b"))});
        f.validate();
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

Instance parse_instance(const std::string& text) {
    json doc = parse_json_exact(text);
    if (!doc.is_object()) throw ParseError("instance must be a JSON object");
    Instance inst;
    if (doc.contains("values"))
        inst.goods = parse_goods(doc);
    else if (doc.contains("densities"))
        inst.cake = parse_cake(doc);
    else
        throw ParseError("instance must contain either values or densities");
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string serialize_instance(const ValuationProfile& v) {
    json doc;
    doc["agents"] = v.n();
    doc["items"] = v.m();
    json rows = json::array();
    for (const auto& row : v.values) {
        json r = json::array();
        for (const auto& cell : row) r.push_back(rational_to_json(cell));
        rows.push_back(std::move(r));
    }
    doc["values"] = std::move(rows);
    return doc.dump(2);
}

std::string serialize_cake_instance(const std::vector<PiecewiseDensity>& densities) {
    json doc;
    doc["agents"] = static_cast<int>(densities.size());
    json rows = json::array();
    for (const auto& f : densities) {
        json segs = json::array();
        for (const auto& s : f.segments)
            segs.push_back({{"l", rational_to_json(s.l)},
                            {"r", rational_to_json(s.r)},
                            {"a", rational_to_json(s.a)},
                            {"b", rational_to_json(s.b)}});
        rows.push_back(std::move(segs));
    }
    doc["densities"] = std::move(rows);
    return doc.dump(2);
}

nlohmann::json allocation_to_json(const Allocation& x) {
    json owners = json::array();
    for (int o : x.owner) owners.push_back(o + 1);
    return owners;
}

Allocation allocation_from_string(const std::string& owners, int n, int m) {
    Allocation x;
    x.num_agents = n;
    std::stringstream ss(owners);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        int o = 0;
        try {
            o = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad allocation literal: " + owners);
        }
        if (pos != tok.size() || o < 1 || o > n)
            throw ParseError("bad allocation literal: " + owners);
        x.owner.push_back(o - 1);
    }
    if (static_cast<int>(x.owner.size()) != m)
        throw ParseError("allocation literal must assign every item");
    return x;
}

}  // namespace fairdiv
