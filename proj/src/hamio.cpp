#include "jolt/hamio.hpp"

#include <fstream>
#include <sstream>

namespace jolt {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct Header {
    std::size_t n = 0;
    FieldSpec field = FieldSpec::rational();
    std::string name;
};

Header parse_header(const std::string& line) {
    Header h;
    bool have_n = false;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const std::string entry = trim(item);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ParseError(0, "malformed header entry '" + entry + "'");
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key == "n") {
            try {
                h.n = static_cast<std::size_t>(std::stoul(value));
            } catch (const std::exception&) {
                throw ParseError(0, "bad dimension '" + value + "'");
            }
            have_n = true;
        } else if (key == "field") {
            if (value == "rational") {
                h.field = FieldSpec::rational();
            } else if (value == "float") {
                h.field = FieldSpec::floating();
            } else if (value.rfind("sqrt", 0) == 0) {
                try {
                    h.field = FieldSpec::quadratic(std::stol(value.substr(4)));
                } catch (const JoltError&) {
                    throw;
                } catch (const std::exception&) {
                    throw ParseError(0, "bad field '" + value + "'");
                }
            } else {
                throw ParseError(0, "unknown field '" + value + "'");
            }
        } else if (key == "name") {
            h.name = value;
        } else {
            throw ParseError(0, "unknown header key '" + key + "'");
        }
    }
    if (!have_n || h.n == 0) throw ParseError(0, "header must set n >= 1");
    return h;
}

// Header line + remaining payload lines ('#' comments and blanks dropped).
std::pair<Header, std::vector<std::string>> split_document(const std::string& content) {
    std::stringstream ss(content);
    std::string line;
    std::optional<Header> header;
    std::vector<std::string> payload;
    while (std::getline(ss, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header) {
            header = parse_header(t);
        } else {
            payload.push_back(t);
        }
    }
    if (!header) throw ParseError(0, "empty document");
    return {*header, std::move(payload)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FieldSpec effective_field(const FieldSpec& f) {
    // Float-mode documents parse exactly; the numeric interpretation is the
    // caller's business.
    return f.kind == FieldSpec::Kind::Float ? FieldSpec::rational() : f;
}

} // namespace

HamDocument parse_ham_document(const std::string& content) {
    const auto [header, payload] = split_document(content);
    if (payload.empty()) throw ParseError(0, "missing polynomial expression");
    std::string body;
    for (const auto& line : payload) {
        if (!body.empty()) body += " ";
        body += line;
    }
    HamDocument doc;
    doc.n = header.n;
    doc.field = header.field;
    doc.name = header.name;
    doc.body = body;
    doc.poly = parse_poly(body, header.n, effective_field(header.field));
    return doc;
}

HamDocument read_ham_file(const std::string& path) { return parse_ham_document(read_file(path)); }

std::string write_ham_document(const Hamiltonian& h, const FieldSpec& field,
                               const std::string& name) {
    std::string out = "n=" + std::to_string(h.n) + "; field=" + field.str();
    if (!name.empty()) out += "; name=" + name;
    out += "\n" + to_string(h.H, h.n) + "\n";
    return out;
}

MapDocument parse_map_document(const std::string& content) {
    const auto [header, payload] = split_document(content);
    const std::size_t nv = 2 * header.n;
    if (payload.size() != nv)
        throw ParseError(0, "map document needs exactly " + std::to_string(nv) +
                                " component lines, got " + std::to_string(payload.size()));
    MapDocument doc;
    doc.n = header.n;
    doc.field = header.field;
    doc.name = header.name;
    for (const auto& line : payload)
        doc.map.push_back(parse_poly(line, header.n, effective_field(header.field)));
    return doc;
}

MapDocument read_map_file(const std::string& path) { return parse_map_document(read_file(path)); }

std::string write_map_document(const PolyVec& f, std::size_t n, const FieldSpec& field,
                               const std::string& name) {
    std::string out = "n=" + std::to_string(n) + "; field=" + field.str();
    if (!name.empty()) out += "; name=" + name;
    out += "\n";
    for (const auto& component : f) out += to_string(component, n) + "\n";
    return out;
}

ExactPoint parse_point(const std::string& text, std::size_t expected) {
    ExactPoint p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string entry = trim(item);
        if (entry.empty()) throw ParseError(0, "empty coordinate in point");
        const auto slash = entry.find('/');
        try {
            if (slash == std::string::npos) {
                p.push_back(Coeff(make_rational(std::stol(entry), 1)));
            } else {
                p.push_back(Coeff(make_rational(std::stol(entry.substr(0, slash)),
                                                std::stol(entry.substr(slash + 1)))));
            }
        } catch (const std::exception&) {
            throw ParseError(0, "bad coordinate '" + entry + "'");
        }
    }
    if (p.size() != expected)
        throw ParseError(0, "point needs " + std::to_string(expected) + " coordinates, got " +
                                std::to_string(p.size()));
    return p;
}

// --- JSON ------------------------------------------------------------

nlohmann::json coeff_to_json(const Coeff& c) {
    nlohmann::json j;
    j["a"] = c.a().get_str();
    j["b"] = c.b().get_str();
    if (c.d() != 0) j["d"] = c.d();
    return j;
}

nlohmann::json point_to_json(const ExactPoint& p) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : p) j.push_back(coeff_to_json(c));
    return j;
}

nlohmann::json dmat_to_json(const DMat& m) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        j.push_back(row);
    }
    return j;
}

nlohmann::json classification_to_json(const ClassificationReport& report,
                                      const SampleBudget& budget, double elapsed_ms) {
    nlohmann::json j;
    j["tool"] = "jolt";
    j["version"] = "0.1.0";
    j["seed"] = budget.seed;
    j["n"] = report.n;
    j["flags"] = {
        {"symplectic_flow", report.symplectic_flow},
        {"affine_integrable", report.affine_integrable},
        {"ai_consistent", report.ai_consistent},
        {"regular", tristate_name(report.regular)},
        {"nondegenerate", tristate_name(report.nondegenerate)},
        {"shear", report.shear},
        {"triple_nilpotent", report.triple_nilpotent},
        {"homogeneous", report.homogeneous},
    };
    j["degrees"] = report.degrees;
    j["rank"] = report.rank;

    nlohmann::json witnesses = nlohmann::json::object();
    if (report.regular_witness) witnesses["regular"] = point_to_json(*report.regular_witness);
    if (report.nondegenerate_witness)
        witnesses["nondegenerate"] = point_to_json(*report.nondegenerate_witness);
    if (report.shear_witness) {
        witnesses["shear"] = {
            {"x", point_to_json(report.shear_witness->x)},
            {"y", point_to_json(report.shear_witness->y)},
            {"row", report.shear_witness->row},
            {"col", report.shear_witness->col},
            {"value", coeff_to_json(report.shear_witness->value)},
        };
    }
    if (report.triple_witness) {
        witnesses["triple_nilpotent"] = {
            {"x", point_to_json(report.triple_witness->x)},
            {"y", point_to_json(report.triple_witness->y)},
            {"z", point_to_json(report.triple_witness->z)},
            {"row", report.triple_witness->row},
            {"col", report.triple_witness->col},
            {"value", coeff_to_json(report.triple_witness->value)},
        };
    }
    j["witnesses"] = witnesses;
    if (!report.shear_note.empty()) j["shear_note"] = report.shear_note;
    j["timings_ms"] = {{"total", elapsed_ms}};
    return j;
}

std::string render_classification_text(const ClassificationReport& report) {
    std::ostringstream os;
    const auto row = [&](const char* label, const std::string& value) {
        os << "  " << label;
        for (std::size_t i = std::string(label).size(); i < 22; ++i) os << ' ';
        os << value << "\n";
    };
    os << "classification (n = " << report.n << ")\n";
    row("symplectic flow", report.symplectic_flow ? "yes" : "no");
    row("affine-integrable", report.affine_integrable ? "yes" : "no");
    row("regular", tristate_name(report.regular));
    std::string nd = tristate_name(report.nondegenerate);
    if (report.nondegenerate == TriState::Yes) nd += " (rank " + std::to_string(report.rank) + ")";
    row("nondegenerate", nd);
    row("shear", report.shear ? "yes" : (report.shear_note.empty() ? "no" : "no (criterion n/a)"));
    row("triple-nilpotent", report.triple_nilpotent ? "yes" : "no");
    std::string degs;
    for (const auto d : report.degrees) degs += (degs.empty() ? "" : ", ") + std::to_string(d);
    row("degrees", degs.empty() ? "none (zero)" : degs);
    row("homogeneous", report.homogeneous ? "yes" : "no");
    if (report.shear_witness) {
        os << "  shear witness         entry (" << report.shear_witness->row << ", "
           << report.shear_witness->col << ") = " << report.shear_witness->value.str() << "\n";
    }
    return os.str();
}

} // namespace jolt
