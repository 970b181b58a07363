#ifndef JOLT_HAMIO_HPP
#define JOLT_HAMIO_HPP

#include <json.hpp>

#include <string>

#include "jolt/classify.hpp"
#include "jolt/normalform.hpp"

namespace jolt {

// .ham file: header `n=<int>; field=sqrt<d>|rational|float; name=<str>`
// followed by one polynomial expression (may span lines; '#' comments).
struct HamDocument {
    std::size_t n = 0;
    FieldSpec field;
    std::string name;
    std::string body;
    Poly poly{0};

    Hamiltonian hamiltonian() const { return Hamiltonian(n, poly); }
};

HamDocument parse_ham_document(const std::string& content);
HamDocument read_ham_file(const std::string& path);
std::string write_ham_document(const Hamiltonian& h, const FieldSpec& field,
                               const std::string& name);

// .map file: same header, then 2n expressions, one per line, q-images first.
struct MapDocument {
    std::size_t n = 0;
    FieldSpec field;
    std::string name;
    PolyVec map;
};

MapDocument parse_map_document(const std::string& content);
MapDocument read_map_file(const std::string& path);
std::string write_map_document(const PolyVec& f, std::size_t n, const FieldSpec& field,
                               const std::string& name);

// Comma-separated rational coordinates "1, -2/3, 0, ...".
ExactPoint parse_point(const std::string& text, std::size_t expected);

// --- JSON report pieces -------------------------------------------------

nlohmann::json coeff_to_json(const Coeff& c);
nlohmann::json point_to_json(const ExactPoint& p);
nlohmann::json dmat_to_json(const DMat& m);

// Stable-field classification report. Timing lives in a separate field the
// determinism contract excludes.
nlohmann::json classification_to_json(const ClassificationReport& report,
                                      const SampleBudget& budget, double elapsed_ms);

std::string render_classification_text(const ClassificationReport& report);

} // namespace jolt

#endif
