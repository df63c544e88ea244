#include "pdiv/json_out.hpp"

namespace pdiv {

Json field_to_json(const FiniteField& f) {
    Json j;
    j["p"] = f.p();
    j["degree"] = f.degree();
    j["modulus"] = f.modulus();
    return j;
}

Json vector_to_json(const IsoVector& v) {
    // digit streams per copy, as arrays of [l, coefficient vector]
    Json comps = Json::array();
    for (const auto& cp : v.shape()->copies()) {
        Json entry;
        entry["j"] = cp.j + 1;
        entry["i"] = cp.i + 1;
        Json stream = Json::array();
        for (const auto& [l, d] : v.digit_stream(cp.j, cp.i)) {
            stream.push_back(Json::array({l, d.coeffs()}));
        }
        entry["stream"] = stream;
        comps.push_back(entry);
    }
    Json j;
    j["components"] = comps;
    j["certified"] = v.cert();
    return j;
}

Json lattice_to_json(const DieudonneLattice& L) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["shape"] = L.shape()->str();
    j["field"] = field_to_json(*L.ring()->base());
    j["precision"] = L.ring()->precision();
    j["certified"] = L.certified_precision();
    Json basis = Json::array();
    for (const auto& b : L.basis()) {
        Json e = vector_to_json(b);
        auto fi = b.first_index();
        e["first_index"] = Json::array({fi->j + 1, fi->i + 1, fi->l});
        basis.push_back(e);
    }
    j["basis"] = basis;
    return j;
}

Json profile_to_json(const PavingProfile& p) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["m"] = p.m;
    j["n"] = p.n;
    j["dim"] = p.dim;
    j["d"] = p.d;
    j["euler"] = p.euler();
    j["count_check"] = cycle_count_formula(p.m, p.n);
    return j;
}

Json cycle_to_json(const Cycle& c) {
    Json j;
    j["values"] = c.values;
    j["vb"] = c.vb_pairs().size();
    return j;
}

Json semimodule_to_json(const SemiModule& a) {
    Json j;
    j["m"] = a.m;
    j["n"] = a.n;
    j["fringe"] = a.fringe;
    j["normalized"] = a.is_normalized();
    return j;
}

} // namespace pdiv
