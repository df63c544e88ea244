// Command-line front end: exact invariants of moduli of p-divisible groups
// (dimensions, component descriptors, Betti profiles, smoothness) and direct
// Dieudonne-lattice computation over finite fields, plus the verification
// batteries behind them.

#include <iostream>

#include <CLI11.hpp>

#include "pdiv/grammar.hpp"
#include "pdiv/json_out.hpp"
#include "pdiv/verify.hpp"

namespace {

using namespace pdiv;

struct RunConfig {
    uint64_t p = 2;
    long field_degree = 0; // 0: lcm of the h_j, doubled
    long precision = 0;    // 0: c + 2h + 4
    uint64_t seed = 20240914;
    int trials = 50;
    bool json = false;
};

long resolved_degree(const RunConfig& cfg, const IsocrystalShape& shape) {
    return cfg.field_degree > 0 ? cfg.field_degree : 2 * shape.lcm_heights();
}

unsigned resolved_precision(const RunConfig& cfg, const IsocrystalShape& shape) {
    return cfg.precision > 0 ? (unsigned)cfg.precision : default_precision(shape);
}

RingPtr make_ring(const RunConfig& cfg, const ShapePtr& shape) {
    auto field = FiniteField::make(cfg.p, (unsigned)resolved_degree(cfg, *shape));
    return WittRing::make(field, resolved_precision(cfg, *shape));
}

void emit(const Json& j, bool as_json, const std::string& text) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text << "\n";
}

int cmd_dim(const std::string& shape_str, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(shape_str);
    long dim = moduli_dimension(*shape);
    Json j;
    j["schema"] = kSchemaVersion;
    j["shape"] = shape->str();
    j["dim"] = dim;
    j["dim_rho"] = boost::rational_cast<double>(dim_rho_formula(*shape));
    j["defect"] = defect(*shape);
    emit(j, cfg.json, std::to_string(dim));
    return 0;
}

int cmd_betti(const std::string& mn, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(mn);
    if (!shape->is_simple() || !shape->is_bi_infinitesimal())
        throw Error("betti requires a simple bi-infinitesimal m:n");
    auto pr = paving_profile(shape->copies()[0].m, shape->copies()[0].n);
    Json j = profile_to_json(pr);
    std::ostringstream os;
    os << "d = [";
    for (size_t i = 0; i < pr.d.size(); ++i) os << (i ? "," : "") << pr.d[i];
    os << "], euler = " << pr.euler();
    emit(j, cfg.json, os.str());
    return 0;
}

int cmd_semimodules(const std::string& mn, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(mn);
    if (!shape->is_simple() || !shape->is_bi_infinitesimal())
        throw Error("semimodules requires a simple bi-infinitesimal m:n");
    long m = shape->copies()[0].m, n = shape->copies()[0].n;
    auto cycles = enumerate_cycles(m, n);
    Json j;
    j["schema"] = kSchemaVersion;
    j["m"] = m;
    j["n"] = n;
    j["count"] = cycles.size();
    Json arr = Json::array();
    std::ostringstream os;
    for (const auto& c : cycles) {
        Json e = cycle_to_json(c);
        e["semimodule"] = semimodule_to_json(semimodule_from_cycle(c));
        arr.push_back(e);
        os << "B = (";
        for (size_t i = 0; i < c.values.size(); ++i) os << (i ? "," : "") << c.values[i];
        os << ")  |V(B)| = " << c.vb_pairs().size() << "\n";
    }
    j["cycles"] = arr;
    os << cycles.size() << " normalised semimodules";
    emit(j, cfg.json, os.str());
    return 0;
}

int cmd_smooth(const std::string& shape_str, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(shape_str);
    auto v = smoothness(*shape);
    Json j;
    j["schema"] = kSchemaVersion;
    j["shape"] = shape->str();
    j["verdict"] = smoothness_name(v.verdict);
    j["reason"] = v.reason;
    emit(j, cfg.json, smoothness_name(v.verdict) + " (" + v.reason + ")");
    return 0;
}

int cmd_pi0(const std::string& shape_str, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(shape_str);
    auto d = pi0_descriptor(*shape);
    Json j;
    j["schema"] = kSchemaVersion;
    j["shape"] = shape->str();
    j["ht_mult"] = d.ht_mult;
    j["ht_et"] = d.ht_et;
    j["has_bi"] = d.has_bi;
    std::ostringstream os;
    os << "pi0 = GL_" << d.ht_mult << "(Q_p)/GL_" << d.ht_mult << "(Z_p) x GL_" << d.ht_et
       << "(Q_p)/GL_" << d.ht_et << "(Z_p)" << (d.has_bi ? " x Z" : "");
    emit(j, cfg.json, os.str());
    return 0;
}

Json lattice_report(const DieudonneLattice& L) {
    Json j = lattice_to_json(L);
    j["vol"] = vol(L);
    j["a_invariant"] = a_invariant(L);
    j["dieudonne"] = is_dieudonne(L);
    return j;
}

int cmd_lattice(const std::string& sub, const std::string& shape_str,
                const std::string& vector_str, const std::string& semimodule_str,
                const std::string& coords_str, const RunConfig& cfg) {
    ShapePtr shape = parse_shape(shape_str);
    RingPtr ring = make_ring(cfg, shape);

    if (sub == "from-cycle") {
        if (!shape->is_simple()) throw Error("from-cycle requires a simple shape");
        long m = shape->copies()[0].m, n = shape->copies()[0].n;
        // semimodule given by generators, closed and normalised here
        std::vector<long> gens;
        {
            std::istringstream is(semimodule_str);
            std::string tok;
            while (std::getline(is, tok, ',')) gens.push_back(std::stol(tok));
        }
        if (gens.empty()) throw Error("--semimodule is required (comma list of generators)");
        SemiModule A = SemiModule::closure(m, n, gens).normalize();
        Cycle B = cycle_from_semimodule(A);
        auto vb = B.vb_pairs();
        std::map<std::pair<size_t, size_t>, FFElement> coords;
        if (!coords_str.empty()) {
            std::istringstream is(coords_str);
            std::string tok;
            while (std::getline(is, tok, ';')) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) throw ParseError("expected key=value in --coords", 0);
                std::string key = tok.substr(0, eq);
                FFElement val = parse_field_element(tok.substr(eq + 1), ring->base());
                if (key == "a" && vb.size() == 1) {
                    coords[vb[0]] = val;
                } else {
                    // a(d,i) with 0-based cycle positions
                    size_t l = key.find('('), r = key.find(')');
                    if (key.substr(0, 1) != "a" || l == std::string::npos ||
                        r == std::string::npos)
                        throw ParseError("coordinate keys are a(d,i)", 0);
                    std::string inner = key.substr(l + 1, r - l - 1);
                    auto comma = inner.find(',');
                    if (comma == std::string::npos)
                        throw ParseError("coordinate keys are a(d,i)", 0);
                    size_t d = (size_t)std::stoul(inner.substr(0, comma));
                    size_t i = (size_t)std::stoul(inner.substr(comma + 1));
                    coords[{d, i}] = val;
                }
            }
        }
        DieudonneLattice L = lattice_from_cycle_point(shape, ring, A, coords);
        Json j = lattice_report(L);
        j["semimodule"] = semimodule_to_json(semimodule_of(L));
        emit(j, cfg.json, "vol = " + std::to_string(vol(L)) + ", semimodule = {" +
                              semimodule_of(L).str() + "}");
        return 0;
    }

    if (vector_str.empty()) throw Error("a vector literal argument is required");
    IsoVector v = parse_vector(vector_str, shape, ring);
    if (sub == "closure") {
        DieudonneLattice L = dieudonne_closure(v);
        Json j = lattice_report(L);
        emit(j, cfg.json, "vol = " + std::to_string(vol(L)) + ", a-invariant = " +
                              std::to_string(a_invariant(L)) + ", certified = " +
                              std::to_string(L.certified_precision()));
        return 0;
    }
    if (sub == "vol" || sub == "ainv" || sub == "semimodule" || sub == "pclosure") {
        DieudonneLattice L = dieudonne_closure(v);
        if (sub == "vol") {
            Json j;
            j["schema"] = kSchemaVersion;
            j["vol"] = vol(L);
            j["certified"] = L.certified_precision();
            emit(j, cfg.json, std::to_string(vol(L)));
        } else if (sub == "ainv") {
            Json j;
            j["schema"] = kSchemaVersion;
            j["a_invariant"] = a_invariant(L);
            j["certified"] = L.certified_precision();
            emit(j, cfg.json, std::to_string(a_invariant(L)));
        } else if (sub == "semimodule") {
            SemiModule A = semimodule_of(L);
            Json j = semimodule_to_json(A);
            j["schema"] = kSchemaVersion;
            emit(j, cfg.json, "{" + A.str() + "}");
        } else {
            DieudonneLattice P = p_closure(L);
            bool is_m0 = lattice_equal(P, minimal_lattice(shape, ring));
            Json j = lattice_report(P);
            j["equals_M0"] = is_m0;
            emit(j, cfg.json, std::string("equals M0: ") + (is_m0 ? "true" : "false"));
        }
        return 0;
    }
    throw Error("unknown lattice subcommand: " + sub);
}

int cmd_verify(const std::string& suite, const RunConfig& cfg) {
    verify::LatticeOptions opt;
    opt.trials = cfg.trials;
    verify::Report rep;
    if (suite == "witt")
        rep = verify::witt_suite(cfg.seed);
    else if (suite == "counts")
        rep = verify::counts_suite();
    else if (suite == "formulas")
        rep = verify::formulas_suite(cfg.seed);
    else if (suite == "lattices")
        rep = verify::lattices_suite(cfg.seed, opt);
    else if (suite == "all")
        rep = verify::all_suites(cfg.seed, opt);
    else
        throw Error("unknown suite: " + suite + " (counts|formulas|lattices|witt|all)");

    if (cfg.json) {
        Json j;
        j["schema"] = kSchemaVersion;
        j["suite"] = suite;
        j["seed"] = cfg.seed;
        Json checks = Json::array();
        int failed = 0;
        for (const auto& c : rep.checks) {
            Json e;
            e["name"] = c.name;
            e["pass"] = c.pass;
            e["detail"] = c.detail;
            e["ms"] = (long)c.ms;
            checks.push_back(e);
            if (!c.pass) ++failed;
        }
        j["checks"] = checks;
        j["failed"] = failed;
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& c : rep.checks) {
            std::ostringstream os;
            os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) os << "  [" << c.detail << "]";
            os << "  (" << (long)c.ms << " ms)";
            std::cout << os.str() << "\n";
        }
    }
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariants of moduli spaces of p-divisible groups"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--p", cfg.p, "residue characteristic (prime)");
    app.add_option("--field-degree", cfg.field_degree,
                   "degree of the residue field F_{p^a} (default: lcm of the h_j, doubled)");
    app.add_option("--precision", cfg.precision, "p-adic digits retained (default: c + 2h + 4)");
    app.add_option("--seed", cfg.seed, "seed for randomized batteries");
    app.add_option("--trials", cfg.trials, "trials per battery cell");
    app.add_flag("--json", cfg.json, "machine-readable output");

    std::string shape_arg, vector_arg, semimodule_arg, coords_arg, suite_arg;

    auto* dim = app.add_subcommand("dim", "dimension of the moduli space");
    dim->add_option("shape", shape_arg, "shape, e.g. 2:3 or 1:2,1:1 or 2:3^2")->required();

    auto* betti = app.add_subcommand("betti", "Betti numbers d(j) for a simple isocrystal");
    betti->add_option("shape", shape_arg, "m:n, coprime")->required();

    auto* semi = app.add_subcommand("semimodules", "normalised semimodules/cycles for m:n");
    semi->add_option("shape", shape_arg, "m:n, coprime")->required();

    auto* smooth = app.add_subcommand("smooth", "smoothness classification");
    smooth->add_option("shape", shape_arg, "shape")->required();

    auto* pi0 = app.add_subcommand("pi0", "connected-component descriptor");
    pi0->add_option("shape", shape_arg, "shape")->required();

    auto* lat = app.add_subcommand("lattice", "Dieudonne-lattice computations");
    std::string lat_sub;
    lat->add_option("op", lat_sub, "closure|vol|ainv|semimodule|pclosure|from-cycle")->required();
    lat->add_option("--shape", shape_arg, "shape")->required();
    lat->add_option("vector", vector_arg, "vector literal, e.g. \"e_0 + [x]e_1\"");
    lat->add_option("--semimodule", semimodule_arg, "semimodule generators, e.g. \"-1,1\"");
    lat->add_option("--coords", coords_arg, "paving coordinates, e.g. \"a=x\" or \"a(4,1)=x+1\"");

    auto* ver = app.add_subcommand("verify", "run a verification battery");
    ver->add_option("suite", suite_arg, "counts|formulas|lattices|witt|all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dim->parsed()) return cmd_dim(shape_arg, cfg);
        if (betti->parsed()) return cmd_betti(shape_arg, cfg);
        if (semi->parsed()) return cmd_semimodules(shape_arg, cfg);
        if (smooth->parsed()) return cmd_smooth(shape_arg, cfg);
        if (pi0->parsed()) return cmd_pi0(shape_arg, cfg);
        if (lat->parsed())
            return cmd_lattice(lat_sub, shape_arg, vector_arg, semimodule_arg, coords_arg, cfg);
        if (ver->parsed()) return cmd_verify(suite_arg, cfg);
    } catch (const pdiv::ParseError& e) {
        std::cerr << "parse error at offset " << e.pos << ": " << e.what() << "\n";
        return 2;
    } catch (const pdiv::PrecisionExhausted& e) {
        std::cerr << "precision exhausted (depth reached: " << e.depth
                  << "): " << e.what() << "\n"
                  << "hint: raise --precision\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
