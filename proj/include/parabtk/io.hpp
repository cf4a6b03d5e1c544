#pragma once
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bundle.hpp"
#include "flatness.hpp"
#include "stability.hpp"

namespace parabtk {

using json = nlohmann::ordered_json;

struct InputIssue {
    std::string path;  // e.g. "structures[1].chain[0]"
    std::string message;
    std::string str() const { return path.empty() ? message : path + ": " + message; }
};

struct InputError : std::invalid_argument {
    std::vector<InputIssue> issues;
    explicit InputError(std::vector<InputIssue> is) : std::invalid_argument(join(is)), issues(std::move(is)) {}
    InputError(const std::string& path, const std::string& msg) : InputError(std::vector<InputIssue>{{path, msg}}) {}

private:
    static std::string join(const std::vector<InputIssue>& is) {
        std::string s;
        for (const auto& i : is) s += (s.empty() ? "" : "; ") + i.str();
        return s;
    }
};

template <class K>
struct InputDocument {
    FieldConfig field;
    RefinedParabolicBundle<K> bundle;
    std::optional<Weights> weights;
    std::optional<FormalData> lambda;
};

// "q", "Q", "fp:7"; the bare prime is accepted as well
inline FieldConfig parse_field(const std::string& s) {
    if (s == "q" || s == "Q") return FieldConfig::rationals();
    std::string num = s.rfind("fp:", 0) == 0 ? s.substr(3) : s;
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument("bad field: " + s);
    return FieldConfig::prime(uint32_t(std::stoul(num)));
}

// the field named in a document, or Q
inline FieldConfig document_field(const json& j) {
    if (j.is_object() && j.contains("field")) {
        if (!j["field"].is_string()) throw InputError("field", "expected a string");
        try {
            return parse_field(j["field"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InputError("field", e.what());
        }
    }
    return FieldConfig::rationals();
}

namespace detail {

inline Rat json_rat(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(long(j.get<long long>()));
    if (j.is_string()) {
        try {
            return Rat::parse(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw InputError(path, "expected an integer or a rational string p/q");
}

template <class K>
K to_field(const Rat& r) {
    if constexpr (K::finite) return K::from_rat(r);
    else return r;
}

template <class K>
K json_elem(const json& j, const std::string& path) {
    try {
        return to_field<K>(json_rat(j, path));
    } catch (const std::domain_error& e) {
        throw InputError(path, e.what());
    }
}

template <class K>
json elem_json(const K& x) {
    if constexpr (K::finite) return json(long(std::stol(x.str())));
    else {
        if (x.raw().get_den() == 1 && x.raw().get_num().fits_slong_p()) return json(x.raw().get_num().get_si());
        return json(x.str());
    }
}

template <class K>
Poly<K> json_poly(const json& j, const std::string& path, int n) {
    if (!j.is_array()) throw InputError(path, "expected a coefficient list");
    if (int(j.size()) > n) throw InputError(path, "degree must be below the multiplicity " + std::to_string(n));
    std::vector<K> c;
    for (size_t i = 0; i < j.size(); ++i) c.push_back(json_elem<K>(j[i], path + "[" + std::to_string(i) + "]"));
    return Poly<K>(c);
}

template <class K>
json poly_json(const Poly<K>& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(elem_json(c));
    return a;
}

template <class K>
TruncElement<K> json_gen(const json& j, const std::string& path, int n) {
    if (!j.is_array() || j.size() != 2) throw InputError(path, "a generator is a pair of polynomials in f");
    return TruncElement<K>(n, json_poly<K>(j[0], path + "[0]", n), json_poly<K>(j[1], path + "[1]", n));
}

template <class K>
json gen_json(const TruncElement<K>& g) {
    return json::array({poly_json(g.c[0]), poly_json(g.c[1])});
}

inline std::string idx(const std::string& p, size_t i) { return p + "[" + std::to_string(i) + "]"; }

template <class K>
RefinedStructure<K> json_structure(const json& s, const std::string& path, int n) {
    if (s.contains("free")) {
        auto g = json_gen<K>(s["free"], path + ".free", n);
        if (g.valuation() != 0) throw InputError(path + ".free", "generator must be a unit vector mod f");
        return RefinedStructure<K>::free(g);
    }
    if (!s.contains("chain") || !s["chain"].is_array()) throw InputError(path, "needs \"free\" or \"chain\"");
    const auto& ch = s["chain"];
    if (int(ch.size()) != n)
        throw InputError(path + ".chain", "chain has " + std::to_string(ch.size()) + " levels, expected " + std::to_string(n));
    std::vector<TruncSubmodule<K>> lv(n + 1, TruncSubmodule<K>::zero(n));
    for (size_t j = 0; j < ch.size(); ++j) {
        const std::string lp = idx(path + ".chain", j);
        if (!ch[j].is_array()) throw InputError(lp, "a level is a list of generators");
        std::vector<TruncElement<K>> gens;
        for (size_t g = 0; g < ch[j].size(); ++g) gens.push_back(json_gen<K>(ch[j][g], idx(lp, g), n));
        const int k = n - int(j);
        lv[k] = TruncSubmodule<K>::from_generators(gens, n);
        if (lv[k].length() != k)
            throw InputError(lp, "level " + std::to_string(k) + " has length " + std::to_string(lv[k].length()) + ", expected " + std::to_string(k));
        if (j > 0 && !lv[k + 1].contains(lv[k])) throw InputError(lp, "level " + std::to_string(k) + " is not contained in the level above");
    }
    return RefinedStructure<K>::from_levels(lv);
}

template <class K>
json structure_json(const RefinedStructure<K>& s, int point) {
    json o;
    o["point"] = point;
    if (s.top_is_free() && RefinedStructure<K>::free(s.top().v1()) == s) {
        o["free"] = gen_json(s.top().v1());
        return o;
    }
    json ch = json::array();
    for (int k = s.order(); k >= 1; --k) {
        json lv = json::array();
        for (const auto& g : s.level(k).generators()) lv.push_back(gen_json(g));
        ch.push_back(lv);
    }
    o["chain"] = ch;
    return o;
}

inline std::vector<Rat> json_rat_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected a list");
    std::vector<Rat> r;
    for (size_t i = 0; i < j.size(); ++i) r.push_back(json_rat(j[i], idx(path, i)));
    return r;
}

inline json rat_list_json(const std::vector<Rat>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(elem_json(x));
    return a;
}

}  // namespace detail

// every issue found is reported; throws InputError when any
template <class K>
InputDocument<K> parse_input(const json& j) {
    using namespace detail;
    std::vector<InputIssue> issues;
    auto guard = [&](auto&& fn) {
        try {
            fn();
        } catch (const InputError& e) {
            issues.insert(issues.end(), e.issues.begin(), e.issues.end());
        }
    };
    InputDocument<K> doc;
    if (!j.is_object()) throw InputError("", "document must be an object");
    guard([&] { doc.field = document_field(j); });
    if (!j.contains("divisor") || !j["divisor"].is_array()) {
        issues.push_back({"divisor", "missing list of {t, n}"});
    } else {
        const auto& dv = j["divisor"];
        for (size_t i = 0; i < dv.size(); ++i) {
            const std::string p = idx("divisor", i);
            guard([&] {
                if (!dv[i].is_object() || !dv[i].contains("t") || !dv[i].contains("n")) throw InputError(p, "needs t and n");
                MarkedPoint<K> mp{json_elem<K>(dv[i]["t"], p + ".t"), 0};
                if (!dv[i]["n"].is_number_integer() || dv[i]["n"].get<long long>() < 1 || dv[i]["n"].get<long long>() > 64)
                    throw InputError(p + ".n", "multiplicity must be a positive integer");
                mp.n = int(dv[i]["n"].get<long long>());
                for (size_t q = 0; q < doc.bundle.D.size(); ++q)
                    if (doc.bundle.D[q].t == mp.t) throw InputError(p + ".t", "duplicate marked point (same as divisor[" + std::to_string(q) + "])");
                doc.bundle.D.push_back(mp);
            });
        }
    }
    if (!j.contains("bundle") || !j["bundle"].is_object() || !j["bundle"].contains("d1") || !j["bundle"].contains("d2") ||
        !j["bundle"]["d1"].is_number_integer() || !j["bundle"]["d2"].is_number_integer()) {
        issues.push_back({"bundle", "needs integers d1 <= d2"});
    } else {
        doc.bundle.E = {int(j["bundle"]["d1"].get<long long>()), int(j["bundle"]["d2"].get<long long>())};
        if (doc.bundle.E.d1 > doc.bundle.E.d2) issues.push_back({"bundle", "needs d1 <= d2"});
    }
    if (!issues.empty()) throw InputError(issues);

    const int np = doc.bundle.npoints();
    std::vector<std::optional<RefinedStructure<K>>> st(np);
    if (!j.contains("structures") || !j["structures"].is_array()) {
        issues.push_back({"structures", "missing list of structures"});
    } else {
        const auto& ss = j["structures"];
        for (size_t q = 0; q < ss.size(); ++q) {
            const std::string p = idx("structures", q);
            guard([&] {
                if (!ss[q].is_object()) throw InputError(p, "expected an object");
                int pt = int(q);
                if (ss[q].contains("point")) {
                    if (!ss[q]["point"].is_number_integer()) throw InputError(p + ".point", "expected an index");
                    pt = int(ss[q]["point"].get<long long>());
                }
                if (pt < 0 || pt >= np) throw InputError(p + ".point", "no marked point with index " + std::to_string(pt));
                if (st[pt]) throw InputError(p + ".point", "second structure for point " + std::to_string(pt));
                st[pt] = json_structure<K>(ss[q], p, doc.bundle.D[pt].n);
            });
        }
        for (int i = 0; i < np; ++i)
            if (!st[i] && issues.empty()) issues.push_back({"structures", "no structure for point " + std::to_string(i)});
    }
    if (j.contains("weights")) {
        guard([&] {
            const auto& w = j["weights"];
            if (!w.is_array() || int(w.size()) != np) throw InputError("weights", "one list per marked point");
            Weights W;
            for (int i = 0; i < np; ++i) {
                const std::string p = idx("weights", i);
                auto row = json_rat_list(w[i], p);
                if (int(row.size()) != doc.bundle.D[i].n) throw InputError(p, "needs " + std::to_string(doc.bundle.D[i].n) + " entries");
                Weights one;
                one.w.push_back(row);
                if (!one.valid()) throw InputError(p, "ordering violated, need 1 >= w_1 >= ... >= w_n >= 0" + one.violation().substr(one.violation().find(':')));
                W.w.push_back(row);
            }
            doc.weights = W;
        });
    }
    if (j.contains("lambda")) {
        guard([&] {
            const auto& l = j["lambda"];
            if (!l.is_object() || !l.contains("a") || !l.contains("r_plus") || !l.contains("r_minus"))
                throw InputError("lambda", "needs a, r_plus and r_minus");
            FormalData fd;
            if (!l["a"].is_array()) throw InputError("lambda.a", "expected one list per point");
            for (size_t i = 0; i < l["a"].size(); ++i) fd.a.push_back(json_rat_list(l["a"][i], idx("lambda.a", i)));
            fd.r_plus = json_rat_list(l["r_plus"], "lambda.r_plus");
            fd.r_minus = json_rat_list(l["r_minus"], "lambda.r_minus");
            fd.d = doc.bundle.d();
            doc.lambda = fd;
        });
    }
    if (!issues.empty()) throw InputError(issues);
    for (auto& s : st) doc.bundle.s.push_back(*s);
    doc.bundle.validate();
    return doc;
}

template <class K>
InputDocument<K> parse_input(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("", std::string("not valid JSON: ") + e.what());
    }
    return parse_input<K>(j);
}

template <class K>
json bundle_json(const RefinedParabolicBundle<K>& B, const FieldConfig& field) {
    using namespace detail;
    json o;
    o["field"] = field.str();
    json dv = json::array();
    for (const auto& p : B.D) dv.push_back({{"t", elem_json(p.t)}, {"n", p.n}});
    o["divisor"] = dv;
    o["bundle"] = {{"d1", B.E.d1}, {"d2", B.E.d2}};
    json ss = json::array();
    for (int i = 0; i < B.npoints(); ++i) ss.push_back(structure_json(B.s[i], i));
    o["structures"] = ss;
    return o;
}

inline json weights_json(const Weights& w) {
    json a = json::array();
    for (const auto& r : w.w) a.push_back(detail::rat_list_json(r));
    return a;
}

inline json formal_data_json(const FormalData& fd) {
    json a = json::array();
    for (const auto& r : fd.a) a.push_back(detail::rat_list_json(r));
    return {{"a", a}, {"r_plus", detail::rat_list_json(fd.r_plus)}, {"r_minus", detail::rat_list_json(fd.r_minus)}};
}

template <class K>
json serialize(const InputDocument<K>& doc) {
    json o = bundle_json(doc.bundle, doc.field);
    if (doc.weights) o["weights"] = weights_json(*doc.weights);
    if (doc.lambda) o["lambda"] = formal_data_json(*doc.lambda);
    return o;
}

template <class K>
json line_json(const LineSubbundle<K>& L) {
    return {{"e", L.e}, {"section", json::array({detail::poly_json(L.p), detail::poly_json(L.q)})}};
}

inline json profile_json(const IntersectionProfile& P) {
    json pts = json::array();
    for (int i = 0; i < P.npoints(); ++i) {
        const auto nv = n_value(P.eps_vector(i));
        pts.push_back({{"m", P.m(i)}, {"eps", P.eps_str(i)}, {"N", nv.N}});
    }
    return pts;
}

}  // namespace parabtk
