#include "parabtk/cli.hpp"

#include <iomanip>
#include <sstream>

#include "parabtk/atlas.hpp"
#include "parabtk/elm.hpp"

namespace parabtk {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> c = {"type",         "tableau", "stab", "stable",     "tame",     "admissible", "decomposable", "simple",
                                               "find-weights", "elm",     "flat-check", "flat-locus", "classify", "walls",      "tables"};
    return c;
}

namespace {

json verdict_json(Verdict v) { return verdict_name(v); }

json rat_json(const Rat& r) { return detail::elem_json(r); }

template <class K>
json witness_json(const ProfileWitness<K>& pw) {
    return {{"e", pw.e}, {"line", line_json(pw.L)}, {"points", profile_json(pw.profile)}, {"sum_m", pw.profile.total_m()}};
}

Rat parse_democratic(const std::string& s) {
    const std::string pre = "democratic:";
    if (s.rfind(pre, 0) != 0) throw UsageError("--weights expects democratic:<p/q>, got " + s);
    Rat v;
    try {
        v = Rat::parse(s.substr(pre.size()));
    } catch (const std::exception&) {
        throw UsageError("bad democratic weight: " + s.substr(pre.size()));
    }
    if (v < Rat(0) || v > Rat(1)) throw UsageError("democratic weight must lie in [0,1]");
    return v;
}

template <class K>
Weights resolve_weights(const InputDocument<K>& doc, const CliOptions& opt) {
    if (!opt.weights.empty()) return Weights::democratic(orders_of(doc.bundle), parse_democratic(opt.weights));
    if (doc.weights) return *doc.weights;
    throw UsageError("this command needs weights: pass --weights democratic:<p/q> or a weights section");
}

template <class K>
json type_report(const RefinedParabolicBundle<K>& B) {
    json pts = json::array();
    for (int i = 0; i < B.npoints(); ++i) {
        const auto& top = B.s[i].top();
        const auto ty = top.type();
        json gens = json::array();
        for (const auto& g : top.generators()) gens.push_back(g.str());
        pts.push_back({{"point", i}, {"n", B.D[i].n}, {"type", ty.str()}, {"a1", ty.a1}, {"a2", ty.a2}, {"free", top.is_free()}, {"normal_form", gens}});
    }
    return {{"splitting", {B.E.d1, B.E.d2}}, {"degree", B.d()}, {"points", pts}, {"parabolic", B.is_parabolic()}};
}

template <class K>
json tableau_report(const RefinedParabolicBundle<K>& B) {
    json pts = json::array();
    for (int i = 0; i < B.npoints(); ++i) {
        const auto t = B.s[i].tableau();
        auto nm = tableau_name(t);
        pts.push_back({{"point", i}, {"n", t.n}, {"name", nm ? json(nm->str()) : json(nullptr)}, {"shapes", t.str()}});
    }
    return {{"points", pts}};
}

template <class K>
json run_with(const std::string& cmd, const InputDocument<K>& doc, const CliOptions& opt) {
    const auto& B = doc.bundle;
    ProfileOptions po;
    po.seed = opt.seed;
    json r;
    r["command"] = cmd;
    r["field"] = doc.field.str();
    if (cmd == "type") {
        r["result"] = type_report(B);
    } else if (cmd == "tableau") {
        r["result"] = tableau_report(B);
    } else if (cmd == "stab") {
        const Weights w = resolve_weights(doc, opt);
        if (!w.valid()) throw UsageError("weight ordering violated: " + w.violation());
        json rows = json::array();
        for (const auto& pw : stability_profiles(B, po)) {
            json row = witness_json(pw);
            row["stab"] = rat_json(stab_from_profile(B.d(), pw.e, pw.profile, w));
            rows.push_back(row);
        }
        r["weights"] = weights_json(w);
        r["result"] = {{"subbundles", rows}};
    } else if (cmd == "stable") {
        const Weights w = resolve_weights(doc, opt);
        auto rep = is_w_stable(B, w, po);
        r["weights"] = weights_json(w);
        json res = {{"verdict", verdict_json(rep.verdict)}};
        if (rep.minimizer) {
            res["min_index"] = rat_json(rep.min_index);
            res["minimizer"] = witness_json(*rep.minimizer);
        }
        r["result"] = res;
    } else if (cmd == "tame" || cmd == "admissible") {
        auto rep = cmd == "tame" ? tame_report(B, po) : admissible_report(B, po);
        r["result"] = {{cmd, rep.holds}, {"violator", rep.violator ? witness_json(*rep.violator) : json(nullptr)}};
    } else if (cmd == "decomposable") {
        auto d = is_decomposable(B, opt.seed);
        json res = {{"decomposable", d.decomposable}, {"geometric", d.geometric}};
        if (d.witness) res["witness"] = {{"L1", line_json(d.witness->L1)}, {"L2", line_json(d.witness->L2)}};
        r["result"] = res;
    } else if (cmd == "simple") {
        r["result"] = {{"simple", is_simple_parabolic(B)}, {"parabolic", B.is_parabolic()}};
    } else if (cmd == "find-weights") {
        if (opt.strategy != "lp" && opt.strategy != "constructive") throw UsageError("--strategy is lp or constructive");
        auto s = find_stabilizing_weights(B, opt.strategy == "lp" ? WeightStrategy::ExactLP : WeightStrategy::Constructive, po);
        json res = {{"found", s.found}, {"strategy", opt.strategy}};
        if (s.found) {
            res["weights"] = weights_json(s.weights);
            res["margin"] = rat_json(s.margin);
            if (!s.method.empty()) res["method"] = s.method;
        } else {
            json cert = json::array();
            for (const auto& pw : s.certificate) cert.push_back(witness_json(pw));
            res["certificate"] = cert;
        }
        r["result"] = res;
    } else if (cmd == "elm") {
        if (opt.at.empty()) throw UsageError("elm needs --at <point index>[,<index>]");
        RefinedParabolicBundle<K> out;
        std::optional<Weights> w = doc.weights;
        if (!opt.weights.empty()) w = resolve_weights(doc, opt);
        for (int i : opt.at)
            if (i < 0 || i >= B.npoints()) throw UsageError("elm point index out of range: " + std::to_string(i));
        if (opt.named) {
            out = elm_named(B, opt.at);
        } else {
            out = B;
            for (int i : opt.at) out = elm_minus(out, i);
        }
        if (w)
            for (int i : opt.at) w = flip_weights(*w, i);
        InputDocument<K> od{doc.field, out, w, std::nullopt};
        r["result"] = serialize(od);
    } else if (cmd == "classify") {
        try {
            auto c = classify_special_full(B, true, po);
            json res = {{"shape", shape_name(shape_of(B.D))}, {"kind", kind_name(c.type.kind)}, {"label", c.type.label}, {"unlisted", c.unlisted}};
            json also = json::array();
            for (const auto& t : c.also) also.push_back(t.str());
            res["also"] = also;
            r["result"] = res;
        } catch (const UnsupportedBundle& e) {
            r["result"] = {{"kind", "Unsupported"}, {"reason", e.what()}};
        }
    } else {
        throw UsageError("command " + cmd + " is not available over " + doc.field.str());
    }
    return r;
}

json flat_check(const InputDocument<Rat>& doc) {
    if (!doc.lambda) throw UsageError("flat-check needs a lambda section");
    json r = {{"command", "flat-check"}, {"field", doc.field.str()}};
    auto bad = validate_formal_data(*doc.lambda, doc.bundle.D);
    if (!bad.empty()) {
        json v = json::array();
        for (const auto& b : bad) v.push_back({{"condition", b.condition}, {"detail", b.detail}});
        r["result"] = {{"valid_lambda", false}, {"violations", v}};
        return r;
    }
    auto f = lambda_flatness(doc.bundle, *doc.lambda);
    json p = json::array();
    for (const auto& x : f.pairings) p.push_back(rat_json(x));
    r["result"] = {{"valid_lambda", true}, {"flat", f.flat}, {"decomposable", f.decomposable}, {"pairings", p}};
    return r;
}

json flat_locus(const CliOptions& opt) {
    auto s = flat_shape_from_string(opt.shape);
    if (!s) throw UsageError("flat-locus needs --shape 2+2|4|2+2+1|3+2|4+1|5");
    std::vector<Rat> t = default_points(*s);
    FormalData fd;
    if (opt.input) {
        auto doc = parse_input<Rat>(*opt.input);
        if (!doc.lambda) throw UsageError("the input document has no lambda section");
        const auto mult = flat_shape_multiplicities(*s);
        if (doc.bundle.npoints() != int(mult.size())) throw UsageError("divisor does not match the shape");
        t.clear();
        for (int i = 0; i < doc.bundle.npoints(); ++i) {
            if (doc.bundle.D[i].n != mult[i]) throw UsageError("divisor does not match the shape");
            t.push_back(doc.bundle.D[i].t);
        }
        fd = *doc.lambda;
    } else {
        std::vector<MarkedPoint<Rat>> D;
        const auto mult = flat_shape_multiplicities(*s);
        for (size_t i = 0; i < t.size(); ++i) D.push_back({t[i], mult[i]});
        std::mt19937_64 rng(opt.seed);
        fd = random_formal_data(D, nonsimple_family(*s, std::vector<Rat>(flat_shape_params(*s), Rat(1)), t).d(), rng);
    }
    auto L = nonsimple_flat_locus(*s, fd, t);
    auto vec = [](const std::vector<Rat>& v) { return detail::rat_list_json(v); };
    json res = {{"shape", flat_shape_name(*s)}, {"functional", vec(L.functional)}, {"dimension", L.dimension}};
    if (L.point) res["point"] = vec(*L.point);
    json sp = json::array();
    for (const auto& v : L.spanning) sp.push_back(vec(v));
    if (!L.spanning.empty()) res["spanning"] = sp;
    json tp = json::array();
    for (const auto& x : t) tp.push_back(rat_json(x));
    return {{"command", "flat-locus"}, {"points", tp}, {"lambda", formal_data_json(fd)}, {"result", res}};
}

json walls_report(const CliOptions& opt) {
    json ws = json::array();
    if (opt.shape == "reduced4") {
        for (const auto& w : walls_reduced4()) ws.push_back(rat_json(w));
        return {{"command", "walls"}, {"shape", "reduced4"}, {"result", ws}};
    }
    auto s = shape_from_string(opt.shape);
    if (!s) throw UsageError("walls needs --shape D2111|D221|D311|D32|D41|D5|reduced4");
    for (const auto& w : walls(*s, opt.seed)) ws.push_back(rat_json(w));
    return {{"command", "walls"}, {"shape", shape_name(*s)}, {"result", ws}};
}

json tables_report(const CliOptions& opt) {
    json t1 = json::array();
    std::vector<DivisorShape> shapes = all_shapes();
    if (!opt.shape.empty()) {
        auto s = shape_from_string(opt.shape);
        if (!s) throw UsageError("unknown shape " + opt.shape);
        shapes = {*s};
    }
    for (auto s : shapes) {
        const auto A = build_atlas(s, opt.seed);
        for (size_t j = 0; j < A.types.size(); ++j) {
            auto I = democratic_intervals(A.reps[j]);
            const auto want = expected_chamber_verdicts(A.types[j].kind);
            json row = {{"shape", shape_name(s)}, {"type", A.types[j].str()}};
            bool ok = true;
            const char* cols[] = {"(0,1/5)", "(1/5,1/3)", "(1/3,3/5)", "(3/5,1)"};
            for (int c = 0; c < 4; ++c) {
                const Verdict v = I.at(chamber_samples()[c]);
                row[cols[c]] = verdict_name(v);
                ok = ok && v == want[c];
            }
            row["matches"] = ok;
            t1.push_back(row);
        }
        for (const auto& u : A.unrealizable) t1.push_back({{"shape", shape_name(s)}, {"type", u.str()}, {"realizable", false}});
    }
    json eps = json::array();
    for (int n = 2; n <= 5; ++n)
        for (const auto& e : epsilon_table(n)) {
            std::string pe = "(";
            for (size_t k = e.printed_eps.size(); k-- > 0;) pe += e.printed_eps[k] > 0 ? "+" : "-";
            pe += ")";
            eps.push_back({{"tableau", e.tab.str()}, {"m", e.m}, {"eps", e.eps_str()}, {"N", e.N}, {"printed_eps", pe}, {"printed_N", e.printed_N},
                           {"realizable", e.realizable}, {"deviation", e.deviation}});
        }
    return {{"command", "tables"}, {"stability", t1}, {"epsilon", eps}};
}

std::string scalar_str(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

bool flat_object(const json& v) {
    if (!v.is_object()) return false;
    for (const auto& [k, x] : v.items())
        if (x.is_structured() && !(x.is_array() && std::all_of(x.begin(), x.end(), [](const json& y) { return y.is_primitive(); }))) return false;
    return true;
}

void render(const json& v, int indent, std::ostringstream& os) {
    const std::string pad(indent, ' ');
    for (const auto& [k, x] : v.items()) {
        if (x.is_primitive()) {
            os << pad << k << ": " << scalar_str(x) << "\n";
        } else if (x.is_array() && !x.empty() && std::all_of(x.begin(), x.end(), flat_object)) {
            // aligned table over the union of keys
            std::vector<std::string> cols;
            for (const auto& row : x)
                for (const auto& [c, _] : row.items())
                    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
            std::vector<std::vector<std::string>> cells;
            std::vector<size_t> width(cols.size());
            for (size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
            for (const auto& row : x) {
                std::vector<std::string> line;
                for (size_t c = 0; c < cols.size(); ++c) {
                    std::string s = row.contains(cols[c]) ? (row[cols[c]].is_array() ? row[cols[c]].dump() : scalar_str(row[cols[c]])) : "";
                    width[c] = std::max(width[c], s.size());
                    line.push_back(s);
                }
                cells.push_back(line);
            }
            os << pad << k << ":\n";
            os << pad << "  ";
            for (size_t c = 0; c < cols.size(); ++c) os << std::left << std::setw(int(width[c]) + 2) << cols[c];
            os << "\n";
            for (const auto& line : cells) {
                os << pad << "  ";
                for (size_t c = 0; c < cols.size(); ++c) os << std::left << std::setw(int(width[c]) + 2) << line[c];
                os << "\n";
            }
        } else if (x.is_array() && std::all_of(x.begin(), x.end(), [](const json& y) { return y.is_primitive(); })) {
            os << pad << k << ": " << x.dump() << "\n";
        } else if (x.is_object()) {
            os << pad << k << ":\n";
            render(x, indent + 2, os);
        } else {
            os << pad << k << ": " << x.dump() << "\n";
        }
    }
}

}  // namespace

json run_command(const std::string& cmd, const CliOptions& opt) {
    if (std::find(command_names().begin(), command_names().end(), cmd) == command_names().end()) throw UsageError("unknown command " + cmd);
    if (cmd == "walls") return walls_report(opt);
    if (cmd == "tables") return tables_report(opt);
    if (cmd == "flat-locus") return flat_locus(opt);
    if (!opt.input) throw UsageError(cmd + " needs --input <file>");
    const FieldConfig field = opt.field ? *opt.field : document_field(*opt.input);
    if (field.is_rational()) {
        auto doc = parse_input<Rat>(*opt.input);
        doc.field = field;
        if (cmd == "flat-check") return flat_check(doc);
        return run_with(cmd, doc, opt);
    }
    if (cmd == "flat-check") throw UsageError("flat-check works over Q only");
    Fp::set_modulus(field.p);
    auto doc = parse_input<Fp>(*opt.input);
    doc.field = field;
    return run_with(cmd, doc, opt);
}

std::string render_table(const json& report) {
    std::ostringstream os;
    render(report, 0, os);
    return os.str();
}

}  // namespace parabtk
