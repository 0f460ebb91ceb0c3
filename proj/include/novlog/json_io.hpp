#pragma once

// JSON encodings of the library's values. Readers validate as they go and
// report the JSON-pointer path of the first offending value.

#include "main_check.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace novlog::io {

using json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
  public:
    ValidationError(std::string path, const std::string &what)
        : std::runtime_error(what), path_(path.empty() ? "/" : std::move(path)) {}
    const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// JSON pointer under construction.
class Path {
  public:
    Path() = default;
    Path operator/(std::string_view key) const {
        std::string s = s_ + "/";
        for (char c : key) {
            if (c == '~')
                s += "~0";
            else if (c == '/')
                s += "~1";
            else
                s += c;
        }
        return Path(std::move(s));
    }
    Path operator/(std::size_t index) const { return Path(s_ + "/" + std::to_string(index)); }
    const std::string &str() const noexcept { return s_; }
    [[noreturn]] void fail(const std::string &what) const { throw ValidationError(s_, what); }

  private:
    explicit Path(std::string s) : s_(std::move(s)) {}
    std::string s_;
};

// ---- primitives ----------------------------------------------------------

inline const json &member(const json &j, const Path &p, std::string_view key) {
    if (!j.is_object())
        p.fail("expected an object");
    auto it = j.find(std::string(key));
    if (it == j.end())
        (p / key).fail("missing required field");
    return *it;
}

inline void allow_only(const json &j, const Path &p, std::initializer_list<std::string_view> keys) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
            (p / it.key()).fail("unexpected field");
}

inline const json &array_at(const json &j, const Path &p) {
    if (!j.is_array())
        p.fail("expected an array");
    return j;
}

inline long long read_int(const json &j, const Path &p, long long lo, long long hi) {
    if (!j.is_number_integer())
        p.fail("expected an integer");
    const long long v = j.get<long long>();
    if (v < lo || v > hi)
        p.fail("integer " + std::to_string(v) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) +
               "]");
    return v;
}

inline Rational read_rational(const json &j, const Path &p) {
    if (j.is_number_integer())
        return Rational(mpz_class(std::to_string(j.get<long long>())));
    if (!j.is_string())
        p.fail("expected a rational as \"p\" or \"p/q\"");
    auto q = parse_rational(j.get<std::string>());
    if (!q)
        p.fail("malformed rational \"" + j.get<std::string>() + "\"");
    return *q;
}

inline json write_rational(const Rational &q) { return to_string(q); }

// ---- groups --------------------------------------------------------------

/// {"cyclic": m, "rho_power": r} | {"elements", "table", "rho"} | {"rank", "rho"}.
inline GroupPtr read_group(const json &j, const Path &p) {
    if (!j.is_object())
        p.fail("expected a group object");
    try {
        if (j.contains("cyclic")) {
            allow_only(j, p, {"cyclic", "rho_power"});
            const int m = static_cast<int>(read_int(j["cyclic"], p / "cyclic", 1, 4096));
            const int r = j.contains("rho_power") ? static_cast<int>(read_int(j["rho_power"], p / "rho_power", -4096, 4096)) : 1;
            return TwistedGroup::cyclic(m, r);
        }
        if (j.contains("elements")) {
            allow_only(j, p, {"elements", "table", "rho"});
            std::vector<std::string> names;
            const auto &el = array_at(j["elements"], p / "elements");
            for (std::size_t i = 0; i < el.size(); ++i) {
                if (!el[i].is_string())
                    (p / "elements" / i).fail("element names must be strings");
                names.push_back(el[i].get<std::string>());
            }
            const int n = static_cast<int>(names.size());
            std::vector<std::vector<int>> table;
            const auto &tab = array_at(member(j, p, "table"), p / "table");
            for (std::size_t i = 0; i < tab.size(); ++i) {
                const auto &row = array_at(tab[i], p / "table" / i);
                std::vector<int> r;
                for (std::size_t k = 0; k < row.size(); ++k)
                    r.push_back(static_cast<int>(read_int(row[k], p / "table" / i / k, 0, n - 1)));
                table.push_back(std::move(r));
            }
            std::vector<int> rho;
            const auto &rj = array_at(member(j, p, "rho"), p / "rho");
            for (std::size_t i = 0; i < rj.size(); ++i)
                rho.push_back(static_cast<int>(read_int(rj[i], p / "rho" / i, 0, n - 1)));
            return TwistedGroup::finite(std::move(names), std::move(table), std::move(rho));
        }
        if (j.contains("rank")) {
            allow_only(j, p, {"rank", "rho"});
            const int rank = static_cast<int>(read_int(j["rank"], p / "rank", 0, static_cast<long long>(kMaxRank)));
            TwistedGroup::IntMatrix rho;
            if (j.contains("rho")) {
                const auto &rows = array_at(j["rho"], p / "rho");
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    const auto &row = array_at(rows[i], p / "rho" / i);
                    std::vector<std::int64_t> r;
                    for (std::size_t k = 0; k < row.size(); ++k)
                        r.push_back(read_int(row[k], p / "rho" / i / k, -1000000, 1000000));
                    rho.push_back(std::move(r));
                }
            }
            if (rank == 0)
                return TwistedGroup::integers();
            return TwistedGroup::free_abelian(rank, std::move(rho));
        }
    } catch (const std::invalid_argument &e) {
        p.fail(e.what());
    } catch (const Error &e) {
        p.fail(e.what());
    }
    p.fail("group needs one of \"cyclic\", \"elements\" or \"rank\"");
}

inline HElem read_h(const TwistedGroup &g, const json &j, const Path &p) {
    if (!j.is_string())
        p.fail("expected a kernel element name");
    auto h = g.parse_h(j.get<std::string>());
    if (!h)
        p.fail("unknown kernel element \"" + j.get<std::string>() + "\"");
    return *h;
}

/// {"t": n, "h": name}: the element t^n h.
inline GroupElement read_element(const TwistedGroup &g, const json &j, const Path &p) {
    if (!j.is_object())
        p.fail("expected a group element {\"t\": n, \"h\": name}");
    allow_only(j, p, {"t", "h"});
    GroupElement x = g.identity();
    if (j.contains("t"))
        x.n = read_int(j["t"], p / "t", -1000000, 1000000);
    if (j.contains("h"))
        x.h = read_h(g, j["h"], p / "h");
    return x;
}

inline json write_element(const TwistedGroup &g, const GroupElement &x) {
    return json{{"t", x.n}, {"h", g.h_name(x.h)}};
}

// ---- series --------------------------------------------------------------

/// [{"t": k, "h": name, "q": "p/q"}, ...]; "h" defaults to the identity and
/// "q" to 1. Terms above the truncation are dropped.
inline TruncatedSeries read_series(const GroupPtr &g, int order, const json &j, const Path &p) {
    TruncatedSeries s(g, order);
    const auto &terms = array_at(j, p);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Path tp = p / i;
        const json &t = terms[i];
        if (!t.is_object())
            tp.fail("expected a term {\"t\", \"h\", \"q\"}");
        allow_only(t, tp, {"t", "h", "q"});
        const int k = static_cast<int>(read_int(member(t, tp, "t"), tp / "t", -100000, 100000));
        const HElem h = t.contains("h") ? read_h(*g, t["h"], tp / "h") : g->identity_h();
        const Rational q = t.contains("q") ? read_rational(t["q"], tp / "q") : Rational(1);
        s.add_coeff(k, GroupAlgebraElement::monomial(h, q));
    }
    return s;
}

inline json write_series(const TruncatedSeries &s) {
    json out = json::array();
    for (const auto &[k, a] : s.coeffs())
        for (const auto &[h, q] : a.terms())
            out.push_back(json{{"t", k}, {"h", s.grp().h_name(h)}, {"q", write_rational(q)}});
    return out;
}

inline SeriesMatrix read_matrix(const GroupPtr &g, int order, const json &j, const Path &p) {
    const auto &rows = array_at(j, p);
    if (rows.empty())
        p.fail("matrix needs at least one row");
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &row = array_at(rows[i], p / i);
        if (i == 0)
            cols = row.size();
        else if (row.size() != cols)
            (p / i).fail("rows must all have the same length");
    }
    SeriesMatrix m(rows.size(), cols, TruncatedSeries(g, order));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = read_series(g, order, rows[i][k], p / i / k);
    return m;
}

inline json write_matrix(const SeriesMatrix &m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k)
            row.push_back(write_series(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

// ---- class series --------------------------------------------------------

/// [{"degree": k, "classes": {"<representative>": "p/q"}}, ...] listing only
/// nonzero degrees; representatives are canonical.
inline json write_class_series(const ClassSeries &c) {
    json out = json::array();
    const TwistedGroup &g = *c.group();
    for (int k = 0; k <= c.order(); ++k) {
        if (c.degree(k).empty())
            continue;
        json classes = json::object();
        for (const auto &[h, q] : c.degree(k))
            classes[g.h_name(h)] = write_rational(q);
        out.push_back(json{{"degree", k}, {"classes", std::move(classes)}});
    }
    return out;
}

/// Accepts any element of each class as its key.
inline ClassSeries read_class_series(const GroupPtr &g, int order, const json &j, const Path &p) {
    ClassSeries c(g, order);
    const auto &items = array_at(j, p);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const Path ip = p / i;
        allow_only(items[i], ip, {"degree", "classes"});
        const int k = static_cast<int>(read_int(items[i]["degree"], ip / "degree", 0, 100000));
        const json &classes = member(items[i], ip, "classes");
        if (!classes.is_object())
            (ip / "classes").fail("expected an object of class coefficients");
        for (auto it = classes.begin(); it != classes.end(); ++it) {
            const Path cp = ip / "classes" / it.key();
            auto h = g->parse_h(it.key());
            if (!h)
                cp.fail("unknown kernel element \"" + it.key() + "\"");
            const Rational q = read_rational(it.value(), cp);
            if (k > order)
                continue;
            try {
                c.add(g->conj_class({k, *h}), q);
            } catch (const Error &e) {
                cp.fail(e.what());
            }
        }
    }
    return c;
}

/// Class series together with the precision it is known to.
inline json write_class_result(const ClassSeries &c) {
    return json{{"order", c.order()}, {"classes", write_class_series(c)}};
}

// ---- complexes, models, homology maps ------------------------------------

inline BasedComplex read_complex(const GroupPtr &g, int order, const json &j, const Path &p) {
    if (!j.is_object())
        p.fail("expected a complex {\"ranks\", \"differentials\"}");
    allow_only(j, p, {"ranks", "differentials"});
    BasedComplex c{g, order, {}, {}};
    const auto &ranks = array_at(member(j, p, "ranks"), p / "ranks");
    for (std::size_t i = 0; i < ranks.size(); ++i)
        c.ranks.push_back(static_cast<std::size_t>(read_int(ranks[i], p / "ranks" / i, 0, 64)));
    const auto &diffs = array_at(member(j, p, "differentials"), p / "differentials");
    if (diffs.size() + 1 != c.ranks.size() && !(c.ranks.empty() && diffs.empty()))
        (p / "differentials").fail("need exactly one differential per positive degree");
    for (std::size_t k = 0; k < diffs.size(); ++k) {
        const Path dp = p / "differentials" / k;
        const auto &rows = array_at(diffs[k], dp);
        // Zero-rank source or target: allow [] and [[], ...].
        SeriesMatrix m(c.ranks[k], c.ranks[k + 1], TruncatedSeries(g, order));
        if (c.ranks[k] == 0 || c.ranks[k + 1] == 0) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (!array_at(rows[i], dp / i).empty())
                    (dp / i).fail("differential into or out of a zero module must be empty");
            if (!rows.empty() && rows.size() != c.ranks[k])
                dp.fail("differential has the wrong number of rows");
        } else {
            m = read_matrix(g, order, diffs[k], dp);
            if (m.rows() != c.ranks[k] || m.cols() != c.ranks[k + 1])
                dp.fail("differential d_" + std::to_string(k + 1) + " must be " + std::to_string(c.ranks[k]) + " x " +
                        std::to_string(c.ranks[k + 1]));
        }
        c.differentials.push_back(std::move(m));
    }
    try {
        c.validate();
    } catch (const Error &e) {
        p.fail(e.what());
    }
    return c;
}

inline json write_complex(const BasedComplex &c) {
    json ranks = json::array(), diffs = json::array();
    for (auto r : c.ranks)
        ranks.push_back(r);
    for (const auto &d : c.differentials) {
        if (d.rows() == 0 || d.cols() == 0) {
            json rows = json::array();
            for (std::size_t i = 0; i < d.rows(); ++i)
                rows.push_back(json::array());
            diffs.push_back(std::move(rows));
        } else {
            diffs.push_back(write_matrix(d));
        }
    }
    return json{{"ranks", std::move(ranks)}, {"differentials", std::move(diffs)}};
}

inline std::size_t read_node(const LabeledOrbitModel &m, const json &j, const Path &p) {
    if (j.is_number_integer())
        return static_cast<std::size_t>(read_int(j, p, 0, static_cast<long long>(m.nodes.size()) - 1));
    if (j.is_string()) {
        auto it = std::find(m.nodes.begin(), m.nodes.end(), j.get<std::string>());
        if (it == m.nodes.end())
            p.fail("unknown node \"" + j.get<std::string>() + "\"");
        return static_cast<std::size_t>(it - m.nodes.begin());
    }
    p.fail("expected a node name or index");
}

inline LabeledOrbitModel read_model(const GroupPtr &g, const json &j, const Path &p) {
    if (!j.is_object())
        p.fail("expected a model {\"degree\", \"nodes\", \"edges\"}");
    allow_only(j, p, {"degree", "nodes", "edges"});
    LabeledOrbitModel m;
    m.degree = static_cast<int>(read_int(member(j, p, "degree"), p / "degree", 0, 64));
    const auto &nodes = array_at(member(j, p, "nodes"), p / "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_string())
            (p / "nodes" / i).fail("node names must be strings");
        if (std::find(m.nodes.begin(), m.nodes.end(), nodes[i].get<std::string>()) != m.nodes.end())
            (p / "nodes" / i).fail("duplicate node name");
        m.nodes.push_back(nodes[i].get<std::string>());
    }
    const auto &edges = array_at(member(j, p, "edges"), p / "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Path ep = p / "edges" / i;
        const json &e = edges[i];
        if (!e.is_object())
            ep.fail("expected an edge {\"from\", \"to\", \"sign\", \"label\"}");
        allow_only(e, ep, {"from", "to", "sign", "label"});
        OrbitEdge edge;
        edge.from = read_node(m, member(e, ep, "from"), ep / "from");
        edge.to = read_node(m, member(e, ep, "to"), ep / "to");
        edge.sign = static_cast<int>(read_int(member(e, ep, "sign"), ep / "sign", -1, 1));
        if (edge.sign == 0)
            (ep / "sign").fail("sign must be +1 or -1");
        edge.label = read_element(*g, member(e, ep, "label"), ep / "label");
        if (TwistedGroup::xi(edge.label) != -1)
            (ep / "label").fail("edge label must satisfy xi(label) = -1, i.e. t = 1");
        m.edges.push_back(edge);
    }
    return m;
}

inline json write_model(const TwistedGroup &g, const LabeledOrbitModel &m) {
    json nodes = json::array(), edges = json::array();
    for (const auto &n : m.nodes)
        nodes.push_back(n);
    for (const auto &e : m.edges)
        edges.push_back(json{{"from", m.nodes[e.from]},
                             {"to", m.nodes[e.to]},
                             {"sign", e.sign},
                             {"label", write_element(g, e.label)}});
    return json{{"degree", m.degree}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline IntMatrix read_int_matrix(const json &j, const Path &p) {
    const auto &rows = array_at(j, p);
    IntMatrix m(rows.size(), rows.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &row = array_at(rows[i], p / i);
        if (row.size() != rows.size())
            (p / i).fail("homology maps must be square");
        for (std::size_t k = 0; k < row.size(); ++k)
            m(i, k) = read_int(row[k], p / i / k, -1000000, 1000000);
    }
    return m;
}

inline json write_int_matrix(const IntMatrix &m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k)
            row.push_back(m(i, k));
        out.push_back(std::move(row));
    }
    return out;
}

inline json write_rational_series(const RationalSeries &s) {
    json out = json::array();
    for (const auto &c : s.coefficients())
        out.push_back(write_rational(c));
    return out;
}

} // namespace novlog::io
