#pragma once

// Batch jobs: {"group", "truncation", "command", "operands"} in, one JSON
// report out. Exit codes: 0 success, 1 domain error, 2 parse/validation.

#include "json_io.hpp"

#include <chrono>
#include <map>
#include <optional>

namespace novlog::io {

inline constexpr const char *kSchema = "novlog/1";

struct JobSpec {
    json group_spec; // canonical form of the group as given
    GroupPtr group;
    int truncation = kDefaultTruncation;
    std::string command;

    std::optional<TruncatedSeries> series, x, y;
    std::optional<SeriesMatrix> matrix;
    std::optional<BasedComplex> complex;
    std::optional<std::vector<LabeledOrbitModel>> models;
    std::optional<std::vector<IntMatrix>> matrices;
    std::optional<std::vector<Rational>> counts;
    std::optional<ClassSeries> eta;
};

namespace detail {

/// Operands each command accepts; the first list is required.
struct Signature {
    std::vector<std::string_view> required;
    std::vector<std::string_view> optional;
};

inline const std::map<std::string, Signature, std::less<>> &signatures() {
    static const std::map<std::string, Signature, std::less<>> table = {
        {"log", {{"series"}, {}}},
        {"exp", {{"series"}, {}}},
        {"bchd", {{"x", "y"}, {}}},
        {"project", {{"series"}, {}}},
        {"factorize", {{"series"}, {}}},
        {"trace-log", {{"matrix"}, {}}},
        {"gauss", {{"matrix"}, {}}},
        {"frakl", {{"matrix"}, {}}},
        {"torsion", {{"complex"}, {}}},
        {"eta-direct", {{"models"}, {}}},
        {"eta-traces", {{"models"}, {}}},
        {"zeta-det", {{"matrices"}, {}}},
        {"zeta-counts", {{"counts"}, {}}},
        {"abelian-zeta", {{}, {"eta", "models"}}},
        {"check-main", {{"models", "complex"}, {}}},
    };
    return table;
}

inline json canonical_group(const json &j, const GroupPtr &g) {
    if (j.contains("cyclic")) {
        const long long m = j["cyclic"].get<long long>();
        const long long r = j.contains("rho_power") ? j["rho_power"].get<long long>() : 1;
        return json{{"cyclic", m}, {"rho_power", ((r % m) + m) % m}};
    }
    if (j.contains("rank")) {
        json out{{"rank", g->rank()}};
        json rho = json::array();
        for (const auto &row : g->rho_matrix())
            rho.push_back(row);
        out["rho"] = std::move(rho);
        return out;
    }
    json out{{"elements", g->names()}, {"table", g->table()}, {"rho", g->rho_permutation()}};
    return out;
}

inline void require_witt(const TruncatedSeries &s, const Path &p) {
    if (!is_witt_vector(s))
        p.fail("operand must be a Witt vector 1 + a1 t + a2 t^2 + ...");
}

inline void require_positive_valuation(const TruncatedSeries &s, const Path &p) {
    if (!s.is_zero() && s.low() < 1)
        p.fail("operand must have valuation >= 1");
}

inline void require_square(const SeriesMatrix &m, const Path &p) {
    if (!m.is_square())
        p.fail("matrix must be square");
}

} // namespace detail

inline JobSpec parse_job_document(const json &j) {
    const Path root;
    if (!j.is_object())
        root.fail("job must be a JSON object");
    allow_only(j, root, {"group", "truncation", "command", "operands"});
    JobSpec job;
    const json &gj = member(j, root, "group");
    job.group = read_group(gj, root / "group");
    job.group_spec = detail::canonical_group(gj, job.group);
    if (j.contains("truncation"))
        job.truncation = static_cast<int>(read_int(j["truncation"], root / "truncation", 0, 4096));
    const json &cj = member(j, root, "command");
    if (!cj.is_string())
        (root / "command").fail("command must be a string");
    job.command = cj.get<std::string>();
    const auto sig = detail::signatures().find(job.command);
    if (sig == detail::signatures().end())
        (root / "command").fail("unknown command \"" + job.command + "\"");

    const Path op = root / "operands";
    const json empty = json::object();
    const json &ops = j.contains("operands") ? j["operands"] : empty;
    if (!ops.is_object())
        op.fail("operands must be an object");
    for (auto it = ops.begin(); it != ops.end(); ++it) {
        const auto &s = sig->second;
        if (std::find(s.required.begin(), s.required.end(), it.key()) == s.required.end() &&
            std::find(s.optional.begin(), s.optional.end(), it.key()) == s.optional.end())
            (op / it.key()).fail("operand not accepted by command \"" + job.command + "\"");
    }
    for (auto key : sig->second.required)
        member(ops, op, std::string(key));

    const GroupPtr &g = job.group;
    const int n = job.truncation;
    if (ops.contains("series"))
        job.series = read_series(g, n, ops["series"], op / "series");
    if (ops.contains("x"))
        job.x = read_series(g, n, ops["x"], op / "x");
    if (ops.contains("y"))
        job.y = read_series(g, n, ops["y"], op / "y");
    if (ops.contains("matrix")) {
        job.matrix = read_matrix(g, n, ops["matrix"], op / "matrix");
        detail::require_square(*job.matrix, op / "matrix");
    }
    if (ops.contains("complex"))
        job.complex = read_complex(g, n, ops["complex"], op / "complex");
    if (ops.contains("models")) {
        const auto &arr = array_at(ops["models"], op / "models");
        job.models.emplace();
        for (std::size_t i = 0; i < arr.size(); ++i)
            job.models->push_back(read_model(g, arr[i], op / "models" / i));
    }
    if (ops.contains("matrices")) {
        const auto &arr = array_at(ops["matrices"], op / "matrices");
        job.matrices.emplace();
        for (std::size_t i = 0; i < arr.size(); ++i)
            job.matrices->push_back(read_int_matrix(arr[i], op / "matrices" / i));
    }
    if (ops.contains("counts")) {
        const auto &arr = array_at(ops["counts"], op / "counts");
        job.counts.emplace();
        for (std::size_t i = 0; i < arr.size(); ++i)
            job.counts->push_back(read_rational(arr[i], op / "counts" / i));
    }
    if (ops.contains("eta"))
        job.eta = read_class_series(g, n, ops["eta"], op / "eta");

    // Operand types that depend on the command.
    if (job.command == "log" || job.command == "factorize")
        detail::require_witt(*job.series, op / "series");
    if (job.command == "exp")
        detail::require_positive_valuation(*job.series, op / "series");
    if (job.command == "bchd") {
        detail::require_positive_valuation(*job.x, op / "x");
        detail::require_positive_valuation(*job.y, op / "y");
    }
    if (job.command == "project" && !job.series->is_zero() && job.series->low() < 0)
        (op / "series").fail("operand must lie in P (no negative powers of t)");
    if (job.command == "abelian-zeta") {
        if (job.eta.has_value() == job.models.has_value())
            op.fail("abelian-zeta takes exactly one of \"eta\" or \"models\"");
    }
    return job;
}

inline JobSpec parse_job(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(e.what());
    }
    return parse_job_document(j);
}

/// Canonical job document; parse_job(serialize_job(j)) reproduces j.
inline json serialize_job(const JobSpec &job) {
    json ops = json::object();
    if (job.series)
        ops["series"] = write_series(*job.series);
    if (job.x)
        ops["x"] = write_series(*job.x);
    if (job.y)
        ops["y"] = write_series(*job.y);
    if (job.matrix)
        ops["matrix"] = write_matrix(*job.matrix);
    if (job.complex)
        ops["complex"] = write_complex(*job.complex);
    if (job.models) {
        json arr = json::array();
        for (const auto &m : *job.models)
            arr.push_back(write_model(*job.group, m));
        ops["models"] = std::move(arr);
    }
    if (job.matrices) {
        json arr = json::array();
        for (const auto &m : *job.matrices)
            arr.push_back(write_int_matrix(m));
        ops["matrices"] = std::move(arr);
    }
    if (job.counts) {
        json arr = json::array();
        for (const auto &c : *job.counts)
            arr.push_back(write_rational(c));
        ops["counts"] = std::move(arr);
    }
    if (job.eta)
        ops["eta"] = write_class_series(*job.eta);
    return json{{"group", job.group_spec},
                {"truncation", job.truncation},
                {"command", job.command},
                {"operands", std::move(ops)}};
}

/// Runs the command. Domain failures propagate as novlog::Error.
inline json execute(const JobSpec &job) {
    const auto start = std::chrono::steady_clock::now();
    const GroupPtr &g = job.group;
    const int n = job.truncation;
    json result, checks;
    std::optional<bool> verdict;
    const std::string &cmd = job.command;

    if (cmd == "log") {
        result["series"] = write_series(series_log(*job.series));
        result["log_hom"] = write_class_result(log_hom(*job.series));
    } else if (cmd == "exp") {
        result["series"] = write_series(series_exp(*job.series));
    } else if (cmd == "bchd") {
        const TruncatedSeries d = bchd_defect(*job.x, *job.y);
        result["series"] = write_series(d);
        const TruncatedSeries half = (ts_mul(*job.x, *job.y) - ts_mul(*job.y, *job.x)) * Rational(1, 2);
        checks["projection_vanishes"] = project_pbar(d).is_zero();
        checks["degree_two_is_half_bracket"] = d.coeff(2) == half.coeff(2);
    } else if (cmd == "project") {
        result = write_class_result(project_pbar(*job.series));
    } else if (cmd == "factorize") {
        const auto pairs = commutator_factorize(*job.series);
        json arr = json::array();
        for (const auto &[u, w] : pairs)
            arr.push_back(json{{"x", write_series(u)}, {"y", write_series(w)}});
        result["pairs"] = std::move(arr);
        const TruncatedSeries residual = ts_mul(*job.series, commutator_product(g, n, pairs));
        checks["residual_is_one"] = residual == TruncatedSeries::one(g, n);
    } else if (cmd == "trace-log") {
        result = write_class_result(matrix_log_trace(*job.matrix));
    } else if (cmd == "gauss") {
        const GaussReduction red = gauss_reduce(*job.matrix);
        json diag = json::array();
        ClassSeries sum(g, n);
        for (const auto &d : red.diagonal) {
            diag.push_back(write_series(d));
            sum += log_hom(d);
        }
        result["diagonal"] = std::move(diag);
        result["constant"] = write_matrix(from_constant(g, red.constant, n));
        checks["diagonal_log_matches"] = sum == l_on_k1(*job.matrix);
    } else if (cmd == "frakl") {
        result = write_class_result(frak_l(*job.matrix));
    } else if (cmd == "torsion") {
        const TorsionClass tau = torsion(*job.complex);
        result["representative"] = write_matrix(tau.representative);
        result["invariant"] = write_class_result(tau.invariant);
    } else if (cmd == "eta-direct") {
        result = write_class_result(eta_direct(g, *job.models, n));
    } else if (cmd == "eta-traces") {
        result = write_class_result(eta_from_traces(g, build_taus(g, *job.models, n), n));
    } else if (cmd == "zeta-det") {
        result["zeta"] = write_rational_series(zeta_det(*job.matrices, n));
        checks["matches_counts"] =
            zeta_from_counts(lefschetz_numbers(*job.matrices, n), n) == zeta_det(*job.matrices, n);
    } else if (cmd == "zeta-counts") {
        result["zeta"] = write_rational_series(zeta_from_counts(*job.counts, n));
    } else if (cmd == "abelian-zeta") {
        const ClassSeries eta = job.eta ? *job.eta : eta_direct(g, *job.models, n);
        result["zeta"] = write_rational_series(abelian_zeta(eta));
    } else if (cmd == "check-main") {
        const MainTheoremReport r = main_theorem_check(g, *job.models, *job.complex);
        result["torsion_invariant"] = write_class_result(r.torsion_invariant);
        result["tau_product"] = write_class_result(r.tau_product);
        result["minus_eta"] = write_class_result(r.minus_eta);
        result["compared_order"] = r.compared_order;
        verdict = r.verdict;
    }

    json report{{"schema", kSchema}, {"command", cmd}, {"truncation", n}, {"result", std::move(result)}};
    if (!checks.is_null())
        report["checks"] = std::move(checks);
    if (verdict)
        report["verdict"] = *verdict;
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    report["timing_ms"] = elapsed.count();
    return report;
}

struct Outcome {
    json report;
    int exit_code = 0;
};

/// Whole pipeline with failures turned into error reports.
inline Outcome run_job(std::string_view text, std::optional<int> truncation = std::nullopt) {
    auto error_report = [](std::string command, std::string kind, std::string message, std::string path) {
        json err{{"kind", std::move(kind)}, {"message", std::move(message)}};
        if (!path.empty())
            err["path"] = std::move(path);
        json r{{"schema", kSchema}};
        if (!command.empty())
            r["command"] = std::move(command);
        r["error"] = std::move(err);
        return r;
    };
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        return {error_report("", "ParseError", e.what(), ""), 2};
    }
    const std::string command = doc.is_object() && doc.contains("command") && doc["command"].is_string()
                                    ? doc["command"].get<std::string>()
                                    : std::string();
    if (truncation && doc.is_object())
        doc["truncation"] = *truncation;
    JobSpec job;
    try {
        job = parse_job_document(doc);
    } catch (const ValidationError &e) {
        return {error_report(command, "ValidationError", e.what(), e.path()), 2};
    }
    try {
        return {execute(job), 0};
    } catch (const Error &e) {
        return {error_report(command, std::string(to_string(e.kind())), e.what(), ""), 1};
    }
}

} // namespace novlog::io
