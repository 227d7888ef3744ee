#pragma once

#include "ordq/bayes.hpp"
#include "ordq/confsets.hpp"
#include "ordq/freq_tests.hpp"
#include "ordq/identify.hpp"
#include "ordq/interval.hpp"
#include "ordq/mc.hpp"
#include "ordq/ordinal.hpp"
#include "ordq/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordq {

using json = nlohmann::json;

/// Bad user input (files, columns, parameters). Distinguished from
/// numerical failures so the CLI can partition exit codes.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExitCode : int { Ok = 0, InputError = 2, NumericalError = 3 };

/// Everything one invocation needs: input selection, column mapping, and
/// subcommand parameters. The CLI fills this in; run() consumes it.
struct AnalysisRequest {
    std::string subcommand;  // estimate, identify-between, ..., bayes, simulate

    // input (tabulated: header category,count_x,count_y; raw: per-row CSV)
    std::string input_path;
    std::string group_col;  // nonempty selects raw mode
    std::string category_col = "category";
    std::string weight_col;
    std::string x_label = "x";
    std::string y_label = "y";
    int category_min = 0;  // declared category range; 0/-1 means auto-detect
    int category_max = -1;
    std::string merge;

    // analysis parameters
    double alpha = 0.05;
    std::uint64_t seed = 1;
    std::int64_t draws = 100000;
    std::int64_t bayes_draws = 10000;
    int j = 0, k = 0;
    std::string event = "sd1-xy";
    bool improper_prior = false;
    int decimals = 3;

    // simulate
    std::string scenario_path;
    std::string study = "verify";        // verify | coverage | size
    std::string check = "between";       // verify: between | within
    std::string method = "between";      // coverage: between | within-fixed | within-all
    std::string test = "sd1";            // size: sd1 | nonsd1 | sc
    double grid_step = 0.001;

    // outputs
    std::string json_path;
    std::string plot_path;
};

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

struct IngestResult {
    OrdinalSample x;
    OrdinalSample y;
    std::string mode;  // "tabulated" or "raw"
    std::int64_t rows = 0;
    std::int64_t rows_skipped = 0;
    std::string digest;
};

namespace detail {

inline std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (std::string& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty input file");
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        t.rows.push_back(split_csv_line(line));
    }
    return t;
}

inline std::optional<double> parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::optional<int> parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace detail

/// Tabulated input: one row per category, header `category,count_x,count_y`.
/// Categories must be consecutive integers after sorting.
inline IngestResult ingest_tabulated(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    const detail::CsvTable t = detail::parse_csv(bytes);
    const int ccat = t.column("category");
    const int cx = t.column("count_x");
    const int cy = t.column("count_y");
    if (ccat < 0 || cx < 0 || cy < 0)
        throw InputError("tabulated input needs columns category,count_x,count_y");
    std::map<int, std::pair<double, double>> by_cat;
    for (const auto& row : t.rows) {
        if (static_cast<int>(row.size()) <= std::max({ccat, cx, cy}))
            throw InputError("tabulated input: short row");
        const auto cat = detail::parse_int(row[static_cast<std::size_t>(ccat)]);
        const auto vx = detail::parse_double(row[static_cast<std::size_t>(cx)]);
        const auto vy = detail::parse_double(row[static_cast<std::size_t>(cy)]);
        if (!cat || !vx || !vy)
            throw InputError("tabulated input: unparseable row");
        if (by_cat.count(*cat)) throw InputError("tabulated input: duplicate category");
        by_cat[*cat] = {*vx, *vy};
    }
    if (by_cat.size() < 2) throw InputError("tabulated input: need >= 2 categories");
    int expect = by_cat.begin()->first;
    for (const auto& [cat, v] : by_cat) {
        if (cat != expect++)
            throw InputError("tabulated input: categories must be consecutive");
    }
    IngestResult r;
    r.mode = "tabulated";
    r.rows = static_cast<std::int64_t>(t.rows.size());
    r.digest = detail::fnv1a_digest(bytes);
    std::vector<double> countsx, countsy;
    for (const auto& [cat, v] : by_cat) {
        countsx.push_back(v.first);
        countsy.push_back(v.second);
    }
    r.x = OrdinalSample::from_counts(countsx, "x");
    r.y = OrdinalSample::from_counts(countsy, "y");
    return r;
}

/// Raw input: one row per observation. Rows are filtered to the two group
/// labels; categories are validated against the declared range or the
/// auto-detected consecutive set; unparseable rows are counted and skipped.
inline IngestResult ingest_csv(const std::string& path, const AnalysisRequest& req) {
    const std::string bytes = detail::read_file(path);
    const detail::CsvTable t = detail::parse_csv(bytes);
    const int cgroup = t.column(req.group_col);
    const int ccat = t.column(req.category_col);
    if (cgroup < 0) throw InputError("missing group column: " + req.group_col);
    if (ccat < 0) throw InputError("missing category column: " + req.category_col);
    int cweight = -1;
    if (!req.weight_col.empty()) {
        cweight = t.column(req.weight_col);
        if (cweight < 0) throw InputError("missing weight column: " + req.weight_col);
    }
    struct Row {
        int group;  // 0 = x, 1 = y
        int category;
        double weight;
    };
    std::vector<Row> rows;
    std::int64_t skipped = 0;
    for (const auto& raw : t.rows) {
        if (static_cast<int>(raw.size()) <= std::max({cgroup, ccat, cweight})) {
            ++skipped;
            continue;
        }
        const std::string& g = raw[static_cast<std::size_t>(cgroup)];
        int group;
        if (g == req.x_label)
            group = 0;
        else if (g == req.y_label)
            group = 1;
        else
            continue;  // other groups are out of scope, not errors
        const auto cat = detail::parse_int(raw[static_cast<std::size_t>(ccat)]);
        if (!cat) {
            ++skipped;
            continue;
        }
        double w = 1.0;
        if (cweight >= 0) {
            const auto pw = detail::parse_double(raw[static_cast<std::size_t>(cweight)]);
            if (!pw || !(*pw >= 0.0))
                throw InputError("non-numeric or negative weight in row");
            w = *pw;
        }
        rows.push_back({group, *cat, w});
    }
    if (rows.empty()) throw InputError("no rows matched the two group labels");

    int lo = req.category_min, hi = req.category_max;
    if (hi < lo) {  // auto-detect the observed consecutive range
        lo = rows.front().category;
        hi = rows.front().category;
        for (const Row& r : rows) {
            lo = std::min(lo, r.category);
            hi = std::max(hi, r.category);
        }
    }
    if (hi - lo + 1 < 2) throw InputError("need at least two categories");
    const int J = hi - lo + 1;

    IngestResult res;
    res.mode = "raw";
    res.rows = static_cast<std::int64_t>(t.rows.size());
    res.rows_skipped = skipped;
    res.digest = detail::fnv1a_digest(bytes);
    for (int g = 0; g < 2; ++g) {
        OrdinalSample s;
        s.J = J;
        s.counts.assign(static_cast<std::size_t>(J), 0.0);
        s.label = (g == 0) ? req.x_label : req.y_label;
        bool weighted = cweight >= 0;
        for (const Row& r : rows) {
            if (r.group != g) continue;
            if (r.category < lo || r.category > hi)
                throw InputError("category outside declared range: " +
                                 std::to_string(r.category));
            s.counts[static_cast<std::size_t>(r.category - lo)] += r.weight;
            s.n_raw += 1;
            if (weighted) s.weight_sq_sum += r.weight * r.weight;
        }
        if (s.n_raw == 0)
            throw InputError("empty group: " + s.label);
        s.validate();
        (g == 0 ? res.x : res.y) = std::move(s);
    }
    return res;
}

inline IngestResult ingest(const AnalysisRequest& req) {
    if (req.input_path.empty()) throw InputError("no input file given");
    IngestResult r = req.group_col.empty() ? ingest_tabulated(req.input_path)
                                           : ingest_csv(req.input_path, req);
    if (!req.group_col.empty()) {
        r.x.label = req.x_label;
        r.y.label = req.y_label;
    }
    if (!req.merge.empty()) {
        const MergeSpec spec = MergeSpec::parse(req.merge);
        try {
            r.x = merge_categories(r.x, spec);
            r.y = merge_categories(r.y, spec);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// JSON rendering
// ---------------------------------------------------------------------------

namespace detail {

inline json interval_set_json(const QuantileSet& s) {
    json arr = json::array();
    for (const Interval& iv : s.intervals()) arr.push_back({iv.lo, iv.hi});
    return {{"semantics", "half-open (lo, hi]"}, {"intervals", arr}};
}

inline json rect_set_json(const RectSet& s) {
    json arr = json::array();
    for (const Rect& r : s.rects())
        arr.push_back({{"tau1", {r.t1.lo, r.t1.hi}}, {"tau2", {r.t2.lo, r.t2.hi}}});
    return {{"semantics", "half-open (lo, hi] on both axes"}, {"rects", arr}};
}

inline const char* piece_status_name(PieceStatus s) {
    switch (s) {
        case PieceStatus::Interval: return "interval";
        case PieceStatus::NoEvidence: return "no_evidence";
        case PieceStatus::LimitsCrossed: return "limits_crossed";
    }
    return "?";
}

inline json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json limit_vector(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(finite_or_null(x));
    return arr;
}

inline json conf_limits_json(const ConfidenceLimits& lim) {
    json out;
    out["alpha"] = lim.alpha;
    out["tilde_alpha"] = finite_or_null(lim.crit.tilde_alpha);
    out["tilde_beta"] = finite_or_null(lim.crit.tilde_beta);
    out["z_x"] = lim.crit.z_x;
    out["z_y"] = lim.crit.z_y;
    if (lim.j > 0) {
        out["j"] = lim.j;
        out["k"] = lim.k;
    }
    out["x_upper"] = limit_vector(lim.x_upper);
    out["x_lower"] = limit_vector(lim.x_lower);
    out["y_upper"] = limit_vector(lim.y_upper);
    out["y_lower"] = limit_vector(lim.y_lower);
    json sx = json::array(), sy = json::array();
    for (PieceStatus s : lim.status_x) sx.push_back(piece_status_name(s));
    for (PieceStatus s : lim.status_y) sy.push_back(piece_status_name(s));
    out["piece_status_x"] = sx;
    if (!lim.status_y.empty()) out["piece_status_y"] = sy;
    if (std::isfinite(lim.crit.tilde_alpha) && lim.crit.tilde_alpha >= 0.5)
        out["note"] = "tilde_alpha >= 0.5: sample too small for meaningful limits";
    return out;
}

inline json test_report_json(const TestReport& rep) {
    json out;
    switch (rep.hypothesis) {
        case Hypothesis::Sd1XY: out["hypothesis"] = "sd1-xy"; break;
        case Hypothesis::NonSd1XY: out["hypothesis"] = "nonsd1-xy"; break;
        case Hypothesis::ScXY: out["hypothesis"] = "sc-xy"; break;
    }
    out["alpha"] = rep.alpha;
    out["statistic"] = finite_or_null(rep.statistic);
    out["critical_value"] = finite_or_null(rep.critical_value);
    out["reject"] = rep.reject;
    if (rep.hypothesis == Hypothesis::Sd1XY)
        out["selected_moments"] = rep.selected_moments;
    if (!rep.per_k.empty()) {
        json per = json::array();
        for (const PerCrossingDecision& d : rep.per_k)
            per.push_back({{"k", d.k},
                           {"statistic", finite_or_null(d.statistic)},
                           {"critical_value", finite_or_null(d.critical_value)},
                           {"reject", d.reject},
                           {"selected_moments", d.selected}});
        out["per_k"] = per;
    }
    return out;
}

inline std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

} // namespace detail

struct RunResult {
    json doc;
    std::string human;
};

namespace detail {

inline json group_json(const OrdinalSample& s) {
    return {{"label", s.label},
            {"n_raw", s.n_raw},
            {"total_weight", s.total_weight()},
            {"effective_n", s.effective_n()},
            {"counts", s.counts}};
}

inline void add_base(json& doc, const AnalysisRequest& req, const IngestResult& ing,
                     const OrdinalCdf& cx, const OrdinalCdf& cy) {
    doc["input"] = {{"path", req.input_path}, {"digest", ing.digest},
                    {"mode", ing.mode},       {"rows", ing.rows},
                    {"rows_skipped", ing.rows_skipped}, {"x", group_json(ing.x)},
                    {"y", group_json(ing.y)}};
    if (!req.merge.empty()) doc["input"]["merge"] = req.merge;
    doc["cdf"] = {{"J", cx.J},
                  {"F_x", cx.F},
                  {"F_y", cy.F},
                  {"n_x", cx.n},
                  {"n_y", cy.n},
                  {"theta", cdf_difference(cx, cy)}};
}

inline std::string render_report_header(const AnalysisRequest& req,
                                        const OrdinalCdf& cx, const OrdinalCdf& cy,
                                        const IngestResult& ing) {
    std::ostringstream os;
    os << "ordq " << req.subcommand << "  (J=" << cx.J << ", X=" << ing.x.label
       << " n=" << cx.n << ", Y=" << ing.y.label << " n=" << cy.n << ")\n";
    auto line = [&](const char* name, const std::vector<double>& F) {
        os << "  " << name << ":";
        for (double f : F) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.*f", req.decimals, f);
            os << buf;
        }
        os << "\n";
    };
    line("F_X", cx.F);
    line("F_Y", cy.F);
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << body;
}

/// Step-function CDF export for external plotting: category, F_X, F_Y.
inline std::string plot_tsv(const OrdinalCdf& cx, const OrdinalCdf& cy) {
    std::ostringstream os;
    os << "category\tF_x\tF_y\n";
    os.precision(17);
    for (int j = 1; j <= cx.J; ++j) {
        const double fx = (j < cx.J) ? cx.F_at(j) : 1.0;
        const double fy = (j < cx.J) ? cy.F_at(j) : 1.0;
        os << j << "\t" << fx << "\t" << fy << "\n";
    }
    return os.str();
}

inline BayesEvent parse_event(const std::string& name) {
    if (name == "sd1-xy") return BayesEvent::Sd1XY;
    if (name == "sd1-yx") return BayesEvent::Sd1YX;
    if (name == "sc-xy") return BayesEvent::ScXY;
    if (name == "sc-yx") return BayesEvent::ScYX;
    throw InputError("unknown event: " + name + " (use sd1-xy|sd1-yx|sc-xy|sc-yx)");
}

/// Integer posterior counts from a possibly weighted sample. Weighted data
/// are rescaled to the Kish effective size and rounded; the caller records
/// the conversion so reports can flag it.
inline std::vector<std::int64_t> bayes_counts(const OrdinalSample& s, bool& converted) {
    std::vector<std::int64_t> out(s.counts.size());
    bool integral = s.weight_sq_sum <= 0.0;
    for (double c : s.counts)
        if (std::fabs(c - std::llround(c)) > 1e-9) integral = false;
    if (integral) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::llround(s.counts[i]);
        converted = false;
        return out;
    }
    const double scale = s.effective_n() / s.total_weight();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::llround(s.counts[i] * scale);
    converted = true;
    return out;
}

json scenario_study_result(const AnalysisRequest& req);

} // namespace detail

/// Execute one analysis request end to end and return the report document
/// plus a short human rendering. Input problems throw InputError; numerical
/// failures propagate as std::runtime_error.
inline RunResult run(const AnalysisRequest& req) {
    RunResult rr;
    rr.doc["schema_version"] = 1;
    rr.doc["tool"] = {{"name", "ordq"},
                      {"version", ORDQ_VERSION},
                      {"timestamp", detail::iso_timestamp()}};
    rr.doc["params"] = {{"alpha", req.alpha},
                        {"seed", req.seed},
                        {"draws", req.draws}};

    if (req.subcommand == "simulate") {
        rr.doc["result"] = detail::scenario_study_result(req);
        rr.human = "ordq simulate " + req.study + ": " + rr.doc["result"].dump() + "\n";
        if (!req.json_path.empty())
            detail::write_text_file(req.json_path, rr.doc.dump(2) + "\n");
        return rr;
    }

    const IngestResult ing = ingest(req);
    OrdinalCdf cx, cy;
    try {
        cx = estimate_cdf(ing.x);
        cy = estimate_cdf(ing.y);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    detail::add_base(rr.doc, req, ing, cx, cy);
    std::ostringstream human;
    human << detail::render_report_header(req, cx, cy, ing);

    SimConfig cfg;
    cfg.draws = req.draws;
    cfg.seed = req.seed;

    json& result = rr.doc["result"];
    try {
        if (req.subcommand == "estimate") {
            json sx = json::array(), sy = json::array();
            for (int a = 0; a < cx.J - 1; ++a) {
                json rowx = json::array(), rowy = json::array();
                for (int b = 0; b < cx.J - 1; ++b) {
                    rowx.push_back(cx.Sigma(a, b));
                    rowy.push_back(cy.Sigma(a, b));
                }
                sx.push_back(rowx);
                sy.push_back(rowy);
            }
            result = {{"sigma_x", sx}, {"sigma_y", sy}};
            if (!req.plot_path.empty())
                detail::write_text_file(req.plot_path, detail::plot_tsv(cx, cy));
        } else if (req.subcommand == "identify-between") {
            const QuantileSet s = between_set(cx, cy);
            result = {{"set", detail::interval_set_json(s)}};
            human << "  T_X = " << s.to_string(req.decimals) << "\n";
        } else if (req.subcommand == "identify-within-fixed") {
            if (req.j < 1 || req.k < 1) throw InputError("need --j and --k");
            const auto [t1, t2] = within_pair_sets(cx, cy, req.j, req.k);
            rr.doc["params"]["j"] = req.j;
            rr.doc["params"]["k"] = req.k;
            result = {{"t1", detail::interval_set_json(t1)},
                      {"t2", detail::interval_set_json(t2)}};
            human << "  T_1 = " << t1.to_string(req.decimals)
                  << "  T_2 = " << t2.to_string(req.decimals) << "\n";
        } else if (req.subcommand == "identify-within-all") {
            const RectSet s = within_all_set(cx, cy);
            const std::optional<int> m = single_crossing(cx, cy);
            result = {{"set", detail::rect_set_json(s)},
                      {"single_crossing", m ? json(*m) : json(nullptr)}};
            human << "  T = " << s.to_string(req.decimals) << "\n";
            if (m) human << "  single crossing at category m=" << *m << "\n";
        } else if (req.subcommand == "cs-between") {
            const auto [s, lim] = cs_between(cx, cy, req.alpha, cfg);
            result = {{"set", detail::interval_set_json(s)},
                      {"limits", detail::conf_limits_json(lim)}};
            human << "  inner CS = " << s.to_string(req.decimals) << "\n";
        } else if (req.subcommand == "cs-within-fixed") {
            if (req.j < 1 || req.k < 1) throw InputError("need --j and --k");
            const auto [s, lim] = cs_within_fixed(cx, cy, req.j, req.k, req.alpha, cfg);
            rr.doc["params"]["j"] = req.j;
            rr.doc["params"]["k"] = req.k;
            result = {{"set", detail::rect_set_json(s)},
                      {"limits", detail::conf_limits_json(lim)}};
            human << "  inner CS = " << s.to_string(req.decimals) << "\n";
        } else if (req.subcommand == "cs-within-all") {
            const auto [s, lim] = cs_within_all(cx, cy, req.alpha, cfg);
            result = {{"set", detail::rect_set_json(s)},
                      {"limits", detail::conf_limits_json(lim)}};
            human << "  inner CS = " << s.to_string(req.decimals) << "\n";
        } else if (req.subcommand == "test-sd1") {
            const TestReport rep = test_sd1(cx, cy, req.alpha, cfg);
            result = detail::test_report_json(rep);
            human << "  max-t = " << rep.statistic << "  crit = " << rep.critical_value
                  << "  reject SD1: " << (rep.reject ? "yes" : "no") << "\n";
        } else if (req.subcommand == "test-nonsd1") {
            const TestReport rep = test_nonsd1(cx, cy, req.alpha);
            result = detail::test_report_json(rep);
            human << "  max-t = " << rep.statistic << "  crit = " << rep.critical_value
                  << "  reject non-SD1: " << (rep.reject ? "yes" : "no") << "\n";
        } else if (req.subcommand == "test-sc") {
            const TestReport rep = test_sc(cx, cy, req.alpha, cfg);
            result = detail::test_report_json(rep);
            human << "  reject single crossing: " << (rep.reject ? "yes" : "no")
                  << "\n";
        } else if (req.subcommand == "bayes") {
            PosteriorConfig pc;
            pc.draws = req.bayes_draws;
            pc.seed = req.seed;
            pc.improper_prior = req.improper_prior;
            bool conv_x = false, conv_y = false;
            const std::vector<std::int64_t> bx = detail::bayes_counts(ing.x, conv_x);
            const std::vector<std::int64_t> by = detail::bayes_counts(ing.y, conv_y);
            const BayesEvent ev = detail::parse_event(req.event);
            double prob;
            try {
                prob = posterior_prob(bx, by, ev, pc);
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            const BayesCall call = bayes_decision(prob, req.alpha);
            rr.doc["params"]["draws"] = pc.draws;
            rr.doc["params"]["event"] = req.event;
            result = {{"event", req.event},
                      {"posterior_prob", prob},
                      {"decision", call == BayesCall::Support     ? "support"
                                   : call == BayesCall::Reject    ? "reject"
                                                                  : "inconclusive"},
                      {"prior", pc.improper_prior ? "improper" : "uniform"},
                      {"counts_x", bx},
                      {"counts_y", by},
                      {"weighted_counts_converted", conv_x || conv_y}};
            human << "  posterior Pr(" << req.event << ") = " << prob << "\n";
        } else {
            throw InputError("unknown subcommand: " + req.subcommand);
        }
    } catch (const std::invalid_argument& e) {
        // parameter validation from the compute modules is an input problem
        throw InputError(e.what());
    }

    rr.human = human.str();
    if (!req.json_path.empty())
        detail::write_text_file(req.json_path, rr.doc.dump(2) + "\n");
    return rr;
}

// ---------------------------------------------------------------------------
// Scenario files and the simulate subcommand
// ---------------------------------------------------------------------------

namespace detail {

inline GridLaw law_from_json(const json& spec) {
    const std::string type = spec.value("type", "");
    const int grid = spec.value("grid", 1000);
    if (type == "normal")
        return GridLaw::normal(spec.value("mean", 0.0), spec.value("sd", 1.0), grid);
    if (type == "logistic")
        return GridLaw::logistic(spec.value("mu", 0.0), spec.value("s", 1.0), grid);
    if (type == "grid") {
        if (!spec.contains("points") || !spec.contains("probs"))
            throw InputError("grid law needs points and probs");
        return GridLaw::from_points(spec["points"].get<std::vector<double>>(),
                                    spec["probs"].get<std::vector<double>>());
    }
    if (type == "mixture") {
        std::vector<std::pair<double, GridLaw>> parts;
        for (const json& c : spec.at("components"))
            parts.emplace_back(c.value("weight", 1.0), law_from_json(c));
        return GridLaw::mixture(parts);
    }
    throw InputError("unknown latent law type: " + type);
}

inline LatentScenario scenario_from_json(const json& doc) {
    LatentScenario sc;
    try {
        sc.name = doc.value("name", "");
        sc.latent_x = law_from_json(doc.at("latent_x"));
        sc.latent_y = law_from_json(doc.at("latent_y"));
        sc.thresholds = doc.at("thresholds").get<std::vector<double>>();
        if (doc.contains("shifts"))
            sc.shifts = doc["shifts"].get<std::vector<double>>();
        else
            sc.shifts.assign(sc.thresholds.size(), doc.value("shift", 0.0));
        sc.n_x = doc.value("n_x", std::int64_t{1000});
        sc.n_y = doc.value("n_y", std::int64_t{1000});
        sc.reps = doc.value("reps", 1000);
        sc.seed = doc.value("seed", std::uint64_t{1});
        sc.validate();
    } catch (const json::exception& e) {
        throw InputError(std::string("bad scenario file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("bad scenario file: ") + e.what());
    }
    return sc;
}

inline LatentScenario load_scenario(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InputError(std::string("bad scenario JSON: ") + e.what());
    }
    return scenario_from_json(doc);
}

inline json scenario_study_result(const AnalysisRequest& req) {
    if (req.scenario_path.empty()) throw InputError("simulate needs a scenario file");
    LatentScenario sc = load_scenario(req.scenario_path);
    if (req.seed != 1) sc.seed = req.seed;
    json out;
    out["scenario"] = sc.name;
    out["seed"] = sc.seed;
    SimConfig cfg;
    cfg.draws = req.draws;
    cfg.seed = sc.seed;
    if (req.study == "verify") {
        const IdCheck check =
            (req.check == "within") ? IdCheck::Within : IdCheck::Between;
        const std::int64_t v = verify_identification(sc, req.grid_step, check);
        out["study"] = "verify";
        out["check"] = req.check;
        out["grid_step"] = req.grid_step;
        out["violations"] = v;
    } else if (req.study == "coverage") {
        CsMethod m;
        if (req.method == "between")
            m = CsMethod::Between;
        else if (req.method == "within-fixed")
            m = CsMethod::WithinFixed;
        else if (req.method == "within-all")
            m = CsMethod::WithinAll;
        else
            throw InputError("unknown coverage method: " + req.method);
        if (m == CsMethod::WithinFixed && (req.j < 1 || req.k < 1))
            throw InputError("within-fixed coverage needs --j and --k");
        const CoverageResult r = coverage_study(sc, m, req.alpha, cfg, req.j, req.k);
        out["study"] = "coverage";
        out["method"] = req.method;
        out["alpha"] = req.alpha;
        out["reps"] = r.reps;
        out["covered"] = r.covered;
        out["coverage"] = r.coverage;
        out["mc_se"] = r.mc_se;
    } else if (req.study == "size") {
        Hypothesis h;
        if (req.test == "sd1")
            h = Hypothesis::Sd1XY;
        else if (req.test == "nonsd1")
            h = Hypothesis::NonSd1XY;
        else if (req.test == "sc")
            h = Hypothesis::ScXY;
        else
            throw InputError("unknown size test: " + req.test);
        const SizeResult r = size_study(sc, h, req.alpha, cfg);
        out["study"] = "size";
        out["test"] = req.test;
        out["alpha"] = req.alpha;
        out["reps"] = r.reps;
        out["rejections"] = r.rejections;
        out["rate"] = r.rate;
        out["mc_se"] = r.mc_se;
    } else {
        throw InputError("unknown study: " + req.study);
    }
    return out;
}

} // namespace detail

/// TSV key/value summary of a simulate result, for spreadsheet-style use.
inline std::string study_tsv(const json& result) {
    std::ostringstream os;
    for (const auto& [key, value] : result.items())
        os << key << "\t" << (value.is_string() ? value.get<std::string>()
                                                : value.dump())
           << "\n";
    return os.str();
}

} // namespace ordq
