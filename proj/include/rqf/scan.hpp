#pragma once

/**
 * @file scan.hpp
 * @brief Family sweeps, row serialization (table / CSV / JSON) and the
 *        on-disk class-number cache used by the command-line tool.
 *
 * Sweeps evaluate grid points independently on a small worker pool, then
 * sort the rows by (d, a, m, p). The number of workers never changes the
 * output bytes.
 */

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rqf/cf_pell.hpp"
#include "rqf/errors.hpp"
#include "rqf/forms.hpp"
#include "rqf/intbase.hpp"
#include "rqf/theorem_lab.hpp"

namespace rqf {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rows

enum class Family { paper, bl, yokoi, rd, field };

inline const char* to_string(Family f) {
    switch (f) {
    case Family::paper:
        return "paper";
    case Family::bl:
        return "bl";
    case Family::yokoi:
        return "yokoi";
    case Family::rd:
        return "rd";
    case Family::field:
        return "field";
    }
    return "?";
}

inline std::optional<Family> family_from_string(const std::string& s) {
    for (Family f : {Family::paper, Family::bl, Family::yokoi, Family::rd, Family::field})
        if (s == to_string(f))
            return f;
    return std::nullopt;
}

using XY = std::pair<Int, Int>;

struct ScanRow {
    std::string family;
    std::optional<i64> a;
    std::optional<i64> m;
    std::optional<i64> p;
    i64 d = 0;
    i64 delta = 0;
    i64 h_plus = 0;
    i64 h = 0;
    int unit_norm = 1;
    std::optional<XY> rep_plus;
    std::optional<XY> rep_minus;
    std::optional<SplittingType> splitting;
    std::optional<Verdict> verdict;

    friend bool operator==(const ScanRow&, const ScanRow&) = default;
};

inline bool row_less(const ScanRow& l, const ScanRow& r) {
    return std::tie(l.d, l.a, l.m, l.p, l.family) < std::tie(r.d, r.a, r.m, r.p, r.family);
}

inline ScanRow row_from_summary(const std::string& family, const ClassGroupSummary& s) {
    ScanRow row;
    row.family = family;
    row.d = s.d;
    row.delta = s.delta;
    row.h_plus = s.h_plus;
    row.h = s.h;
    row.unit_norm = s.unit_norm;
    return row;
}

inline ScanRow row_from_report(const TheoremReport& rep) {
    ScanRow row;
    row.family = to_string(Family::paper);
    row.a = rep.params.a;
    row.m = rep.params.m;
    row.p = rep.params.p;
    row.d = rep.d;
    if (rep.summary) {
        row.delta = rep.summary->delta;
        row.h_plus = rep.summary->h_plus;
        row.h = rep.summary->h;
        row.unit_norm = rep.summary->unit_norm;
    }
    if (rep.representation) {
        if (rep.representation->plus)
            row.rep_plus = XY{rep.representation->plus->x, rep.representation->plus->y};
        if (rep.representation->minus)
            row.rep_minus = XY{rep.representation->minus->x, rep.representation->minus->y};
    }
    row.splitting = rep.splitting;
    row.verdict = rep.verdict;
    return row;
}

// ---------------------------------------------------------------------------
// Serialization

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "family", "a",         "m",         "p",         "d",        "delta",  "h_plus",
        "h",      "unit_norm", "rep_plus",  "rep_minus", "splitting", "verdict"};
    return cols;
}

namespace detail {

inline std::string opt_str(const std::optional<i64>& v, const char* none) {
    return v ? std::to_string(*v) : std::string(none);
}

inline std::string xy_str(const std::optional<XY>& v, const char* sep, const char* none) {
    return v ? v->first.str() + sep + v->second.str() : std::string(none);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline i64 parse_i64(const std::string& s) {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size())
        throw input_error("not an integer: '" + s + "'");
    return v;
}

inline std::optional<i64> parse_opt_i64(const std::string& s) {
    if (s.empty())
        return std::nullopt;
    return parse_i64(s);
}

inline std::optional<XY> parse_xy(const std::string& s) {
    if (s.empty())
        return std::nullopt;
    const auto parts = split(s, ';');
    if (parts.size() != 2)
        throw input_error("malformed witness '" + s + "'");
    return XY{Int(parts[0]), Int(parts[1])};
}

inline ojson xy_json(const std::optional<XY>& v) {
    if (!v)
        return nullptr;
    return ojson::array({v->first.str(), v->second.str()});
}

inline std::optional<XY> xy_from_json(const ojson& j) {
    if (j.is_null())
        return std::nullopt;
    return XY{Int(j.at(0).get<std::string>()), Int(j.at(1).get<std::string>())};
}

template <typename T>
ojson opt_json(const std::optional<T>& v) {
    if (!v)
        return nullptr;
    return *v;
}

} // namespace detail

inline ojson row_to_json(const ScanRow& r) {
    ojson j;
    j["family"] = r.family;
    j["a"] = detail::opt_json(r.a);
    j["m"] = detail::opt_json(r.m);
    j["p"] = detail::opt_json(r.p);
    j["d"] = r.d;
    j["delta"] = r.delta;
    j["h_plus"] = r.h_plus;
    j["h"] = r.h;
    j["unit_norm"] = r.unit_norm;
    j["rep_plus"] = detail::xy_json(r.rep_plus);
    j["rep_minus"] = detail::xy_json(r.rep_minus);
    j["splitting"] = r.splitting ? ojson(to_string(*r.splitting)) : ojson(nullptr);
    j["verdict"] = r.verdict ? ojson(to_string(*r.verdict)) : ojson(nullptr);
    return j;
}

inline ScanRow row_from_json(const ojson& j) {
    ScanRow r;
    r.family = j.at("family").get<std::string>();
    auto opt = [&](const char* key) -> std::optional<i64> {
        const auto& v = j.at(key);
        return v.is_null() ? std::nullopt : std::optional<i64>(v.get<i64>());
    };
    r.a = opt("a");
    r.m = opt("m");
    r.p = opt("p");
    r.d = j.at("d").get<i64>();
    r.delta = j.at("delta").get<i64>();
    r.h_plus = j.at("h_plus").get<i64>();
    r.h = j.at("h").get<i64>();
    r.unit_norm = j.at("unit_norm").get<int>();
    r.rep_plus = detail::xy_from_json(j.at("rep_plus"));
    r.rep_minus = detail::xy_from_json(j.at("rep_minus"));
    if (!j.at("splitting").is_null())
        r.splitting = splitting_from_string(j.at("splitting").get<std::string>());
    if (!j.at("verdict").is_null())
        r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
}

/// A JSON array with one row object per line.
inline std::string rows_to_json(const std::vector<ScanRow>& rows) {
    std::string out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += i ? ",\n " : "\n ";
        out += row_to_json(rows[i]).dump();
    }
    out += rows.empty() ? "]\n" : "\n]\n";
    return out;
}

inline std::vector<ScanRow> rows_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    std::vector<ScanRow> rows;
    for (const auto& item : j)
        rows.push_back(row_from_json(item));
    return rows;
}

/// Fixed header; missing values are empty; witnesses are written "x;y".
inline std::string rows_to_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : rows) {
        os << r.family << ',' << detail::opt_str(r.a, "") << ',' << detail::opt_str(r.m, "")
           << ',' << detail::opt_str(r.p, "") << ',' << r.d << ',' << r.delta << ',' << r.h_plus
           << ',' << r.h << ',' << r.unit_norm << ',' << detail::xy_str(r.rep_plus, ";", "")
           << ',' << detail::xy_str(r.rep_minus, ";", "") << ','
           << (r.splitting ? to_string(*r.splitting) : "") << ','
           << (r.verdict ? to_string(*r.verdict) : "") << '\n';
    }
    return os.str();
}

inline std::vector<ScanRow> rows_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw input_error("empty CSV");
    if (detail::split(line, ',') != csv_columns())
        throw input_error("unexpected CSV header");
    std::vector<ScanRow> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto f = detail::split(line, ',');
        if (f.size() != csv_columns().size())
            throw input_error("CSV row has wrong arity");
        ScanRow r;
        r.family = f[0];
        r.a = detail::parse_opt_i64(f[1]);
        r.m = detail::parse_opt_i64(f[2]);
        r.p = detail::parse_opt_i64(f[3]);
        r.d = detail::parse_i64(f[4]);
        r.delta = detail::parse_i64(f[5]);
        r.h_plus = detail::parse_i64(f[6]);
        r.h = detail::parse_i64(f[7]);
        r.unit_norm = static_cast<int>(detail::parse_i64(f[8]));
        r.rep_plus = detail::parse_xy(f[9]);
        r.rep_minus = detail::parse_xy(f[10]);
        if (!f[11].empty())
            r.splitting = splitting_from_string(f[11]);
        if (!f[12].empty())
            r.verdict = verdict_from_string(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string rows_to_table(const std::vector<ScanRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(csv_columns());
    for (const auto& r : rows) {
        cells.push_back({r.family, detail::opt_str(r.a, "-"), detail::opt_str(r.m, "-"),
                         detail::opt_str(r.p, "-"), std::to_string(r.d), std::to_string(r.delta),
                         std::to_string(r.h_plus), std::to_string(r.h),
                         std::to_string(r.unit_norm),
                         r.rep_plus ? "(" + detail::xy_str(r.rep_plus, ",", "") + ")" : "-",
                         r.rep_minus ? "(" + detail::xy_str(r.rep_minus, ",", "") + ")" : "-",
                         r.splitting ? to_string(*r.splitting) : "-",
                         r.verdict ? to_string(*r.verdict) : "-"});
    }
    std::vector<std::size_t> width(csv_columns().size(), 0);
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                os << "  ";
            os << std::setw(static_cast<int>(width[i])) << row[i];
        }
        os << '\n';
    }
    return os.str();
}

/// "rows=N" followed by verdict counts (theorem sweeps) or h-value counts.
inline std::string summary_line(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "rows=" << rows.size();
    const bool has_verdicts =
        std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.verdict.has_value(); });
    if (has_verdicts) {
        for (Verdict v : {Verdict::claim_holds, Verdict::claim_violated, Verdict::hypothesis_not_met})
            os << ' ' << to_string(v) << '='
               << std::count_if(rows.begin(), rows.end(),
                                [&](const ScanRow& r) { return r.verdict == v; });
    } else {
        std::map<i64, std::size_t> by_h;
        for (const auto& r : rows)
            ++by_h[r.h];
        for (const auto& [h, n] : by_h)
            os << " h=" << h << ':' << n;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Class-number cache

/// Map delta -> ClassGroupSummary persisted as
/// {"version": <string>, "entries": {"<delta>": {...}}}.
class SummaryCache {
public:
    static constexpr const char* version = "rqf-summary-cache/1";

    std::optional<ClassGroupSummary> find(i64 delta) const {
        if (auto it = entries_.find(delta); it != entries_.end())
            return it->second;
        return std::nullopt;
    }

    void insert(const ClassGroupSummary& s) { entries_[s.delta] = s; }

    std::size_t size() const { return entries_.size(); }
    const std::map<i64, ClassGroupSummary>& entries() const { return entries_; }

    /// Missing file, unreadable JSON or another version all give an empty
    /// cache; the latter two print a warning.
    static SummaryCache load(const std::filesystem::path& path, std::ostream& warn) {
        SummaryCache cache;
        std::ifstream in(path);
        if (!in)
            return cache;
        try {
            const ojson j = ojson::parse(in);
            if (!j.is_object() || j.value("version", std::string{}) != version) {
                warn << "warning: ignoring cache " << path.string() << " (version mismatch)\n";
                return cache;
            }
            for (const auto& [key, e] : j.at("entries").items()) {
                ClassGroupSummary s;
                s.delta = detail::parse_i64(key);
                s.d = e.at("d").get<i64>();
                s.h_plus = e.at("h_plus").get<i64>();
                s.h = e.at("h").get<i64>();
                s.unit_norm = e.at("unit_norm").get<int>();
                s.genus_rank = e.at("genus_rank").get<int>();
                if (e.at("delta").get<i64>() != s.delta)
                    throw input_error("entry key does not match delta");
                cache.entries_[s.delta] = s;
            }
        } catch (const std::exception& ex) {
            warn << "warning: ignoring corrupt cache " << path.string() << ": " << ex.what()
                 << '\n';
            return SummaryCache{};
        }
        return cache;
    }

    /// Writes to a sibling temporary and renames it into place.
    void save(const std::filesystem::path& path) const {
        ojson j;
        j["version"] = version;
        ojson entries = ojson::object();
        for (const auto& [delta, s] : entries_) {
            ojson e;
            e["d"] = s.d;
            e["delta"] = s.delta;
            e["h_plus"] = s.h_plus;
            e["h"] = s.h;
            e["unit_norm"] = s.unit_norm;
            e["genus_rank"] = s.genus_rank;
            entries[std::to_string(delta)] = e;
        }
        j["entries"] = entries;
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out)
                throw input_error("cannot write cache " + tmp.string());
            out << j.dump(1) << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

private:
    std::map<i64, ClassGroupSummary> entries_;
};

// ---------------------------------------------------------------------------
// Parallel evaluation

/// fn(item) for every item on `jobs` threads; results keep input order. The
/// first exception in input order is rethrown after all workers finish.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, unsigned jobs, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    std::vector<std::optional<Out>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
            try {
                slots[i].emplace(fn(items[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<Out> out;
    out.reserve(items.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct ScanBounds {
    i64 max_a = 0;
    i64 max_m = 0;
    i64 max_p = 0;
    i64 max_d = 0;
};

/// Upper limits accepted by run_scan.
struct ScanBudget {
    i64 max_d = 100'000'000;
    i64 max_param = 100'000;
};

namespace detail {

struct Evaluated {
    ScanRow row;
    ClassGroupSummary summary;
};

inline ClassGroupSummary lookup_or_compute(const SummaryCache& cache, i64 d) {
    if (auto s = cache.find(discriminant_of(d)))
        return *s;
    return wide_class_number(d);
}

} // namespace detail

/// Evaluates every grid point of a family and returns rows sorted by
/// (d, a, m, p). Summaries computed along the way are added to `cache`
/// after all workers have finished.
inline std::vector<ScanRow> run_scan(Family family, const ScanBounds& b, SummaryCache& cache,
                                     unsigned jobs = 1, const ScanBudget& budget = {}) {
    auto check = [](i64 v, i64 limit, const char* flag) {
        if (v < 0 || v > limit)
            throw input_error(std::string(flag) + " must be in [0, " + std::to_string(limit) +
                              "]");
    };
    const SummaryCache& snapshot = cache;
    std::vector<detail::Evaluated> evaluated;

    auto field_row = [&](const char* tag, i64 d, std::optional<i64> a, std::optional<i64> m) {
        detail::Evaluated e;
        e.summary = detail::lookup_or_compute(snapshot, d);
        e.row = row_from_summary(tag, e.summary);
        e.row.a = a;
        e.row.m = m;
        return e;
    };

    switch (family) {
    case Family::paper: {
        check(b.max_a, budget.max_param, "--max-a");
        check(b.max_m, budget.max_param, "--max-m");
        check(b.max_p, budget.max_param, "--max-p");
        if (b.max_a * b.max_a * b.max_m * b.max_m + 4 * b.max_a * b.max_p > budget.max_d)
            throw input_error("largest d of the requested grid exceeds the scan budget");
        const auto grid = gen_paper_family(b.max_a, b.max_m, b.max_p);
        evaluated = parallel_map(grid, jobs, [&](const FamilyParams& fp) {
            std::optional<ClassGroupSummary> used;
            const TheoremReport rep = verify_theorem(fp, [&](i64 d) {
                used = detail::lookup_or_compute(snapshot, d);
                return *used;
            });
            return detail::Evaluated{row_from_report(rep), *used};
        });
        break;
    }
    case Family::bl: {
        check(b.max_d, budget.max_d, "--max-d");
        const auto grid = gen_bl_family(b.max_d);
        evaluated = parallel_map(grid, jobs, [&](const BLMember& g) {
            return field_row("bl", g.d, g.a, g.m);
        });
        break;
    }
    case Family::yokoi: {
        check(b.max_m, budget.max_param, "--max-m");
        const auto grid = gen_yokoi(b.max_m);
        evaluated = parallel_map(grid, jobs, [&](const YokoiMember& g) {
            return field_row("yokoi", g.d, std::nullopt, g.m);
        });
        break;
    }
    case Family::rd: {
        check(b.max_d, budget.max_d, "--max-d");
        std::vector<std::pair<i64, i64>> grid; // (d, m)
        for (i64 d = 2; d <= b.max_d; ++d) {
            if (!is_squarefree(d))
                continue;
            const RDClassification rd = classify_rd(d);
            if (rd.is_rd)
                grid.emplace_back(d, rd.m);
        }
        evaluated = parallel_map(grid, jobs, [&](const std::pair<i64, i64>& g) {
            return field_row("rd", g.first, std::nullopt, g.second);
        });
        break;
    }
    case Family::field:
        throw input_error("the single-field family is not a sweep");
    }

    std::vector<ScanRow> rows;
    rows.reserve(evaluated.size());
    for (auto& e : evaluated) {
        cache.insert(e.summary);
        rows.push_back(std::move(e.row));
    }
    std::stable_sort(rows.begin(), rows.end(), row_less);
    return rows;
}

} // namespace rqf
