#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process
// and check exit codes and emitted bytes.
//
// Exit codes: 0 success, 2 usage or input error, 3 internal consistency
// violation.

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqf/rqf.hpp"

namespace rqf::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_consistency = 3;

enum class Format { table, csv, json };

namespace detail {

inline std::string scalar_text(const ojson& v) {
    if (v.is_null())
        return "";
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ";" : "") + scalar_text(v[i]);
        return s;
    }
    return v.dump();
}

/// A flat record as "key  value" lines, a two-line CSV, or a JSON object.
inline std::string emit_record(const ojson& rec, Format fmt) {
    std::ostringstream os;
    switch (fmt) {
    case Format::json:
        os << rec.dump(2) << '\n';
        break;
    case Format::csv: {
        bool first = true;
        for (const auto& [k, v] : rec.items()) {
            os << (first ? "" : ",") << k;
            first = false;
        }
        os << '\n';
        first = true;
        for (const auto& [k, v] : rec.items()) {
            os << (first ? "" : ",") << scalar_text(v);
            first = false;
        }
        os << '\n';
        break;
    }
    case Format::table: {
        std::size_t w = 0;
        for (const auto& [k, v] : rec.items())
            w = std::max(w, k.size());
        for (const auto& [k, v] : rec.items()) {
            const std::string text = scalar_text(v);
            os << k << std::string(w - k.size() + 2, ' ') << (text.empty() ? "-" : text) << '\n';
        }
        break;
    }
    }
    return os.str();
}

inline std::string emit_rows(const std::vector<ScanRow>& rows, Format fmt) {
    switch (fmt) {
    case Format::json:
        return rows_to_json(rows);
    case Format::csv:
        return rows_to_csv(rows);
    case Format::table:
        return rows_to_table(rows);
    }
    return {};
}

inline ojson nums(const std::vector<i64>& v) {
    ojson a = ojson::array();
    for (i64 x : v)
        a.push_back(x);
    return a;
}

inline ojson witness_json(const std::optional<PellWitness>& w) {
    if (!w)
        return nullptr;
    return ojson::array({w->x.str(), w->y.str()});
}

inline ojson report_json(const TheoremReport& r) {
    ojson j;
    j["a"] = r.params.a;
    j["m"] = r.params.m;
    j["p"] = r.params.p;
    j["d"] = r.d;
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["reason"] = r.reason;
    j["rep_plus"] = r.representation ? witness_json(r.representation->plus) : ojson(nullptr);
    j["rep_minus"] = r.representation ? witness_json(r.representation->minus) : ojson(nullptr);
    j["delta"] = r.summary ? ojson(r.summary->delta) : ojson(nullptr);
    j["h_plus"] = r.summary ? ojson(r.summary->h_plus) : ojson(nullptr);
    j["h"] = r.summary ? ojson(r.summary->h) : ojson(nullptr);
    j["unit_norm"] = r.summary ? ojson(r.summary->unit_norm) : ojson(nullptr);
    j["genus_rank"] = r.summary ? ojson(r.summary->genus_rank) : ojson(nullptr);
    j["splitting"] = r.splitting ? ojson(to_string(*r.splitting)) : ojson(nullptr);
    j["gcd_mp"] = r.gcd_mp;
    j["gcd_branch_applicable"] = r.gcd_branch ? ojson(r.gcd_branch->applicable) : ojson(nullptr);
    j["descent_beta_integral"] =
        r.descent ? ojson(r.descent->integrality.beta_integral) : ojson(nullptr);
    j["descent_conj_integral"] =
        r.descent ? ojson(r.descent->integrality.conj_integral) : ojson(nullptr);
    j["descent_case"] = (r.descent && r.descent->outcome) ? ojson(to_string(*r.descent->outcome))
                                                          : ojson(nullptr);
    j["verdict"] = to_string(r.verdict);
    return j;
}

} // namespace detail

/// Runs the tool on `args` (without the program name). Output is written to
/// `out` only after the command has fully succeeded.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Invariants of real quadratic fields and family sweeps", "rqf"};
    app.require_subcommand(1);

    Format fmt = Format::table;
    const std::map<std::string, Format> formats{
        {"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};
    std::string cache_path;
    unsigned jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", fmt, "table, csv or json")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };

    std::function<std::string()> action;
    std::string trailer; // summary line of a scan

    auto load_cache = [&]() {
        return cache_path.empty() ? SummaryCache{} : SummaryCache::load(cache_path, err);
    };
    auto store_cache = [&](const SummaryCache& c) {
        if (!cache_path.empty())
            c.save(cache_path);
    };

    // classnum
    i64 cn_d = 0;
    auto* classnum = app.add_subcommand("classnum", "class numbers of Q(sqrt d)");
    classnum->add_option("d", cn_d, "squarefree d > 1")->required();
    classnum->add_option("--cache", cache_path, "class-number cache file");
    add_common(classnum);
    classnum->callback([&] {
        action = [&] {
            SummaryCache cache = load_cache();
            const i64 delta = discriminant_of(cn_d);
            ClassGroupSummary s;
            if (auto hit = cache.find(delta)) {
                s = *hit;
            } else {
                s = wide_class_number(cn_d);
                cache.insert(s);
            }
            store_cache(cache);
            if (fmt == Format::table) {
                ojson j;
                j["d"] = s.d;
                j["delta"] = s.delta;
                j["h_plus"] = s.h_plus;
                j["h"] = s.h;
                j["unit_norm"] = s.unit_norm;
                j["genus_rank"] = s.genus_rank;
                return detail::emit_record(j, fmt);
            }
            return detail::emit_rows({row_from_summary("field", s)}, fmt);
        };
    });

    // unit
    i64 unit_d = 0;
    auto* unit = app.add_subcommand("unit", "fundamental unit (t + u sqrt(delta))/2");
    unit->add_option("d", unit_d, "squarefree d > 1")->required();
    add_common(unit);
    unit->callback([&] {
        action = [&] {
            const FundUnit u = fundamental_unit(unit_d);
            ojson j;
            j["d"] = u.d;
            j["delta"] = u.delta;
            j["t"] = u.t.str();
            j["u"] = u.u.str();
            j["norm"] = u.norm;
            j["e_lo"] = u.e_lo.str();
            j["e_hi"] = u.e_hi.str();
            return detail::emit_record(j, fmt);
        };
    });

    // cf
    i64 cf_D = 0, cf_P = 0, cf_Q = 1;
    auto* cf = app.add_subcommand("cf", "continued fraction of (P + sqrt D)/Q");
    cf->add_option("D", cf_D, "positive non-square radicand")->required();
    cf->add_option("--P", cf_P, "numerator offset (default 0)");
    cf->add_option("--Q", cf_Q, "denominator (default 1)");
    add_common(cf);
    cf->callback([&] {
        action = [&] {
            const CFExpansion e = cf_expand(QuadSurd::make(cf_P, cf_Q, cf_D));
            ojson j;
            j["D"] = e.D;
            j["a0"] = e.a0;
            j["preperiod"] = detail::nums(e.preperiod);
            j["period"] = detail::nums(e.period);
            j["period_length"] = e.period.size();
            return detail::emit_record(j, fmt);
        };
    });

    // pell
    i64 pell_d = 0, pell_N = 0;
    auto* pell = app.add_subcommand("pell", "least-y solution of x^2 - d y^2 = N");
    pell->add_option("d", pell_d, "squarefree d > 1")->required();
    pell->add_option("N", pell_N, "nonzero target")->required()->allow_extra_args(false);
    add_common(pell);
    pell->callback([&] {
        action = [&] {
            const auto w = solve_norm_form(pell_d, pell_N);
            ojson j;
            j["d"] = pell_d;
            j["N"] = pell_N;
            j["solvable"] = w.has_value();
            j["x"] = w ? ojson(w->x.str()) : ojson(nullptr);
            j["y"] = w ? ojson(w->y.str()) : ojson(nullptr);
            j["bound"] = norm_form_search_bound(pell_d, pell_N).str();
            return detail::emit_record(j, fmt);
        };
    });

    // verify
    i64 va = 0, vm = 0, vp = 0;
    auto* verify = app.add_subcommand("verify", "evaluate one instance d = a^2 m^2 + 4ap");
    verify->add_option("a", va)->required();
    verify->add_option("m", vm)->required();
    verify->add_option("p", vp)->required();
    add_common(verify);
    verify->callback([&] {
        action = [&] {
            const TheoremReport r = verify_theorem(FamilyParams{va, vm, vp});
            return detail::emit_record(detail::report_json(r), fmt);
        };
    });

    // classify-rd
    i64 rd_d = 0;
    auto* crd = app.add_subcommand("classify-rd", "extended Richaud-Degert decomposition");
    crd->add_option("d", rd_d, "squarefree d > 1")->required();
    add_common(crd);
    crd->callback([&] {
        action = [&] {
            const RDClassification c = classify_rd(rd_d);
            ojson j;
            j["d"] = rd_d;
            j["is_rd"] = c.is_rd;
            j["m"] = c.is_rd ? ojson(c.m) : ojson(nullptr);
            j["r"] = c.is_rd ? ojson(c.r) : ojson(nullptr);
            j["branch"] = c.is_rd ? ojson(to_string(c.branch)) : ojson(nullptr);
            return detail::emit_record(j, fmt);
        };
    });

    // scan
    std::string family_name;
    ScanBounds bounds;
    auto* scan = app.add_subcommand("scan", "sweep a family: paper, bl, yokoi or rd");
    scan->add_option("family", family_name)
        ->required()
        ->check(CLI::IsMember({"paper", "bl", "yokoi", "rd"}));
    scan->add_option("--max-a", bounds.max_a);
    scan->add_option("--max-m", bounds.max_m);
    scan->add_option("--max-p", bounds.max_p);
    scan->add_option("--max-d", bounds.max_d);
    scan->add_option("--cache", cache_path, "class-number cache file");
    scan->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
    add_common(scan);
    scan->callback([&] {
        action = [&] {
            SummaryCache cache = load_cache();
            const auto rows = run_scan(*family_from_string(family_name), bounds, cache, jobs);
            store_cache(cache);
            trailer = summary_line(rows) + "\n";
            std::string text = detail::emit_rows(rows, fmt);
            if (fmt == Format::table) {
                text += trailer;
                trailer.clear();
            }
            return text;
        };
    });

    std::vector<const char*> argv{"rqf"};
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        const std::string text = action();
        out << text;
        if (!trailer.empty())
            err << trailer;
        return exit_ok;
    } catch (const consistency_error& e) {
        err << "consistency violation: " << e.what() << '\n';
        return exit_consistency;
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const budget_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const precision_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_consistency;
    }
}

} // namespace rqf::cli
